#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "acceptance.hpp"
#include "greenkernel/errors.hpp"
#include "greenkernel/interpolation.hpp"
#include "greenkernel/kernel_catalog.hpp"
#include "greenkernel/operator_symbols.hpp"
#include "greenkernel/rkhs_kernel.hpp"
#include "greenkernel/serialization.hpp"
#include "greenkernel/sobolev_verify.hpp"

namespace greenkernel::cli {
namespace {

struct KernelFlags {
  std::string name;
  std::optional<int> dim;
  std::optional<double> scale;
  std::optional<int> smoothness;
  std::optional<double> regularization;

  GreenKernel build() const {
    KernelSpec spec;
    spec.name = name;
    spec.dim = dim.value_or(name == "thin_plate" || name == "laplacian_tps" || name == "regularized_log_bessel" ? 2 : 1);
    spec.scale = scale;
    spec.smoothness = smoothness;
    spec.regularization = regularization;
    return GreenKernel(spec);
  }
};

struct Config {
  KernelFlags kernel;
  std::string space = "auto";
  std::string data;
  std::string model;
  std::string points;
  std::string rk;
  std::string out;
  std::string method = "both";
  std::string scales;
  std::uint64_t seed = kDefaultSeed;
  int trials = 1000;
  int n = 20;
  std::optional<int> n_max;
  std::optional<double> tolerance;
  double ridge = 0.0;
  bool pretty = false;
};

void add_kernel_flags(CLI::App* app, Config& c, bool required = true) {
  auto* k = app->add_option("--kernel", c.kernel.name, "catalog entry name");
  if (required) k->required();
  app->add_option("--dim", c.kernel.dim, "spatial dimension");
  app->add_option("--scale", c.kernel.scale, "scale parameter sigma");
  app->add_option("--smoothness", c.kernel.smoothness, "integer smoothness (polyharmonic m, matern n)");
  app->add_option("--regularization", c.kernel.regularization, "shift r of regularized_log_bessel");
}

void add_common(CLI::App* app, Config& c) {
  app->add_option("--out", c.out, "output file (default: stdout)");
  app->add_flag("--pretty", c.pretty, "human-readable rendering instead of JSON");
}

// poly:k[+mono...], auto, none; monomials like x1*x2 or x1^2*x3.
PolySpace parse_space(const std::string& text, const GreenKernel& kernel) {
  const int d = kernel.dim();
  if (text == "auto") return kernel.null_space();
  if (text == "none") return PolySpace::total_degree(d, -1);
  if (text.rfind("poly:", 0) != 0) throw ValidationError("space must be poly:k[+monomial], auto or none");
  std::string rest = text.substr(5);
  std::vector<std::string> parts;
  std::stringstream ss(rest);
  std::string part;
  while (std::getline(ss, part, '+')) parts.push_back(part);
  if (parts.empty()) throw ValidationError("space needs a degree after poly:");
  int degree = 0;
  try {
    std::size_t used = 0;
    degree = std::stoi(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ValidationError("invalid polynomial degree '" + parts[0] + "'");
  }
  std::vector<MultiIndex> extra;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    MultiIndex e(static_cast<std::size_t>(d), 0);
    std::stringstream fs(parts[i]);
    std::string factor;
    while (std::getline(fs, factor, '*')) {
      int var = 0, power = 1;
      char x = 0;
      std::stringstream f(factor);
      f >> x >> var;
      if (x != 'x' || var < 1 || var > d) throw ValidationError("invalid monomial factor '" + factor + "'");
      if (f.peek() == '^') {
        f.get();
        f >> power;
      }
      if (!f.eof() && f.peek() != EOF) throw ValidationError("invalid monomial factor '" + factor + "'");
      if (power < 0) throw ValidationError("negative exponent in '" + factor + "'");
      e[static_cast<std::size_t>(var - 1)] += power;
    }
    extra.push_back(e);
  }
  return PolySpace::total_degree(d, degree).with_monomials(extra);
}

std::vector<double> parse_scales(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("invalid scale '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError("--scales needs at least one value");
  return out;
}

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw ValidationError(std::string(flag) + " is required");
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string("cannot open ") + flag + " file " + path);
}

void render_pretty(const Json& j, std::ostream& out, const std::string& prefix = "") {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_structured() && !(it.value().is_array() && it.value().size() <= 8 &&
                                          std::all_of(it.value().begin(), it.value().end(),
                                                      [](const Json& e) { return e.is_primitive(); }))) {
        out << prefix << it.key() << ":\n";
        render_pretty(it.value(), out, prefix + "  ");
      } else {
        out << prefix << std::left << std::setw(28) << it.key() << ' ' << it.value().dump() << '\n';
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (j[i].is_structured()) {
        out << prefix << '[' << i << "]\n";
        render_pretty(j[i], out, prefix + "  ");
      } else {
        out << prefix << '[' << i << "] " << j[i].dump() << '\n';
      }
    }
  } else {
    out << prefix << j.dump() << '\n';
  }
}

// Report to --out or stdout.
void emit(const Json& report, const Config& c, std::ostream& out) {
  std::ostringstream text;
  if (c.pretty) {
    render_pretty(report, text);
  } else {
    text << report.dump(2) << '\n';
  }
  if (c.out.empty()) {
    out << text.str();
  } else {
    write_text_file(c.out, text.str());
  }
}

PointSet default_grid(const PointSet& x) {
  const int d = static_cast<int>(x.cols());
  const Eigen::VectorXd lo = x.colwise().minCoeff().transpose(), hi = x.colwise().maxCoeff().transpose();
  const Eigen::VectorXd pad = (0.25 * (hi - lo)).cwiseMax(0.25);
  if (d == 1) {
    PointSet g(201, 1);
    for (int i = 0; i < 201; ++i) g(i, 0) = lo(0) - pad(0) + (hi(0) - lo(0) + 2 * pad(0)) * i / 200.0;
    return g;
  }
  if (d == 2) {
    PointSet g(441, 2);
    for (int i = 0; i < 21; ++i) {
      for (int j = 0; j < 21; ++j) {
        g.row(21 * i + j) << lo(0) - pad(0) + (hi(0) - lo(0) + 2 * pad(0)) * i / 20.0,
            lo(1) - pad(1) + (hi(1) - lo(1) + 2 * pad(1)) * j / 20.0;
      }
    }
    return g;
  }
  return x;
}

Json kernels_list() {
  Json list = Json::array();
  for (const auto& name : GreenKernel::names()) {
    const GreenKernel k(KernelFlags{name, {}, {}, {}, name == "regularized_log_bessel" ? std::optional<double>(1.0)
                                                                                         : std::nullopt}
                            .build());
    Json e;
    e["name"] = name;
    e["default"] = to_json(k);
    e["cpd_order"] = k.cpd_order();
    e["cpd_guaranteed"] = k.cpd_guaranteed();
    e["decay"] = k.decay() == Decay::exponential ? "exponential" : "algebraic";
    list.push_back(e);
  }
  return list;
}

int dispatch(CLI::App& app, const Config& c, std::ostream& out) {
  auto sub = [&](const char* name) { return app.got_subcommand(name); };

  if (sub("kernels")) {
    emit(kernels_list(), c, out);
    return 0;
  }
  if (sub("fit")) {
    require_file(c.data, "--data");
    const GreenKernel kernel = c.kernel.build();
    const PolySpace space = parse_space(c.space, kernel);
    const Dataset data = read_dataset_csv(c.data);
    FitOptions opts;
    opts.ridge = c.ridge;
    const InterpolationModel model = fit(kernel, space, data, opts);
    Json j = to_json(model);
    j["condition_estimate"] = model.condition_estimate();
    j["max_residual"] = (model.predict(data.points) - data.values).cwiseAbs().maxCoeff();
    emit(j, c, out);
    return 0;
  }
  if (sub("predict")) {
    require_file(c.model, "--model");
    require_file(c.points, "--points");
    const InterpolationModel model = model_from_json(read_json_file(c.model));
    const PointSet p = read_points_csv(c.points, model.kernel().dim());
    std::ostringstream csv;
    write_csv(csv, p, model.predict(p));
    if (c.out.empty()) {
      out << csv.str();
    } else {
      write_text_file(c.out, csv.str());
    }
    return 0;
  }
  if (sub("cpd-check")) {
    const GreenKernel kernel = c.kernel.build();
    const PolySpace space = parse_space(c.space, kernel);
    const CpdCheckReport rep = cpd_check(kernel, space, c.trials, c.n, c.seed);
    Json j;
    j["kernel"] = to_json(kernel);
    j["space"] = to_json(space);
    j["seed"] = c.seed;
    j["report"] = to_json(rep);
    j["verdict"] = rep.passed ? "min quadratic form > 0" : "quadratic form not positive on some trial";
    emit(j, c, out);
    return rep.passed ? 0 : 2;
  }
  if (sub("order-estimate")) {
    const GreenKernel kernel = c.kernel.build();
    const OperatorVector op = operator_for(kernel);
    OrderEstimateOptions opts;
    opts.seed = c.seed;
    HypothesisSampling sampling;
    sampling.seed = c.seed;
    Json j;
    j["kernel"] = to_json(kernel);
    j["operator"] = to_json(op);
    j["catalog_order"] = kernel.cpd_order();
    j["hypotheses"] = to_json(check_theorem_hypotheses(op, sampling));
    j["estimate"] = to_json(estimate_cpd_order(op, opts));
    emit(j, c, out);
    return 0;
  }
  if (sub("seminorm")) {
    require_file(c.model, "--model");
    const InterpolationModel model = model_from_json(read_json_file(c.model));
    Json j;
    j["kernel"] = to_json(model.kernel());
    j["method"] = c.method;
    int code = 0;
    if (c.method == "gram") {
      const double g = gram_seminorm(model);
      j["gram_value"] = g * g;
      j["seminorm"] = g;
    } else {
      QuadSpec spec;
      spec.n_max = c.n_max;
      const OperatorVector op = operator_for(model.kernel());
      const SeminormReport rep = hp_seminorm(model, op, spec);
      j["operator"] = to_json(op);
      j["report"] = to_json(rep);
      if (c.method == "quadrature") {
        j["report"].erase("gram_value");
        j["report"].erase("relative_gap");
      } else if (c.tolerance) {
        const double allowed = *c.tolerance + rep.tail_bound / std::max(rep.gram_value, 1e-300);
        j["tolerance"] = *c.tolerance;
        j["within_tolerance"] = rep.relative_gap <= allowed;
        if (rep.relative_gap > allowed) code = 2;
      }
    }
    emit(j, c, out);
    return code;
  }
  if (sub("rk-build")) {
    require_file(c.data, "--data");
    const GreenKernel kernel = c.kernel.build();
    const PolySpace space = parse_space(c.space, kernel);
    const Dataset data = read_dataset_csv(c.data);
    emit(to_json(build_rk(kernel, space, data.points)), c, out);
    return 0;
  }
  if (sub("rk-equivalence")) {
    require_file(c.data, "--data");
    const Dataset data = read_dataset_csv(c.data);
    std::optional<RkKernel> rk;
    if (!c.rk.empty()) {
      require_file(c.rk, "--rk");
      rk = rk_from_json(read_json_file(c.rk));
    } else {
      if (c.kernel.name.empty()) throw ValidationError("rk-equivalence needs --rk or --kernel");
      const GreenKernel kernel = c.kernel.build();
      rk = build_rk(kernel, parse_space(c.space, kernel), data.points);
    }
    const PointSet grid = c.points.empty() ? default_grid(data.points) : read_points_csv(c.points, rk->phi().dim());
    const double tol = c.tolerance.value_or(1e-7);
    const EquivalenceReport eq = check_equivalence(*rk, data, grid);
    const PdReport pd = check_pd(*rk, std::min(c.trials, 100000), std::min(c.n, 1000), c.seed);
    Json j;
    j["rk"] = to_json(*rk);
    j["equivalence"] = to_json(eq);
    j["positive_definite"] = to_json(pd);
    j["tolerance"] = tol;
    const bool ok = eq.max_deviation <= tol && pd.all_positive;
    j["passed"] = ok;
    emit(j, c, out);
    return ok ? 0 : 2;
  }
  if (sub("loocv")) {
    require_file(c.data, "--data");
    const GreenKernel kernel = c.kernel.build();
    const PolySpace space = parse_space(c.space, kernel);
    const Dataset data = read_dataset_csv(c.data);
    Json j;
    j["kernel"] = to_json(kernel);
    if (c.scales.empty()) {
      j["loocv"] = to_json(loocv_error(kernel, space, data));
    } else {
      j["sweep"] = to_json(sweep_scales(kernel, space, data, parse_scales(c.scales)));
    }
    emit(j, c, out);
    return 0;
  }
  if (sub("verify-all")) {
    std::ostringstream table;
    const auto results = acceptance::run_all(c.seed, true, c.pretty ? &table : nullptr);
    bool ok = results.size() == 10;
    Json list = Json::array();
    for (const auto& r : results) {
      ok = ok && r.passed;
      Json e;
      e["criterion"] = r.id;
      e["name"] = r.name;
      e["passed"] = r.passed;
      e["metric"] = std::isfinite(r.measured) ? Json(r.measured) : Json(nullptr);
      e["threshold"] = r.threshold;
      e["detail"] = r.detail;
      list.push_back(e);
    }
    if (c.pretty) {
      if (!ok && !results.empty()) table << "failed: " << results.back().name << '\n';
      if (c.out.empty()) {
        out << table.str();
      } else {
        write_text_file(c.out, table.str());
      }
    } else {
      Json j;
      j["seed"] = c.seed;
      j["passed"] = ok;
      j["criteria"] = list;
      if (!ok && !results.empty()) j["failed"] = results.back().name;
      emit(j, c, out);
    }
    return ok ? 0 : 2;
  }
  throw ValidationError("exactly one subcommand is required");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Green-function kernels: interpolation, native-space checks and catalog inspection"};
  app.require_subcommand(1);
  Config c;

  auto* kernels = app.add_subcommand("kernels", "catalog inspection");
  kernels->add_subcommand("list", "list catalog entries")->require_subcommand(0);
  kernels->require_subcommand(1);
  add_common(kernels, c);
  for (auto* s : kernels->get_subcommands({})) add_common(s, c);

  auto* fit_cmd = app.add_subcommand("fit", "fit an interpolant to CSV data");
  add_kernel_flags(fit_cmd, c);
  fit_cmd->add_option("--space", c.space, "poly:k[+x1*x2], auto or none");
  fit_cmd->add_option("--data", c.data, "CSV with header x1..xd,y")->required();
  fit_cmd->add_option("--ridge", c.ridge, "diagonal ridge added to the kernel matrix");
  add_common(fit_cmd, c);

  auto* predict = app.add_subcommand("predict", "evaluate a fitted model");
  predict->add_option("--model", c.model, "model JSON")->required();
  predict->add_option("--points", c.points, "CSV with header x1..xd")->required();
  add_common(predict, c);

  auto* cpd = app.add_subcommand("cpd-check", "random constrained quadratic-form trials");
  add_kernel_flags(cpd, c);
  cpd->add_option("--space", c.space, "poly:k[+x1*x2], auto or none");
  cpd->add_option("--trials", c.trials, "number of trials");
  cpd->add_option("--n", c.n, "maximal number of points per trial");
  cpd->add_option("--seed", c.seed, "random seed");
  add_common(cpd, c);

  auto* order = app.add_subcommand("order-estimate", "CPD order from the symbol slope at the origin");
  add_kernel_flags(order, c);
  order->add_option("--seed", c.seed, "random seed");
  add_common(order, c);

  auto* semi = app.add_subcommand("seminorm", "native-space semi-norm of a model");
  semi->add_option("--model", c.model, "model JSON")->required();
  semi->add_option("--method", c.method, "gram, quadrature or both")
      ->check(CLI::IsMember({"gram", "quadrature", "both"}));
  semi->add_option("--n-max", c.n_max, "truncation order for closed-form operators");
  semi->add_option("--tolerance", c.tolerance, "relative tolerance for --method both (exit 2 on breach)");
  add_common(semi, c);

  auto* rk_build = app.add_subcommand("rk-build", "reproducing kernel from a unisolvent subset of the data");
  add_kernel_flags(rk_build, c);
  rk_build->add_option("--space", c.space, "poly:k[+x1*x2], auto or none");
  rk_build->add_option("--data", c.data, "CSV with header x1..xd,y")->required();
  add_common(rk_build, c);

  auto* rk_eq = app.add_subcommand("rk-equivalence", "compare K and Phi interpolants");
  add_kernel_flags(rk_eq, c, false);
  rk_eq->add_option("--space", c.space, "poly:k[+x1*x2], auto or none");
  rk_eq->add_option("--rk", c.rk, "RK JSON from rk-build");
  rk_eq->add_option("--data", c.data, "CSV with header x1..xd,y")->required();
  rk_eq->add_option("--points", c.points, "evaluation grid CSV");
  rk_eq->add_option("--tolerance", c.tolerance, "maximal deviation (default 1e-7)");
  rk_eq->add_option("--trials", c.trials, "K-Gram eigenvalue trials")->default_val(100);
  rk_eq->add_option("--n", c.n, "points per K-Gram trial")->default_val(8);
  rk_eq->add_option("--seed", c.seed, "random seed");
  add_common(rk_eq, c);

  auto* loocv_cmd = app.add_subcommand("loocv", "leave-one-out error and scale sweep");
  add_kernel_flags(loocv_cmd, c);
  loocv_cmd->add_option("--space", c.space, "poly:k[+x1*x2], auto or none");
  loocv_cmd->add_option("--data", c.data, "CSV with header x1..xd,y")->required();
  loocv_cmd->add_option("--scales", c.scales, "comma-separated candidate scales");
  add_common(loocv_cmd, c);

  auto* verify = app.add_subcommand("verify-all", "run the acceptance suite");
  verify->add_option("--seed", c.seed, "random seed");
  add_common(verify, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    return dispatch(app, c, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace greenkernel::cli
