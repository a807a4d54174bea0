#include "greenkernel/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "greenkernel/errors.hpp"

namespace greenkernel {
namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("JSON is missing field '") + key + "'");
  return j.at(key);
}

double as_double(const Json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string("JSON field '") + what + "' must be a number");
  return j.get<double>();
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ValidationError(std::string("JSON field '") + what + "' must be an integer");
  return j.get<int>();
}

Eigen::VectorXd vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string("JSON field '") + what + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = as_double(j[i], what);
  return v;
}

Eigen::MatrixXd matrix_from_json(const Json& j, Eigen::Index cols, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string("JSON field '") + what + "' must be an array of rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Eigen::VectorXd row = vector_from_json(j[i], what);
    if (row.size() != cols) throw ValidationError(std::string("JSON field '") + what + "' has a row of wrong length");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

MultiIndex multi_index_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("multi-index must be an array of integers");
  MultiIndex a;
  for (const auto& e : j) a.push_back(as_int(e, "alpha"));
  return a;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ValidationError("malformed CSV: '" + s + "' on line " + std::to_string(line) + " is not a number");
  }
  return v;
}

// Header plus numeric rows; blank lines are skipped.
std::vector<std::vector<double>> read_table(std::istream& in, std::vector<std::string>& header) {
  std::string line;
  int lineno = 0;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (!have_header) {
      header = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != header.size()) {
      throw ValidationError("malformed CSV: line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                            " columns, header has " + std::to_string(header.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, lineno));
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ValidationError("malformed CSV: missing header row");
  return rows;
}

void check_coordinate_header(const std::vector<std::string>& header, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string expected = "x" + std::to_string(i + 1);
    if (header[i] != expected) {
      throw ValidationError("malformed CSV header: expected '" + expected + "', found '" + header[i] + "'");
    }
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return out;
}

Json to_json(const KernelSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["dim"] = spec.dim;
  if (spec.scale) j["scale"] = *spec.scale;
  if (spec.smoothness) j["smoothness"] = *spec.smoothness;
  if (spec.regularization) j["regularization"] = *spec.regularization;
  return j;
}

Json to_json(const GreenKernel& kernel) { return to_json(kernel.spec()); }

KernelSpec kernel_spec_from_json(const Json& j) {
  KernelSpec spec;
  const Json& name = field(j, "name");
  if (!name.is_string()) throw ValidationError("kernel name must be a string");
  spec.name = name.get<std::string>();
  spec.dim = as_int(field(j, "dim"), "dim");
  if (j.contains("scale") && !j["scale"].is_null()) spec.scale = as_double(j["scale"], "scale");
  if (j.contains("smoothness") && !j["smoothness"].is_null()) spec.smoothness = as_int(j["smoothness"], "smoothness");
  if (j.contains("regularization") && !j["regularization"].is_null()) {
    spec.regularization = as_double(j["regularization"], "regularization");
  }
  return spec;
}

Json to_json(const PolySpace& space) {
  Json j;
  j["dim"] = space.dim();
  Json ex = Json::array();
  for (const auto& e : space.exponents()) ex.push_back(e);
  j["exponents"] = ex;
  return j;
}

PolySpace poly_space_from_json(const Json& j) {
  const int dim = as_int(field(j, "dim"), "dim");
  std::vector<MultiIndex> exps;
  const Json& ex = field(j, "exponents");
  if (!ex.is_array()) throw ValidationError("exponents must be an array");
  for (const auto& e : ex) exps.push_back(multi_index_from_json(e));
  return PolySpace(dim, std::move(exps));
}

Json to_json(const InterpolationModel& model) {
  Json j;
  j["kernel"] = to_json(model.kernel());
  j["space"] = to_json(model.space());
  j["centers"] = to_json(Eigen::MatrixXd(model.centers()));
  j["c"] = to_json(model.c());
  j["beta"] = to_json(model.beta());
  return j;
}

InterpolationModel model_from_json(const Json& j) {
  const GreenKernel kernel(kernel_spec_from_json(field(j, "kernel")));
  PolySpace space = poly_space_from_json(field(j, "space"));
  PointSet centers = matrix_from_json(field(j, "centers"), kernel.dim(), "centers");
  return InterpolationModel(kernel, std::move(space), std::move(centers), vector_from_json(field(j, "c"), "c"),
                            vector_from_json(field(j, "beta"), "beta"));
}

Json to_json(const OperatorVector& op) {
  Json j;
  j["dim"] = op.dim();
  j["claimed_order"] = op.claimed_order();
  Json entries = Json::array();
  for (const auto& e : op.entries()) {
    Json je;
    if (e.type == OperatorEntry::Type::differential) {
      je["type"] = "differential";
      Json terms = Json::array();
      for (const auto& t : e.terms) {
        Json jt;
        jt["alpha"] = t.alpha;
        jt["coeff"] = number(t.coeff);
        terms.push_back(jt);
      }
      je["terms"] = terms;
    } else {
      je["type"] = "closed_form";
      je["name"] = e.name;
      je["scale"] = number(e.scale);
    }
    entries.push_back(je);
  }
  j["entries"] = entries;
  return j;
}

OperatorVector operator_from_json(const Json& j) {
  const int dim = as_int(field(j, "dim"), "dim");
  const int order = as_int(field(j, "claimed_order"), "claimed_order");
  std::vector<OperatorEntry> entries;
  const Json& je = field(j, "entries");
  if (!je.is_array()) throw ValidationError("operator entries must be an array");
  for (const auto& e : je) {
    const Json& type = field(e, "type");
    if (type == "differential") {
      std::vector<DifferentialTerm> terms;
      for (const auto& t : field(e, "terms")) {
        terms.push_back({multi_index_from_json(field(t, "alpha")), as_double(field(t, "coeff"), "coeff")});
      }
      entries.push_back(OperatorEntry::differential(std::move(terms)));
    } else if (type == "closed_form") {
      const Json& name = field(e, "name");
      if (!name.is_string()) throw ValidationError("closed-form entry name must be a string");
      entries.push_back(OperatorEntry::closed_form(name.get<std::string>(), as_double(field(e, "scale"), "scale")));
    } else {
      throw ValidationError("unknown operator entry type");
    }
  }
  return OperatorVector(dim, order, std::move(entries));
}

Json to_json(const RkKernel& rk) {
  Json j;
  j["phi"] = to_json(rk.phi());
  j["xi"] = to_json(Eigen::MatrixXd(rk.xi_set().points()));
  j["space"] = to_json(rk.space());
  return j;
}

RkKernel rk_from_json(const Json& j) {
  const GreenKernel phi(kernel_spec_from_json(field(j, "phi")));
  const PolySpace space = poly_space_from_json(field(j, "space"));
  PointSet xi = matrix_from_json(field(j, "xi"), phi.dim(), "xi");
  return build_rk(phi, UnisolventSet(space, std::move(xi)), space);
}

Json to_json(const SeminormReport& r) {
  Json j;
  j["gram_value"] = number(r.gram_value);
  j["quadrature_value"] = number(r.quadrature_value);
  j["relative_gap"] = number(r.relative_gap);
  j["per_operator"] = numbers(r.per_operator);
  j["domain"] = {{"lo", to_json(r.domain_lo)}, {"hi", to_json(r.domain_hi)}};
  j["tail_bound"] = number(r.tail_bound);
  j["quadrature_error"] = number(r.quadrature_error);
  j["panels"] = r.panels;
  j["rings"] = r.rings;
  if (r.n_max) j["n_max"] = *r.n_max;
  if (r.truncation_remainder) j["truncation_remainder"] = number(*r.truncation_remainder);
  return j;
}

Json to_json(const ScaledComparison& r) {
  Json j;
  j["a"] = to_json(r.a);
  j["b"] = to_json(r.b);
  j["ratio"] = number(r.ratio);
  j["order_contributions_a"] = numbers(r.order_contributions_a);
  j["order_contributions_b"] = numbers(r.order_contributions_b);
  return j;
}

Json to_json(const PdReport& r) {
  Json j;
  j["trials"] = r.trials;
  j["n_points"] = r.n_points;
  j["min"] = number(r.min);
  j["median"] = number(r.median);
  j["max"] = number(r.max);
  j["min_relative"] = number(r.min_relative);
  j["all_positive"] = r.all_positive;
  j["min_eigenvalues"] = numbers(r.min_eigenvalues);
  return j;
}

Json to_json(const EquivalenceReport& r) {
  Json j;
  j["max_deviation"] = number(r.max_deviation);
  j["k_residual"] = number(r.k_residual);
  j["phi_residual"] = number(r.phi_residual);
  j["xi_in_data"] = r.xi_in_data;
  j["k_coefficients"] = to_json(r.k_coefficients);
  return j;
}

Json to_json(const OrderEstimate& e) {
  Json j;
  j["order"] = e.order;
  j["slope"] = number(e.slope);
  j["direction_slopes"] = numbers(e.direction_slopes);
  return j;
}

Json to_json(const HypothesisReport& r) {
  Json j;
  j["min_l"] = number(r.min_l);
  j["min_l_radius"] = number(r.min_l_radius);
  j["positive_on_samples"] = r.positive_on_samples;
  j["growth_exponent"] = number(r.growth_exponent);
  j["slowly_increasing"] = r.slowly_increasing;
  j["origin_slope"] = number(r.origin_slope);
  j["uniform_origin_order"] = r.uniform_origin_order;
  j["origin_order"] = r.origin_order;
  j["note"] = r.note;
  return j;
}

Json to_json(const LoocvResult& r) {
  Json j;
  j["rms"] = number(r.rms);
  j["errors"] = to_json(r.errors);
  return j;
}

Json to_json(const ScaleSweep& s) {
  Json j;
  j["scales"] = numbers(s.scales);
  j["errors"] = numbers(s.errors);
  j["best_scale"] = number(s.best_scale);
  j["best_error"] = number(s.best_error);
  return j;
}

Json to_json(const OrthogonalityReport& r) {
  Json j;
  j["large_squared"] = number(r.large_squared);
  j["small_squared"] = number(r.small_squared);
  j["difference_squared"] = number(r.difference_squared);
  j["relative_gap"] = number(r.relative_gap);
  j["holds"] = r.holds;
  return j;
}

Json to_json(const CpdCheckReport& r) {
  Json j;
  j["trials"] = r.trials;
  j["max_points"] = r.max_points;
  j["strictly_positive"] = r.strictly_positive;
  j["within_tolerance"] = r.within_tolerance;
  j["min_scaled_quadratic_form"] = number(r.min_scaled);
  j["passed"] = r.passed;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in = open_input(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("failed writing " + path);
}

Dataset read_dataset_csv(std::istream& in) {
  std::vector<std::string> header;
  const auto rows = read_table(in, header);
  if (header.size() < 2 || header.back() != "y") {
    throw ValidationError("malformed CSV header: expected x1..xd,y");
  }
  const std::size_t dim = header.size() - 1;
  check_coordinate_header(header, dim);
  if (rows.empty()) throw ValidationError("malformed CSV: no data rows");
  Dataset data;
  data.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  data.values.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < dim; ++k) data.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    data.values(static_cast<Eigen::Index>(i)) = rows[i][dim];
  }
  data.validate();
  return data;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_dataset_csv(in);
}

PointSet read_points_csv(std::istream& in, int dim) {
  std::vector<std::string> header;
  const auto rows = read_table(in, header);
  const auto d = static_cast<std::size_t>(dim);
  const bool with_y = header.size() == d + 1 && header.back() == "y";
  if (header.size() != d && !with_y) {
    throw ValidationError("malformed CSV header: expected x1..x" + std::to_string(dim));
  }
  check_coordinate_header(header, d);
  PointSet p(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  if (!p.allFinite()) throw ValidationError("evaluation points must be finite");
  return p;
}

PointSet read_points_csv(const std::string& path, int dim) {
  std::ifstream in = open_input(path);
  return read_points_csv(in, dim);
}

void write_csv(std::ostream& out, const PointSet& points, const Eigen::VectorXd& values) {
  for (Eigen::Index k = 0; k < points.cols(); ++k) out << 'x' << (k + 1) << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index k = 0; k < points.cols(); ++k) out << format_double(points(i, k)) << ',';
    out << format_double(values(i)) << '\n';
  }
}

}  // namespace greenkernel
