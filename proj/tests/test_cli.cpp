#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "greenkernel/serialization.hpp"

namespace fs = std::filesystem;
using greenkernel::Json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = greenkernel::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "greenkernel_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("kernels list") {
    const Run r = run({"kernels", "list"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.size() == 10);
    CHECK(j[0]["name"] == "cubic");
  }

  TEST_CASE("fit then predict") {
    const fs::path dir = scratch();
    const auto data = write(dir / "d.csv", "x1,y\n0,0\n1,1\n2,0\n");
    const auto pts = write(dir / "p.csv", "x1\n0\n1\n2\n0.5\n");
    const auto model = (dir / "m.json").string();
    const Run f = run({"fit", "--kernel", "cubic", "--dim", "1", "--space", "poly:1", "--data", data, "--out", model});
    REQUIRE(f.code == 0);
    const Run p = run({"predict", "--model", model, "--points", pts});
    REQUIRE(p.code == 0);
    std::istringstream csv(p.out);
    const auto back = greenkernel::read_dataset_csv(csv);
    CHECK(back.values(0) == doctest::Approx(0.0).scale(1.0));
    CHECK(back.values(1) == doctest::Approx(1.0));
    CHECK(back.values(3) == doctest::Approx(0.6875));

    const Run s = run({"seminorm", "--model", model, "--method", "both"});
    CHECK(s.code == 0);
    const Json j = Json::parse(s.out);
    CHECK(j["report"]["gram_value"].get<double>() == doctest::Approx(6.0).epsilon(1e-10));
    CHECK(j["report"]["relative_gap"].get<double>() <= 1e-6);
  }

  TEST_CASE("stochastic certificate and determinism") {
    const std::vector<std::string> args{"cpd-check", "--kernel", "thin_plate", "--dim", "2", "--trials", "200", "--n", "12", "--seed", "1"};
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(Json::parse(a.out)["verdict"] == "min quadratic form > 0");
  }

  TEST_CASE("order estimate and RK commands") {
    const Run o = run({"order-estimate", "--kernel", "tension", "--scale", "1"});
    REQUIRE(o.code == 0);
    CHECK(Json::parse(o.out)["estimate"]["order"] == 1);

    const fs::path dir = scratch();
    const auto data = write(dir / "rk.csv", "x1,y\n0,0\n1,1\n2,0\n3,2\n");
    const Run rk = run({"rk-build", "--kernel", "cubic", "--data", data, "--out", (dir / "rk.json").string()});
    REQUIRE(rk.code == 0);
    const Run eq = run({"rk-equivalence", "--rk", (dir / "rk.json").string(), "--data", data});
    CHECK(eq.code == 0);
    const Run lo = run({"loocv", "--kernel", "gaussian", "--data", data, "--scales", "1,2,4"});
    CHECK(lo.code == 0);
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == 1);
    CHECK(run({"fit", "--kernel", "nonsense", "--data", "/nonexistent.csv"}).code == 1);
    const fs::path dir = scratch();
    const auto bad = write(dir / "bad.csv", "x1,y\n0,zero\n");
    CHECK(run({"fit", "--kernel", "cubic", "--data", bad}).code == 1);
    const auto dup = write(dir / "dup.csv", "x1,y\n0,1\n0,2\n1,0\n");
    CHECK(run({"fit", "--kernel", "cubic", "--data", dup}).code == 1);
    std::ostringstream many;
    many << "x1,y\n";
    for (int i = 0; i <= 10; ++i) many << i * 0.1 << ',' << (i % 3) << '\n';
    const auto close = write(dir / "close.csv", many.str());
    CHECK(run({"fit", "--kernel", "gaussian", "--scale", "0.05", "--data", close}).code == 2);
  }
}
