#include <sstream>

#include "doctest.h"
#include "greenkernel/errors.hpp"
#include "greenkernel/operator_symbols.hpp"
#include "greenkernel/rkhs_kernel.hpp"
#include "greenkernel/serialization.hpp"
#include "helpers.hpp"

using namespace greenkernel;
using test::make;

TEST_SUITE("serialization") {
  TEST_CASE("models round-trip bit for bit") {
    for (const auto& g : test::catalog()) {
      const auto pts = test::scattered(9, g.dim(), 0.0, 1.0, 0.04, 3);
      Eigen::VectorXd y(9);
      for (int i = 0; i < 9; ++i) y(i) = std::sin(1.0 + 7.0 * pts(i, 0)) / 3.0;
      const auto model = fit(g, g.null_space(), {pts, y});
      const std::string text = to_json(model).dump();
      const auto back = model_from_json(Json::parse(text));
      CAPTURE(g.name());
      CHECK(to_json(back).dump() == text);
      CHECK(back.c() == model.c());
      CHECK(back.beta() == model.beta());
      CHECK(back.centers() == model.centers());
      const auto probe = test::scattered(5, g.dim(), -0.5, 1.5, 0.01, 4);
      CHECK(back.predict(probe) == model.predict(probe));
    }
  }

  TEST_CASE("kernels, spaces, operators and RK descriptors round-trip") {
    for (const auto& g : test::catalog()) {
      const KernelSpec s = kernel_spec_from_json(to_json(g));
      CHECK(GreenKernel(s).spec().name == g.name());
      CHECK(to_json(GreenKernel(s)).dump() == to_json(g).dump());
      const OperatorVector op = operator_for(g);
      CHECK(to_json(operator_from_json(to_json(op))).dump() == to_json(op).dump());
    }
    const PolySpace p = PolySpace::total_degree(2, 1).with_monomials({{1, 1}});
    CHECK(poly_space_from_json(to_json(p)) == p);
    const RkKernel rk = build_rk(make("thin_plate", 2), PolySpace::total_degree(2, 1), test::scattered(5, 2, 0, 1, 0.1, 8));
    CHECK(to_json(rk_from_json(to_json(rk))).dump() == to_json(rk).dump());
  }

  TEST_CASE("non-finite numbers become null") {
    CHECK(to_json(test::vec({1.0, std::nan(""), 2.0})).dump() == "[1.0,null,2.0]");
  }

  TEST_CASE("malformed JSON descriptors") {
    CHECK_THROWS_AS(kernel_spec_from_json(Json::parse(R"({"dim": 1})")), ValidationError);
    CHECK_THROWS_AS(kernel_spec_from_json(Json::parse(R"({"name": "cubic", "dim": "one"})")), ValidationError);
    CHECK_THROWS_AS(poly_space_from_json(Json::parse(R"({"dim": 2, "exponents": [[1]]})")), ValidationError);
    CHECK_THROWS_AS(model_from_json(Json::parse(R"({"kernel": {"name": "cubic", "dim": 1}})")), ValidationError);
  }

  TEST_CASE("CSV datasets") {
    std::istringstream good("x1,x2,y\n0,0,1\n1,0.5,2\n-3e-2,4,5\n");
    const Dataset d = read_dataset_csv(good);
    CHECK(d.size() == 3);
    CHECK(d.dim() == 2);
    CHECK(d.points(2, 0) == -0.03);
    CHECK(d.values(1) == 2.0);

    std::istringstream pts("x1,y\n0.5,9\n1.5,9\n");
    const PointSet p = read_points_csv(pts, 1);
    CHECK(p.rows() == 2);
    CHECK(p(1, 0) == 1.5);

    for (const char* bad : {"", "x1,y\n", "a,b\n1,2\n", "x1,y\n1\n", "x1,y\n1,abc\n", "x1,y\n1,2,3\n", "x2,y\n1,2\n",
                            "x1,y\n1,2\n1,3\n"}) {
      std::istringstream in(bad);
      CAPTURE(bad);
      CHECK_THROWS_AS(read_dataset_csv(in), ValidationError);
    }
    std::istringstream wrong_dim("x1,y\n1,2\n");
    CHECK_THROWS_AS(read_points_csv(wrong_dim, 2), ValidationError);
  }

  TEST_CASE("CSV output round-trips doubles") {
    const auto pts = test::scattered(20, 2, -1.0, 1.0, 0.01, 6);
    Eigen::VectorXd y = pts.col(0).array().exp() / 3.0;
    std::stringstream io;
    write_csv(io, pts, y);
    const Dataset back = read_dataset_csv(io);
    CHECK(back.points == pts);
    CHECK(back.values == y);
    CHECK(format_double(0.1) == "0.10000000000000001");
  }
}
