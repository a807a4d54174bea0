#include <cmath>
#include <initializer_list>

#include "doctest.h"
#include "greenkernel/bessel.hpp"

namespace bessel = greenkernel::bessel;

TEST_SUITE("bessel") {
  TEST_CASE("K_nu agrees with the standard library") {
    for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.5}) {
      for (double z : {0.05, 0.3, 1.0, 1.9, 2.0, 2.1, 3.5, 7.0, 20.0, 60.0}) {
        const double expected = std::cyl_bessel_k(nu, z);
        CAPTURE(nu);
        CAPTURE(z);
        CHECK(bessel::k(nu, z) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(bessel::k(-nu, z) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("scaled form and its limit at zero") {
    CHECK(bessel::scaled_k(1.5, 0.7) == doctest::Approx(std::pow(0.7, 1.5) * std::cyl_bessel_k(1.5, 0.7)));
    // 2^{nu-1} Gamma(nu)
    CHECK(bessel::scaled_k(2.0, 0.0) == doctest::Approx(2.0));
    CHECK(bessel::scaled_k(0.5, 0.0) == doctest::Approx(std::sqrt(M_PI / 2.0)));
    CHECK(std::isinf(bessel::scaled_k(0.0, 0.0)));
    CHECK(bessel::scaled_k(2.5, 1e-9) == doctest::Approx(bessel::scaled_k(2.5, 0.0)).epsilon(1e-9));
  }
}
