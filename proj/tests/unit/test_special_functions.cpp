#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "riesz/errors.hpp"
#include "riesz/rng.hpp"
#include "riesz/special_functions.hpp"

using namespace riesz;

TEST_SUITE("special_functions") {
  TEST_CASE("hurwitz zeta matches the mpmath reference table") {
    std::ifstream in(std::string(RIESZ_TEST_DATA_DIR) + "/hurwitz_reference.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "w,a,zeta");
    int rows = 0;
    double worst = 0.0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string a, b, c;
      std::getline(ss, a, ',');
      std::getline(ss, b, ',');
      std::getline(ss, c, ',');
      const double ref = std::stod(c);
      worst = std::max(worst, std::abs(hurwitz_zeta(std::stod(a), std::stod(b)) - ref) / std::abs(ref));
      ++rows;
    }
    CHECK(rows == 1000);
    CHECK(worst <= 1e-10);
  }

  TEST_CASE("riemann zeta special values") {
    CHECK(riemann_zeta(2.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
    CHECK(riemann_zeta(4.0) == doctest::Approx(std::pow(M_PI, 4) / 90.0).epsilon(1e-13));
    // mpmath: zeta(-0.5)
    CHECK(riemann_zeta(-0.5) == doctest::Approx(-0.20788622497735456602).epsilon(1e-12));
    // zeta(0, a) = 1/2 - a
    CHECK(hurwitz_zeta(0.0, 0.3) == doctest::Approx(0.2).epsilon(1e-13));
    // zeta(w, 1/2) = (2^w - 1) zeta(w)
    CHECK(hurwitz_zeta(0.5, 0.5) == doctest::Approx((std::sqrt(2.0) - 1.0) * riemann_zeta(0.5)).epsilon(1e-13));
    CHECK(hurwitz_zeta(-0.3, 0.5) == doctest::Approx((std::pow(2.0, -0.3) - 1.0) * riemann_zeta(-0.3)).epsilon(1e-13));
  }

  TEST_CASE("recurrence zeta(w, a) = a^-w + zeta(w, a + 1)") {
    for (double w : {-0.7, 0.3, 0.9, 1.5, 3.2}) {
      for (double a : {1e-4, 0.3, 0.77, 2.5}) {
        const double lhs = hurwitz_zeta(w, a);
        const double rhs = std::pow(a, -w) + hurwitz_zeta(w, a + 1.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("zeta(-s, a) tends to zeta(-s), not a^s") {
    // (zeta(-s, a) - zeta(-s)) / a^s -> 1 as a -> 0: the a^s term is a correction.
    const double s = 0.5;
    const double a = 1e-8;
    CHECK(hurwitz_zeta(-s, a) == doctest::Approx(riemann_zeta(-s)).epsilon(1e-3));
    CHECK((hurwitz_zeta(-s, a) - riemann_zeta(-s)) / std::pow(a, s) == doctest::Approx(1.0).epsilon(1e-3));
    // mpmath: zeta(-0.5, 0.25)
    CHECK(hurwitz_zeta(-0.5, 0.25) == doctest::Approx(0.090322258761246243874).epsilon(1e-11));
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(hurwitz_zeta(1.0, 0.5), DomainError);
    CHECK_THROWS_AS(hurwitz_zeta(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(hurwitz_zeta(0.5, -1.0), DomainError);
    CHECK_THROWS_AS(riesz_constants(1.5), DomainError);
    ModelParams p{1.5, 1.0, 4};
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = {0.5, 0.0, 4};
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = {0.5, 1.0, 1};
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = {0.5, 1.0, 2};
    CHECK_NOTHROW(p.validate());
  }

  TEST_CASE("constants") {
    // c_s = Gamma((1-s)/2)/Gamma(s/2) sqrt(pi)/2^{1-s}; at s = 1/2 this is sqrt(pi/2).
    CHECK(riesz_constants(0.5).c_s == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-14));
    CHECK(riesz_constants(0.5).c_s_prime > 0.0);
    CHECK(rising_factorial(0.5, 0) == 1.0);
    CHECK(rising_factorial(0.5, 3) == doctest::Approx(0.5 * 1.5 * 2.5));
  }

  TEST_CASE("direct kernel values") {
    // mpmath: 2 zeta(0.5, 0.5)
    CHECK(kernel_g_direct(0.5, 0.5) == doctest::Approx(-1.2097972868432607405).epsilon(1e-12));
    // mpmath: g''(0.1) at s = 0.5
    CHECK(kernel_g_deriv_direct(0.5, 0.1, 2) == doctest::Approx(239.25366272390165369).epsilon(1e-12));
    CHECK(kernel_g_direct(0.5, 0.3) == doctest::Approx(kernel_g_direct(0.5, 0.7)).epsilon(1e-14));
    CHECK(kernel_g_direct(0.5, 1.3) == doctest::Approx(kernel_g_direct(0.5, 0.3)).epsilon(1e-14));
    CHECK(kernel_g_deriv_direct(0.5, 0.3, 1) == doctest::Approx(-kernel_g_deriv_direct(0.5, 0.7, 1)).epsilon(1e-13));
  }

  TEST_CASE("wrap and centre") {
    CHECK(wrap_unit(1.25) == doctest::Approx(0.25));
    CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
    CHECK(wrap_unit(-1e-20) < 1.0);
    CHECK(centered(0.75) == doctest::Approx(-0.25));
    CHECK(centered(0.25) == doctest::Approx(0.25));
  }

  TEST_CASE("rng reference outputs") {
    // tests/oracles/rng_reference.py
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64(1) == 0x910A2DEC89025CC1ULL);
    Xoshiro256 rng(42);
    CHECK(rng() == 0x15780B2E0C2EC716ULL);
    CHECK(rng() == 0x6104D9866D113A7EULL);
    CHECK(rng() == 0xAE17533239E499A1ULL);
    Xoshiro256 u(1);
    for (int i = 0; i < 1000; ++i) {
      const double v = u.uniform();
      CHECK((v >= 0.0 && v < 1.0));
      CHECK(u.below(7) < 7u);
    }
    CHECK(chain_seed(5, 0) != chain_seed(5, 1));
  }
}
