#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "riesz/errors.hpp"
#include "riesz/kernel.hpp"
#include "riesz/special_functions.hpp"
#include "riesz/statistics.hpp"
#include "riesz/transforms.hpp"

using namespace riesz;

// Reference values from tests/oracles/transform_reference.py (mpmath, 30 digits).
namespace ref {
constexpr double ghat1_s03 = 0.32556975922555612969;
constexpr double ghat1_s05 = 1.0;
constexpr double ghat1_s07 = 3.0715383467393717557;
constexpr double mu1_s03 = 1.3717782538768417255;
constexpr double mu1_s05 = 1.2533141373155002512;
constexpr double mu1_s07 = 1.1450803527141513789;
constexpr double cos_sigma2_s03 = 0.38394229334242146946;
constexpr double cos_sigma2_s05 = 0.125;
constexpr double cos_sigma2_s07 = 0.040696219903194516211;
constexpr double ind_psi_x005 = -0.020381444241550718419;
constexpr double ind_psi_x03 = -0.021097275056416436147;
constexpr double ind_psi_x08 = 0.036587281885185619489;
constexpr double ind_sigma2 = 0.07302460049021712929;
constexpr double pow_psi_x01 = -0.03003121199386721795;
constexpr double pow_psi_x03 = -0.018037395132146780462;
constexpr double pow_sigma2 = 0.14476131703812761698;
}  // namespace ref

namespace {

const Multiplier& multiplier_s05() {
  static const Multiplier mu = calibrate_multiplier(KernelModel::build({0.5, 1.0, 2}), 8192);
  return mu;
}

}  // namespace

TEST_SUITE("transforms") {
  TEST_CASE("kernel Fourier coefficients and calibrated multiplier") {
    CHECK(kernel_fourier_exact(0.3, 1) == doctest::Approx(ref::ghat1_s03).epsilon(1e-13));
    CHECK(kernel_fourier_exact(0.5, 1) == doctest::Approx(ref::ghat1_s05).epsilon(1e-13));
    CHECK(kernel_fourier_exact(0.7, -1) == doctest::Approx(ref::ghat1_s07).epsilon(1e-13));
    CHECK(kernel_fourier_exact(0.5, 0) == 0.0);
    const double mus[] = {ref::mu1_s03, ref::mu1_s05, ref::mu1_s07};
    const double ss[] = {0.3, 0.5, 0.7};
    for (int i = 0; i < 3; ++i) {
      const Multiplier mu = calibrate_multiplier(KernelModel::build({ss[i], 1.0, 2}), 4096);
      CAPTURE(ss[i]);
      CHECK(mu(1) == doctest::Approx(mus[i]).epsilon(1e-8));
      CHECK(mu(0) == 0.0);
      CHECK(mu(7) == doctest::Approx(mus[i] * std::pow(7.0, 1.0 - ss[i])).epsilon(1e-8));
      CHECK(mu(100000) == doctest::Approx(mu(1) * std::pow(1e5, 1.0 - ss[i])).epsilon(1e-12));
      CHECK(mu.fit_residual < 1e-6);
      CHECK(mu.kernel_coefficient(3) == doctest::Approx(kernel_fourier_exact(ss[i], 3)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(calibrate_multiplier(KernelModel::build({0.5, 1.0, 2}), 1000), DomainError);
  }

  TEST_CASE("cosine transport is explicit") {
    const Multiplier& mu = multiplier_s05();
    const auto xi = TestFunction::cosine(1);
    const TransportMap psi = riesz_inverse_spectral(xi, mu, 8192);
    for (double x : {0.0, 0.1, 0.37, 0.8}) {
      const double exact = -std::sin(2.0 * M_PI * x) / (4.0 * M_PI * ref::ghat1_s05);
      CHECK(psi(x) == doctest::Approx(exact).epsilon(1e-9).scale(1.0));
    }
    CHECK(sigma_xi_squared(xi, psi, 2.0) == doctest::Approx(ref::cos_sigma2_s05).epsilon(1e-9));
    CHECK(sigma_xi_squared_spectral(xi, mu, 2.0) == doctest::Approx(ref::cos_sigma2_s05).epsilon(1e-9));
    for (double s : {0.3, 0.7}) {
      const Multiplier m = calibrate_multiplier(KernelModel::build({s, 1.0, 2}), 4096);
      CHECK(sigma_xi_squared_spectral(xi, m, 2.0) ==
            doctest::Approx(s < 0.5 ? ref::cos_sigma2_s03 : ref::cos_sigma2_s07).epsilon(1e-8));
    }
  }

  TEST_CASE("indicator transport against quadrature reference") {
    const double a = 0.125;
    CHECK(psi_closed_indicator(a, 0.5, 0.05) == doctest::Approx(ref::ind_psi_x005).epsilon(1e-11));
    CHECK(psi_closed_indicator(a, 0.5, 0.3) == doctest::Approx(ref::ind_psi_x03).epsilon(1e-11));
    CHECK(psi_closed_indicator(a, 0.5, 0.8) == doctest::Approx(ref::ind_psi_x08).epsilon(1e-11));
    CHECK(std::abs(psi_closed_indicator(a, 0.5, 0.5)) < 1e-13);
    const auto xi = TestFunction::indicator(a);
    CHECK(riesz_inverse_pointwise(xi, 0.5, 0.3) == doctest::Approx(ref::ind_psi_x03).epsilon(1e-8));
    const TransportMap psi = build_transport(xi, multiplier_s05(), 8192);
    CHECK(psi.closed_form() == ClosedForm::indicator);
    CHECK(psi(0.8) == doctest::Approx(ref::ind_psi_x08).epsilon(1e-11));
    CHECK(sigma_xi_squared(xi, psi, 2.0) == doctest::Approx(ref::ind_sigma2).epsilon(1e-10));
    // The spectral sum converges like m^{-1-s}; 4096 modes give ~1e-3 relative.
    CHECK(sigma_xi_squared_spectral(xi, multiplier_s05(), 2.0) ==
          doctest::Approx(ref::ind_sigma2).epsilon(3e-3));
    CHECK_THROWS_AS(psi_closed_indicator_deriv(a, 0.5, a, 1), SingularityError);
    CHECK(std::isfinite(psi_closed_indicator(a, 0.5, a)));
  }

  TEST_CASE("power transport against quadrature reference") {
    CHECK(psi_closed_power(0.2, 0.5, 0.1) == doctest::Approx(ref::pow_psi_x01).epsilon(1e-11));
    CHECK(psi_closed_power(0.2, 0.5, 0.3) == doctest::Approx(ref::pow_psi_x03).epsilon(1e-11));
    CHECK(std::abs(psi_closed_power(0.2, 0.5, 0.5)) < 1e-13);
    const auto xi = TestFunction::power(0.2);
    CHECK(riesz_inverse_pointwise(xi, 0.5, 0.1) == doctest::Approx(ref::pow_psi_x01).epsilon(1e-8));
    const TransportMap psi = build_transport(xi, multiplier_s05(), 8192);
    CHECK(psi.closed_form() == ClosedForm::power);
    CHECK(sigma_xi_squared(xi, psi, 2.0) == doctest::Approx(ref::pow_sigma2).epsilon(1e-8));
    CHECK_THROWS_AS(psi_closed_power(0.6, 0.5, 0.1), DomainError);
    CHECK_THROWS_AS(psi_closed_power_deriv(0.2, 0.5, 0.0, 1), SingularityError);
  }

  TEST_CASE("closed-form derivatives against finite differences") {
    const double h = 1e-5;
    for (double x : {0.07, 0.31, 0.6}) {
      const double fd = (psi_closed_indicator(0.125, 0.5, x + h) - psi_closed_indicator(0.125, 0.5, x - h)) / (2 * h);
      CHECK(psi_closed_indicator_deriv(0.125, 0.5, x, 1) == doctest::Approx(fd).epsilon(1e-6));
      const double fd2 = (psi_closed_power_deriv(0.2, 0.5, x + h, 1) - psi_closed_power_deriv(0.2, 0.5, x - h, 1)) / (2 * h);
      CHECK(psi_closed_power_deriv(0.2, 0.5, x, 2) == doctest::Approx(fd2).epsilon(1e-6));
    }
  }

  TEST_CASE("transport equation -2 g' * psi = xi - mean, mode by mode") {
    const Multiplier& mu = multiplier_s05();
    const auto xi = TestFunction::indicator(0.2);
    const TransportMap psi = riesz_inverse_spectral(xi, mu, 8192);
    const auto& c = psi.series().coefficients();
    for (long m : {1L, 2L, 5L, 17L}) {
      const std::complex<double> xh = *xi.fourier(m);
      // Fourier coefficient of g' is (2 pi i m) ghat(m); convolution multiplies.
      const std::complex<double> lhs = -2.0 * std::complex<double>(0.0, 2.0 * M_PI * m) *
                                       mu.kernel_coefficient(m) * c[static_cast<std::size_t>(m)];
      CHECK(std::abs(lhs - xh) < 1e-10);
    }
    CHECK(std::abs(c[0]) < 1e-15);
  }

  TEST_CASE("spectral resolution guard and smoothing") {
    const Multiplier& mu = multiplier_s05();
    std::vector<double> v(1024);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = (j % 2 == 0) ? 1.0 : -1.0;
    CHECK_THROWS_AS(riesz_inverse_spectral(TestFunction::grid(v), mu, 1024), ResolutionError);
    const auto xi = TestFunction::indicator(0.125);
    const TransportMap psi = build_transport(xi, mu, 8192);
    CHECK_THROWS_AS(smooth(psi, 1.0 / 8192.0), ResolutionError);
    const TransportMap sm = smooth(psi, 0.01);
    REQUIRE(sm.smoothing().has_value());
    // Far from the jumps the triangle average changes psi by O(l^2 psi'').
    CHECK(sm(0.4) == doctest::Approx(psi(0.4)).epsilon(1e-3));
    CHECK_NOTHROW(sm.derivative(0.125, 2));
  }

  TEST_CASE("seminorms") {
    const Multiplier& mu = multiplier_s05();
    const auto c = TestFunction::cosine(2);
    CHECK(calibrated_seminorm(c, mu) == doctest::Approx(2.0 * 0.25 * mu(2)).epsilon(1e-12));
    CHECK(sobolev_seminorm(c, 0.5, 1024) == doctest::Approx(2.0 * 0.25 * 4.0 * M_PI).epsilon(1e-12));
    CHECK_THROWS_AS(calibrated_seminorm(TestFunction::power(0.3), mu), DomainError);
    const auto coeffs = test_function_coefficients(c, 1024);
    CHECK(coeffs.size() == 513);
    CHECK(coeffs[2].real() == doctest::Approx(0.5));
  }

  TEST_CASE("decay of psi' away from the support") {
    // Indicator of half-width 1/8 at scale 1/256; in blown-up units x in [1, 8].
    const double a = 1.0 / 2048.0;
    for (double s : {0.3, 0.5, 0.7}) {
      std::vector<double> lx, ly;
      for (int i = 0; i < 16; ++i) {
        const double x = std::exp(std::log(1.0 / 256.0) + i * std::log(8.0) / 15.0);
        lx.push_back(std::log(x));
        ly.push_back(std::log(std::abs(psi_closed_indicator_deriv(a, s, x, 1))));
      }
      CAPTURE(s);
      CHECK(linear_fit(lx, ly).slope == doctest::Approx(-(2.0 - s)).epsilon(0.1 / (2.0 - s)));
    }
  }

  TEST_CASE("every transport has zero mean") {
    const Multiplier& mu = multiplier_s05();
    for (const auto& xi : {TestFunction::cosine(2), TestFunction::indicator(0.125), TestFunction::indicator(0.3, 0.5),
                           TestFunction::power(0.2)}) {
      const TransportMap psi = build_transport(xi, mu, 8192);
      CHECK(std::abs(psi.series().coefficients()[0]) < 1e-15);
      double grid_mean = 0.0;
      for (double v : psi.grid()) grid_mean += v / static_cast<double>(psi.grid().size());
      CHECK(std::abs(grid_mean) < 1e-10);
    }
    // Closed forms, by quadrature split at the singular points.
    boost::math::quadrature::tanh_sinh<double> q;
    auto ind = [](double x) { return psi_closed_indicator(0.125, 0.5, x); };
    const double mi = q.integrate(ind, 0.0, 0.125) + q.integrate(ind, 0.125, 0.875) + q.integrate(ind, 0.875, 1.0);
    CHECK(std::abs(mi) < 1e-10);
    auto pw = [](double x) { return psi_closed_power(0.2, 0.5, x); };
    CHECK(std::abs(q.integrate(pw, 0.0, 1.0)) < 1e-10);
  }
}
