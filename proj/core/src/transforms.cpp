#include "riesz/transforms.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "riesz/errors.hpp"
#include "riesz/special_functions.hpp"

namespace riesz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadratureTolerance = 1e-9;

// zeta(w, u) with the u -> 0 limit zeta(w, 1) for w < 0.
double zeta_closed(double w, double u) {
  if (u <= 0.0) {
    if (w < 0.0) return hurwitz_zeta(w, 1.0);
    throw SingularityError("zeta(w, 0) diverges for w >= 0");
  }
  return hurwitz_zeta(w, u);
}

double amplitude(double w) { return 2.0 * std::tgamma(1.0 - w) * std::sin(0.5 * kPi * w); }

// Odd periodised kernel sgn(d) (zeta(1-s,|d|) - zeta(1-s,1-|d|)) for d in (-1, 1).
double odd_kernel(double s, double d) {
  const double t = std::abs(d);
  const double v = hurwitz_zeta(1.0 - s, t) - hurwitz_zeta(1.0 - s, 1.0 - t);
  return d < 0.0 ? -v : v;
}

void require_grid(std::size_t m, std::size_t minimum) {
  if (m < minimum || (m & (m - 1)) != 0) {
    throw DomainError("grid size must be a power of two >= " + std::to_string(minimum) + ", got " +
                      std::to_string(m));
  }
}

}  // namespace

double kernel_fourier_exact(double s, long m) {
  if (m == 0) return 0.0;
  return amplitude(s) * std::pow(2.0 * kPi * std::abs(static_cast<double>(m)), s - 1.0);
}

double Multiplier::operator()(long k) const {
  const auto a = static_cast<std::size_t>(std::labs(k));
  if (a < values.size()) return values[a];
  return values.at(1) * std::pow(static_cast<double>(a), 1.0 - s);
}

Multiplier calibrate_multiplier(const KernelModel& model, std::size_t grid_size) {
  require_grid(grid_size, 1024);
  const double s = model.s();
  Multiplier mu;
  mu.s = s;
  mu.c_s = model.c_s();
  mu.grid_size = grid_size;

  boost::math::quadrature::tanh_sinh<double> integrator;
  for (int m = 1; m <= 8; ++m) {
    // ghat(m) = 2 int_0^{1/2} g(x) cos(2 pi m x) dx; tanh-sinh absorbs the x^{-s} endpoint.
    auto f = [&](double x) {
      if (x < 1e-200) return 0.0;  // integrable x^{-s} tip, negligible mass
      return kernel_g_direct(s, x) * std::cos(2.0 * kPi * m * x);
    };
    double err = 0.0;
    double l1 = 0.0;
    const double half = integrator.integrate(f, 0.0, 0.5, 1e-13, &err, &l1);
    if (!(err <= 1e-10 * std::max(1.0, l1))) {
      throw QuadratureError("kernel Fourier coefficient quadrature did not converge for m = " +
                            std::to_string(m));
    }
    mu.measured[static_cast<std::size_t>(m - 1)] = model.c_s() / (2.0 * half);
  }
  double residual = 0.0;
  for (int m = 1; m <= 8; ++m) {
    const double predicted = mu.measured[0] * std::pow(static_cast<double>(m), 1.0 - s);
    residual = std::max(residual, std::abs(mu.measured[static_cast<std::size_t>(m - 1)] / predicted - 1.0));
  }
  mu.fit_residual = residual;
  if (residual > 1e-6) {
    throw CalibrationError("multiplier power-law fit residual " + std::to_string(residual) +
                           " exceeds 1e-6");
  }
  mu.values.resize(grid_size / 2 + 1);
  mu.values[0] = 0.0;
  for (std::size_t k = 1; k < mu.values.size(); ++k) {
    mu.values[k] = mu.measured[0] * std::pow(static_cast<double>(k), 1.0 - s);
  }
  return mu;
}

TransportMap::TransportMap(TestFunction source, double s, PeriodicSeries series,
                           ClosedForm closed_form, std::optional<double> smoothing)
    : source_(std::move(source)),
      s_(s),
      series_(std::move(series)),
      closed_form_(closed_form),
      smoothing_(smoothing) {}

double TransportMap::derivative(double x, int p) const {
  if (p < 0 || p > 2) throw DomainError("transport derivative order must be 0, 1 or 2");
  if (closed_form_ != ClosedForm::none) {
    auto exact = [&](double y, int q) {
      if (closed_form_ == ClosedForm::indicator) {
        return psi_closed_indicator_deriv(source_.parameter() * source_.scale(), s_, y, q);
      }
      return psi_closed_power_deriv(source_.parameter(), s_, y, q);
    };
    if (!smoothing_) return exact(x, p);
    if (p == 2) {
      const double l = *smoothing_;
      return (exact(x + l, 0) - 2.0 * exact(x, 0) + exact(x - l, 0)) / (l * l);
    }
  }
  return series_.derivative(x, p);
}

std::vector<Complex> test_function_coefficients(const TestFunction& xi, std::size_t grid_size) {
  std::vector<Complex> c(grid_size / 2 + 1, Complex(0.0, 0.0));
  if (xi.kind() == TestFunctionKind::grid) {
    const auto raw = forward_real(xi.grid_values());
    for (std::size_t k = 0; k < c.size() && k + 1 < raw.size(); ++k) c[k] = raw[k];
    if (!raw.empty()) c[0] = raw[0];
    return c;
  }
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = *xi.fourier(static_cast<long>(k));
  return c;
}

double riesz_inverse_pointwise(const TestFunction& xi, double s, double x) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
  x = wrap_unit(x);
  const double mean = xi.mean();
  const double kappa = -1.0 / (4.0 * kPi * std::tan(0.5 * kPi * s));

  struct Point {
    double y;
    bool is_x;
    bool is_sing;
  };
  std::vector<Point> pts = {{0.0, false, false}, {1.0, false, false}, {x, true, false}};
  for (const auto& sg : xi.singularities()) pts.push_back({wrap_unit(sg.location), false, true});
  // Endpoints 0 and 1 are the same point on the circle.
  for (auto& p : pts) {
    if (p.y == 0.0 && (p.is_x || p.is_sing)) pts.push_back({1.0, p.is_x, p.is_sing});
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.y < b.y; });
  std::vector<Point> merged;
  for (const auto& p : pts) {
    if (!merged.empty() && p.y - merged.back().y < 1e-15) {
      merged.back().is_x = merged.back().is_x || p.is_x;
      merged.back().is_sing = merged.back().is_sing || p.is_sing;
    } else {
      merged.push_back(p);
    }
  }

  const bool power = xi.kind() == TestFunctionKind::power;
  const double alpha = xi.parameter();
  boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const Point lo = merged[i];
    const Point hi = merged[i + 1];
    if (hi.y - lo.y <= 0.0) continue;
    auto f = [&](double y, double yc) {
      const bool near_lo = yc < 0.0;
      const double dist = std::abs(yc);
      double delta;
      if (near_lo && lo.is_x) {
        delta = -dist;
      } else if (!near_lo && hi.is_x) {
        delta = dist;
      } else {
        delta = centered(x - y);
      }
      if (delta == 0.0) return 0.0;
      double value;
      if (power) {
        double t;
        if ((near_lo && lo.is_sing) || (!near_lo && hi.is_sing)) {
          // distance to the singularity at 0, which sits at a split point
          t = dist;
        } else {
          t = std::abs(centered(y));
        }
        if (t == 0.0) return 0.0;
        value = hurwitz_zeta(alpha, t) + hurwitz_zeta(alpha, 1.0 - t);
      } else {
        value = xi(y);
      }
      return odd_kernel(s, delta) * (value - mean);
    };
    double err = 0.0;
    double l1 = 0.0;
    const double part = integrator.integrate(f, lo.y, hi.y, 1e-12, &err, &l1);
    if (!(err <= kQuadratureTolerance * std::max(1.0, l1))) {
      throw QuadratureError("pointwise inversion: quadrature error " + std::to_string(err) +
                            " on [" + std::to_string(lo.y) + ", " + std::to_string(hi.y) + "]");
    }
    total += part;
  }
  return kappa * total;
}

TransportMap riesz_inverse_spectral(const TestFunction& xi, const Multiplier& mu,
                                    std::size_t grid_size) {
  require_grid(grid_size, 1024);
  auto c = test_function_coefficients(xi, grid_size);
  double total = 0.0;
  double tail = 0.0;
  // Grids are judged on their own spectrum, Nyquist mode and anything the
  // target grid truncates included.
  const std::vector<Complex> raw =
      xi.kind() == TestFunctionKind::grid ? forward_real(xi.grid_values()) : c;
  for (std::size_t k = 1; k < raw.size(); ++k) {
    const double e = std::norm(raw[k]);
    total += e;
    if (k > grid_size / 4) tail += e;
  }
  if (total > 0.0 && tail > 0.01 * total) {
    throw ResolutionError(xi.name() + " is not resolved on a " + std::to_string(grid_size) +
                          "-point grid: " + std::to_string(100.0 * tail / total) +
                          "% of the spectral energy is above M/4");
  }
  std::vector<Complex> psi(c.size(), Complex(0.0, 0.0));
  for (std::size_t k = 1; k < c.size(); ++k) {
    const auto kk = static_cast<long>(k);
    psi[k] = Complex(0.0, 1.0) * c[k] * mu(kk) / (4.0 * kPi * static_cast<double>(k) * mu.c_s);
  }
  return TransportMap(xi, mu.s, PeriodicSeries(std::move(psi), grid_size));
}

TransportMap build_transport(const TestFunction& xi, const Multiplier& mu, std::size_t grid_size) {
  TransportMap spectral = riesz_inverse_spectral(xi, mu, grid_size);
  if (xi.kind() == TestFunctionKind::indicator) {
    return TransportMap(xi, mu.s, spectral.series(), ClosedForm::indicator);
  }
  if (xi.kind() == TestFunctionKind::power && xi.parameter() < mu.s) {
    return TransportMap(xi, mu.s, spectral.series(), ClosedForm::power);
  }
  return spectral;
}

double psi_closed_indicator(double a, double s, double x) {
  return psi_closed_indicator_deriv(a, s, x, 0);
}

double psi_closed_indicator_deriv(double a, double s, double x, int p) {
  if (!(a > 0.0 && a < 0.5)) throw DomainError("indicator half-width must lie in (0, 1/2)");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
  const double c = -1.0 / (std::tan(0.5 * kPi * s) * 4.0 * kPi * s);
  auto G = [&](double u) {
    const double v = wrap_unit(u);
    switch (p) {
      case 0:
        return zeta_closed(-s, v) + zeta_closed(-s, 1.0 - v);
      case 1:
        if (v == 0.0) throw SingularityError("indicator transport derivative at a jump of xi");
        return s * (hurwitz_zeta(1.0 - s, v) - hurwitz_zeta(1.0 - s, 1.0 - v));
      default:
        if (v == 0.0) throw SingularityError("indicator transport derivative at a jump of xi");
        return -s * (1.0 - s) * (hurwitz_zeta(2.0 - s, v) + hurwitz_zeta(2.0 - s, 1.0 - v));
    }
  };
  if (p < 0 || p > 2) throw DomainError("derivative order must be 0, 1 or 2");
  return c * (G(x + a) - G(x - a));
}

double psi_closed_power(double alpha, double s, double x) {
  return psi_closed_power_deriv(alpha, s, x, 0);
}

double psi_closed_power_deriv(double alpha, double s, double x, int p) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < s)) throw DomainError("power closed form needs 0 < alpha < s");
  if (p < 0 || p > 2) throw DomainError("derivative order must be 0, 1 or 2");
  const double w = alpha - s;
  const double d = -(amplitude(alpha) / amplitude(s)) /
                   (4.0 * std::tgamma(1.0 - w) * std::cos(0.5 * kPi * w));
  const double y = wrap_unit(x);
  switch (p) {
    case 0:
      return d * (zeta_closed(w, y) - zeta_closed(w, 1.0 - y));
    case 1:
      if (y == 0.0) throw SingularityError("power transport derivative at 0");
      return -d * w * (hurwitz_zeta(w + 1.0, y) + hurwitz_zeta(w + 1.0, 1.0 - y));
    default:
      if (y == 0.0) throw SingularityError("power transport derivative at 0");
      return d * w * (w + 1.0) * (hurwitz_zeta(w + 2.0, y) - hurwitz_zeta(w + 2.0, 1.0 - y));
  }
}

TransportMap smooth(const TransportMap& psi, double ell) {
  if (!(ell > 0.0 && ell < 1.0)) throw DomainError("smoothing width must lie in (0, 1)");
  if (!(ell > 2.0 / static_cast<double>(psi.grid_size()))) {
    throw ResolutionError("smoothing width " + std::to_string(ell) + " is under-resolved on a " +
                          std::to_string(psi.grid_size()) + "-point grid");
  }
  auto series = psi.series().filtered([ell](long k) {
    if (k == 0) return 1.0;
    const double t = kPi * static_cast<double>(k) * ell;
    const double sinc = std::sin(t) / t;
    return sinc * sinc;
  });
  return TransportMap(psi.source(), psi.s(), std::move(series), psi.closed_form(), ell);
}

double sigma_xi_squared(const TestFunction& xi, const TransportMap& psi, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  switch (xi.kind()) {
    case TestFunctionKind::indicator: {
      const double w = xi.parameter() * xi.scale();
      return (psi(-w) - psi(w)) / beta;
    }
    case TestFunctionKind::cosine: {
      auto f = [&](double x) { return xi.derivative(x) * psi(x); };
      double err = 0.0;
      const double v =
          boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14, &err);
      return v / beta;
    }
    case TestFunctionKind::power: {
      const double a = xi.parameter();
      const double s = psi.s();
      if (!(2.0 * a < s)) {
        throw DomainError("sigma^2 of " + xi.name() + " is infinite (needs alpha < s/2)");
      }
      // xi' psi is even about 1/2 and behaves like x^{s - 2 alpha - 1} at 0. Split
      // xi' = -a x^{-a-1} + E and psi = D (x^{s-a} + R), integrate the leading
      // product in closed form and the rest by quadrature.
      const double w = a - s;
      const double d = -(amplitude(a) / amplitude(s)) /
                       (4.0 * std::tgamma(1.0 - w) * std::cos(0.5 * kPi * w));
      const double r1 = -2.0 * w * hurwitz_zeta(w + 1.0, 1.0);
      const double e1 = 2.0 * a * (a + 1.0) * hurwitz_zeta(a + 2.0, 1.0);
      auto rem = [&](double x) {
        if (x < 1e-5) return r1 * x;
        return hurwitz_zeta(w, 1.0 + x) - hurwitz_zeta(w, 1.0 - x);
      };
      auto ecorr = [&](double x) {
        if (x < 1e-5) return e1 * x;
        return -a * (hurwitz_zeta(a + 1.0, 1.0 + x) - hurwitz_zeta(a + 1.0, 1.0 - x));
      };
      auto f = [&](double x) {
        if (x <= 0.0) return 0.0;
        const double lead_r =
            x < 1e-5 ? -a * r1 * std::pow(x, -a) : -a * std::pow(x, -a - 1.0) * rem(x);
        return d * (lead_r + ecorr(x) * (std::pow(x, s - a) + rem(x)));
      };
      boost::math::quadrature::tanh_sinh<double> integrator;
      double err = 0.0;
      double l1 = 0.0;
      const double v = integrator.integrate(f, 0.0, 0.5, 1e-12, &err, &l1);
      if (!(err <= 1e-8 * std::max(1.0, l1))) {
        throw QuadratureError("sigma^2 quadrature did not converge for " + xi.name());
      }
      const double lead = -a * d * std::pow(0.5, s - 2.0 * a) / (s - 2.0 * a);
      return 2.0 * (v + lead) / beta;
    }
    case TestFunctionKind::grid: {
      const auto& v = xi.grid_values();
      const double m = static_cast<double>(v.size());
      double acc = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        acc += v[j] * psi.derivative(static_cast<double>(j) / m, 1);
      }
      return -acc / (m * beta);
    }
  }
  return 0.0;
}

double calibrated_seminorm(const TestFunction& xi, const Multiplier& mu) {
  const std::size_t m = mu.grid_size;
  const auto c = test_function_coefficients(xi, m);
  double acc = 0.0;
  const std::size_t kmax = m / 2 - 1;
  for (std::size_t k = 1; k <= kmax; ++k) acc += 2.0 * mu(static_cast<long>(k)) * std::norm(c[k]);
  // Tails of the known power-law spectra beyond the grid.
  const double s = mu.s;
  const double kn = static_cast<double>(kmax + 1);
  if (xi.kind() == TestFunctionKind::indicator) {
    // |xihat|^2 = sin^2(..) / (pi m)^2 averages to 1 / (2 pi^2 m^2).
    acc += 2.0 * mu(1) / (2.0 * kPi * kPi) * hurwitz_zeta(1.0 + s, kn);
  } else if (xi.kind() == TestFunctionKind::power) {
    const double a = xi.parameter();
    const double p = 2.0 * a - 1.0 - s;
    if (!(p < -1.0)) {
      throw DomainError("H^{(1-s)/2} seminorm of " + xi.name() + " is infinite (needs alpha < s/2)");
    }
    const double amp = amplitude(a);
    acc += 2.0 * mu(1) * amp * amp * std::pow(2.0 * kPi, 2.0 * a - 2.0) * hurwitz_zeta(-p, kn);
  }
  return acc;
}

double sigma_xi_squared_spectral(const TestFunction& xi, const Multiplier& mu, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  return calibrated_seminorm(xi, mu) / (2.0 * beta * mu.c_s);
}

double sobolev_seminorm(const TestFunction& xi, double alpha, std::size_t grid_size) {
  require_grid(grid_size, 16);
  const auto c = test_function_coefficients(xi, grid_size);
  double acc = 0.0;
  for (std::size_t k = 1; k + 1 < c.size(); ++k) {
    acc += 2.0 * std::pow(2.0 * kPi * static_cast<double>(k), 2.0 * alpha) * std::norm(c[k]);
  }
  return acc;
}

}  // namespace riesz
