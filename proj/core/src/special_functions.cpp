#include "riesz/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "riesz/errors.hpp"

namespace riesz {

namespace {

constexpr int kDirectTerms = 20;

// B_{2j} / (2j)! for j = 1..5.
constexpr std::array<double, 5> kBernoulliOverFactorial = {
    1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
    1.0 / 47900160.0};

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

void ModelParams::validate() const {
  if (!(s > 0.0 && s < 1.0)) {
    throw DomainError("s must lie in (0, 1), got " + std::to_string(s));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be positive, got " + std::to_string(beta));
  }
  if (n < 2) {
    throw DomainError("n must be at least 2, got " + std::to_string(n));
  }
}

double hurwitz_zeta(double w, double a) {
  if (!(w > -1.0) || w == 1.0 || !std::isfinite(w)) {
    throw DomainError("hurwitz_zeta: exponent must lie in (-1, inf) \\ {1}, got " +
                      std::to_string(w));
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("hurwitz_zeta: a must be positive, got " + std::to_string(a));
  }

  CompensatedSum acc;
  for (int k = 0; k < kDirectTerms; ++k) {
    acc.add(std::pow(a + k, -w));
  }

  const double b = a + kDirectTerms;
  const double b_pow = std::pow(b, -w);
  acc.add(b * b_pow / (w - 1.0));
  acc.add(0.5 * b_pow);

  // Bernoulli corrections: B_{2j}/(2j)! * w (w+1) ... (w+2j-2) * b^{-w-2j+1}.
  double rising = w;
  double power = b_pow / b;
  const double inv_b2 = 1.0 / (b * b);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    acc.add(kBernoulliOverFactorial[j] * rising * power);
    const double m = 2.0 * static_cast<double>(j) + 1.0;
    rising *= (w + m) * (w + m + 1.0);
    power *= inv_b2;
  }
  return acc.value();
}

RieszConstants riesz_constants(double s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw DomainError("riesz_constants: s must lie in (0, 1), got " + std::to_string(s));
  }
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double c_s =
      std::tgamma(0.5 * (1.0 - s)) / std::tgamma(0.5 * s) * sqrt_pi / std::pow(2.0, 1.0 - s);
  const double c_s_prime = std::pow(2.0, 1.0 - s) * std::tgamma(1.0 - 0.5 * s) /
                           (std::abs(std::tgamma(-0.5 * (1.0 - s))) * sqrt_pi);
  return {c_s, c_s_prime};
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;  // x slightly below an integer
  return r;
}

double centered(double x) {
  double r = wrap_unit(x);
  return r >= 0.5 ? r - 1.0 : r;
}

double rising_factorial(double s, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= s + i;
  return r;
}

double kernel_g_direct(double s, double x) { return kernel_g_deriv_direct(s, x, 0); }

double kernel_g_deriv_direct(double s, double x, int p) {
  if (p < 0 || p > 4) {
    throw DomainError("kernel derivative order must be in [0, 4], got " + std::to_string(p));
  }
  const double y = wrap_unit(x);
  if (y == 0.0) {
    throw SingularityError("periodic kernel evaluated at x = 0 (mod 1)");
  }
  const double sign = (p % 2 == 0) ? 1.0 : -1.0;
  return sign * rising_factorial(s, p) *
         (hurwitz_zeta(s + p, y) + sign * hurwitz_zeta(s + p, 1.0 - y));
}

}  // namespace riesz
