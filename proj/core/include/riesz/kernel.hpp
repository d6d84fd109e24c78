#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <vector>

#include "riesz/errors.hpp"
#include "riesz/special_functions.hpp"

namespace riesz {

namespace detail {

/// Piecewise quintic Hermite interpolant on a uniform grid, stored as
/// per-interval polynomial coefficients in the local variable t in [0, 1].
class QuinticTable {
 public:
  QuinticTable() = default;

  /// Builds from nodal values f, f', f'' on x0 + i*h, i = 0..values.size()-1.
  QuinticTable(double x0, double h, const std::vector<double>& f,
               const std::vector<double>& df, const std::vector<double>& d2f);

  double operator()(double x) const {
    double u = (x - x0_) * inv_h_;
    auto i = static_cast<std::ptrdiff_t>(u);
    if (i < 0) i = 0;
    if (i >= intervals_) i = intervals_ - 1;
    const double t = u - static_cast<double>(i);
    const double* c = &coeffs_[static_cast<std::size_t>(i) * 6];
    return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
  }

  double x0() const { return x0_; }
  double spacing() const { return h_; }
  std::ptrdiff_t intervals() const { return intervals_; }

 private:
  double x0_ = 0.0;
  double h_ = 1.0;
  double inv_h_ = 1.0;
  std::ptrdiff_t intervals_ = 0;
  std::vector<double> coeffs_;
};

}  // namespace detail

/// Precomputed periodic Riesz kernel g and its first two derivatives.
///
/// Two interpolation tables back the evaluation:
///  - a "remainder" table holding g - x^{-s} - (1-x)^{-s} on [0, 1] (the sum of
///    the two shifted Hurwitz tails, smooth up to both endpoints); evaluation
///    near the singularity adds the two singular terms back analytically;
///  - a table of g itself on [far_start, 1/2] where g is smooth enough that the
///    power evaluations can be skipped.
/// Both use quintic Hermite interpolation of nodal values computed directly
/// from the Hurwitz zeta function. Immutable after construction; copies share
/// the tables.
class KernelModel {
 public:
  /// Distances below this (mod 1) are treated as collisions.
  static constexpr double kSingularRadius = 1e-9;
  static constexpr double kFarStart = 1.0 / 64.0;
  static constexpr double kFarSpacing = 1.0 / 4096.0;

  KernelModel() = default;

  /// resolution is the number of remainder-table intervals on [0, 1];
  /// must be at least 1024.
  static KernelModel build(const ModelParams& params, std::size_t resolution = 4096);

  const ModelParams& params() const { return params_; }
  double s() const { return params_.s; }
  double c_s() const { return c_s_; }
  double c_s_prime() const { return c_s_prime_; }
  std::size_t resolution() const { return resolution_; }
  int em_order() const { return 10; }  ///< highest Bernoulli number used
  int em_terms() const { return 20; }  ///< directly summed Hurwitz terms

  /// x-coordinate of remainder-table node i (0 <= i <= resolution).
  double node(std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(resolution_);
  }

  /// g(x); throws SingularityError within kSingularRadius of 0 (mod 1).
  double g(double x) const { return eval(x, 0, true); }
  double g1(double x) const { return eval(x, 1, true); }
  double g2(double x) const { return eval(x, 2, true); }

  /// p in {0, 1, 2}.
  double derivative(double x, int p) const;

  /// Same as g, g1, g2 but returns +inf (g, g2) or NaN (g1) instead of throwing.
  double g_or_inf(double x) const { return eval(x, 0, false); }
  double g1_unchecked(double x) const { return eval(x, 1, false); }
  double g2_or_inf(double x) const { return eval(x, 2, false); }

  /// Fills out[j] = g(x - xs[j]) for j != skip (out[skip] = 0) and returns the
  /// sum; +inf entries mark collisions. x and xs must lie in [0, 1).
  double row(double x, const double* xs, std::size_t n, std::size_t skip, double* out) const {
    const detail::QuinticTable& far = *far_[0];
    const double s = params_.s;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double d = std::fabs(x - xs[j]);
      if (d > 0.5) d = 1.0 - d;
      double v;
      if (d >= kFarStart) {
        v = far(d);
      } else if (j == skip) {
        v = 0.0;
      } else if (d < kSingularRadius) {
        v = std::numeric_limits<double>::infinity();
      } else {
        v = std::pow(d, -s) + std::pow(1.0 - d, -s) + (*remainder_[0])(d);
      }
      out[j] = v;
      sum += v;
    }
    if (skip < n) {
      sum -= out[skip];
      out[skip] = 0.0;
    }
    return sum;
  }

  /// Smooth remainder g^(p)(x) - d^p/dx^p [x^{-s} + (1-x)^{-s}] from the table,
  /// x in [0, 1].
  double remainder(double x, int p = 0) const { return (*remainder_[clamp_order(p)])(x); }

  /// Direct Hurwitz-zeta evaluation (test oracle / table construction).
  double direct(double x, int p = 0) const { return kernel_g_deriv_direct(params_.s, x, p); }

  /// Direct evaluation of the smooth remainder and its derivatives, p <= 4.
  double remainder_direct(double x, int p) const;

 private:
  static int clamp_order(int p) {
    if (p < 0 || p > 2) throw DomainError("kernel derivative order must be 0, 1 or 2");
    return p;
  }

  double eval(double x, int p, bool checked) const {
    // x - nearbyint(x) is exact, unlike folding x - floor(x) back from near 1.
    const double r = x - std::nearbyint(x);
    const bool upper = r < 0.0;
    const double d = std::fabs(r);
    if (d < kSingularRadius) {
      if (checked) throw SingularityError("kernel evaluated within 1e-9 of the singularity");
      return p == 1 ? std::numeric_limits<double>::quiet_NaN()
                    : std::numeric_limits<double>::infinity();
    }
    // Odd derivatives change sign under x -> 1 - x.
    const double parity = (p == 1 && upper) ? -1.0 : 1.0;
    if (d >= kFarStart) {
      return parity * (*far_[p])(d);
    }
    const double s = params_.s;
    const double e = 1.0 - d;
    double singular;
    switch (p) {
      case 0:
        singular = std::pow(d, -s) + std::pow(e, -s);
        break;
      case 1:
        singular = -s * (std::pow(d, -s - 1.0) - std::pow(e, -s - 1.0));
        break;
      default:
        singular = s * (s + 1.0) * (std::pow(d, -s - 2.0) + std::pow(e, -s - 2.0));
        break;
    }
    return parity * (singular + (*remainder_[p])(d));
  }

  ModelParams params_{};
  double c_s_ = 0.0;
  double c_s_prime_ = 0.0;
  std::size_t resolution_ = 0;
  std::array<std::shared_ptr<const detail::QuinticTable>, 3> remainder_{};
  std::array<std::shared_ptr<const detail::QuinticTable>, 3> far_{};
};

/// Builds the interpolation tables for the given model.
inline KernelModel build_kernel_table(const ModelParams& params, std::size_t resolution = 4096) {
  return KernelModel::build(params, resolution);
}

}  // namespace riesz
