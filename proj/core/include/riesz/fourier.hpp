#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "riesz/kernel.hpp"

namespace riesz {

using Complex = std::complex<double>;

/// Real samples on j / M -> coefficients c_m = (1/M) sum_j f_j e^{-2 pi i m j / M},
/// m = 0..M/2.
std::vector<Complex> forward_real(const std::vector<double>& samples);

/// Coefficients c_m (m = 0..M/2, Hermitian extension implied) -> samples
/// sum_m c_m e^{2 pi i m j / M} on j / M.
std::vector<double> inverse_real(const std::vector<Complex>& coeffs, std::size_t m);

/// Real trigonometric polynomial on the circle with M/2 + 1 stored
/// coefficients (the Nyquist mode is dropped). Point evaluation of the value
/// and of the first two derivatives goes through quintic Hermite tables built
/// from spectrally exact grid values.
class PeriodicSeries {
 public:
  PeriodicSeries() = default;
  PeriodicSeries(std::vector<Complex> coeffs, std::size_t grid_size);
  static PeriodicSeries from_samples(const std::vector<double>& samples);

  std::size_t grid_size() const { return grid_size_; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  /// Samples of the p-th derivative on j / M, p in 0..4.
  const std::vector<double>& grid(int p = 0) const { return grids_.at(static_cast<std::size_t>(p)); }

  double operator()(double x) const { return (*tables_[0])(wrap(x)); }
  double derivative(double x, int p = 1) const;

  /// Termwise product of the coefficients with a multiplier m -> w(m).
  template <class F>
  PeriodicSeries filtered(F&& weight) const {
    std::vector<Complex> c = coeffs_;
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= weight(static_cast<long>(k));
    return PeriodicSeries(std::move(c), grid_size_);
  }

  /// Integral of f(x) h(x) over the circle by Parseval.
  double inner(const PeriodicSeries& other) const;

 private:
  static double wrap(double x) {
    double y = x - std::floor(x);
    return y >= 1.0 ? 0.0 : y;
  }

  std::size_t grid_size_ = 0;
  std::vector<Complex> coeffs_;
  std::vector<std::vector<double>> grids_;
  std::vector<std::shared_ptr<const detail::QuinticTable>> tables_;
};

}  // namespace riesz
