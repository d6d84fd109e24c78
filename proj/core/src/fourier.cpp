#include "riesz/fourier.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>
#include <string>

#include "riesz/errors.hpp"

namespace riesz {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_size(std::size_t m) {
  if (m < 16 || (m & (m - 1)) != 0) {
    throw DomainError("FFT grid size must be a power of two >= 16, got " + std::to_string(m));
  }
}

}  // namespace

std::vector<Complex> forward_real(const std::vector<double>& samples) {
  const std::size_t m = samples.size();
  check_size(m);
  std::vector<double> in(samples);
  std::vector<Complex> out(m / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double inv = 1.0 / static_cast<double>(m);
  for (auto& c : out) c *= inv;
  return out;
}

std::vector<double> inverse_real(const std::vector<Complex>& coeffs, std::size_t m) {
  check_size(m);
  std::vector<Complex> in(m / 2 + 1, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < in.size() && k < coeffs.size(); ++k) in[k] = coeffs[k];
  in[0] = Complex(in[0].real(), 0.0);
  in[m / 2] = Complex(in[m / 2].real(), 0.0);
  std::vector<double> out(m);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), reinterpret_cast<fftw_complex*>(in.data()),
                                out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

PeriodicSeries::PeriodicSeries(std::vector<Complex> coeffs, std::size_t grid_size)
    : grid_size_(grid_size), coeffs_(std::move(coeffs)) {
  check_size(grid_size_);
  coeffs_.resize(grid_size_ / 2 + 1, Complex(0.0, 0.0));
  coeffs_[0] = Complex(coeffs_[0].real(), 0.0);
  coeffs_[grid_size_ / 2] = Complex(0.0, 0.0);

  const double two_pi = 2.0 * std::numbers::pi;
  grids_.resize(5);
  std::vector<Complex> d = coeffs_;
  for (int p = 0; p < 5; ++p) {
    grids_[p] = inverse_real(d, grid_size_);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] *= Complex(0.0, two_pi * static_cast<double>(k));
  }
  const double h = 1.0 / static_cast<double>(grid_size_);
  auto periodic = [](const std::vector<double>& g) {
    std::vector<double> e(g);
    e.push_back(g.front());
    return e;
  };
  tables_.resize(3);
  for (int p = 0; p < 3; ++p) {
    tables_[p] = std::make_shared<const detail::QuinticTable>(
        0.0, h, periodic(grids_[p]), periodic(grids_[p + 1]), periodic(grids_[p + 2]));
  }
}

PeriodicSeries PeriodicSeries::from_samples(const std::vector<double>& samples) {
  return PeriodicSeries(forward_real(samples), samples.size());
}

double PeriodicSeries::derivative(double x, int p) const {
  if (p < 0 || p > 2) throw DomainError("PeriodicSeries derivative order must be 0, 1 or 2");
  return (*tables_[static_cast<std::size_t>(p)])(wrap(x));
}

double PeriodicSeries::inner(const PeriodicSeries& other) const {
  const std::size_t n = std::min(coeffs_.size(), other.coeffs_.size());
  double acc = coeffs_[0].real() * other.coeffs_[0].real();
  for (std::size_t k = 1; k < n; ++k) acc += 2.0 * (coeffs_[k] * std::conj(other.coeffs_[k])).real();
  return acc;
}

}  // namespace riesz
