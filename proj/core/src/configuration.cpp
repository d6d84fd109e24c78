#include "riesz/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riesz/errors.hpp"
#include "riesz/special_functions.hpp"

namespace riesz {

Configuration::Configuration(std::vector<double> positions) : x_(std::move(positions)) {
  if (x_.size() < 2) throw DomainError("a configuration needs at least two points");
  for (double& v : x_) {
    if (!std::isfinite(v)) throw DomainError("non-finite position in configuration");
    v = wrap_unit(v);
  }
  std::sort(x_.begin(), x_.end());
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    if (!(x_[i + 1] > x_[i])) {
      throw DomainError("coincident points at index " + std::to_string(i));
    }
  }
  if (!(x_.front() + 1.0 > x_.back())) throw DomainError("coincident points across 0");
}

Configuration Configuration::lattice(std::size_t n, double offset) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = offset + static_cast<double>(i) / static_cast<double>(n);
  return Configuration(std::move(x));
}

double Configuration::gap(std::size_t i, std::size_t k) const {
  const std::size_t n = x_.size();
  if (i >= n) throw IndexError("gap: index " + std::to_string(i) + " out of range");
  if (2 * k > n) {
    throw IndexError("gap: k = " + std::to_string(k) + " exceeds N/2 = " + std::to_string(n / 2));
  }
  const std::size_t j = i + k;
  const double dn = static_cast<double>(n);
  if (j < n) return dn * (x_[j] - x_[i]);
  return dn * (x_[j - n] + 1.0 - x_[i]);
}

double Configuration::block_average(std::size_t i, std::size_t k) const {
  const std::size_t n = x_.size();
  if (i >= n) throw IndexError("block_average: index " + std::to_string(i) + " out of range");
  if (2 * k + 1 > n) throw IndexError("block_average: block 2k+1 exceeds N");
  if (k == 0) return x_[i];
  const double xi = x_[i];
  double acc = 0.0;
  for (std::size_t d = 1; d <= k; ++d) {
    acc += centered(x_[(i + d) % n] - xi);
    acc += centered(x_[(i + n - d) % n] - xi);
  }
  return wrap_unit(xi + acc / static_cast<double>(2 * k + 1));
}

std::size_t Configuration::count(double center, double ell) const {
  if (!(ell > 0.0 && ell <= 0.5)) throw DomainError("count: half-width must lie in (0, 1/2]");
  if (ell == 0.5) return x_.size();  // the whole circle
  std::size_t c = 0;
  for (double v : x_) {
    if (std::abs(centered(v - center)) < ell) ++c;
  }
  return c;
}

Configuration Configuration::translated(double c) const {
  std::vector<double> y(x_);
  for (double& v : y) v += c;
  return Configuration(std::move(y));
}

}  // namespace riesz
