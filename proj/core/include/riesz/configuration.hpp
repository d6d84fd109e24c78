#pragma once

#include <cstddef>
#include <vector>

namespace riesz {

/// Sorted point configuration on the unit circle [0, 1).
class Configuration {
 public:
  Configuration() = default;
  /// Positions are reduced mod 1 and sorted; throws DomainError on fewer than
  /// two points or coincident points.
  explicit Configuration(std::vector<double> positions);

  /// Equispaced x_i = offset + i / n (mod 1).
  static Configuration lattice(std::size_t n, double offset = 0.0);

  std::size_t size() const { return x_.size(); }
  double operator[](std::size_t i) const { return x_[i]; }
  const std::vector<double>& positions() const { return x_; }

  /// N (x_{i+k} - x_i) with the successor index taken cyclically and +1 added
  /// on wrap-around. 0 <= k <= N/2 (IndexError otherwise).
  double gap(std::size_t i, std::size_t k) const;

  /// Mean of x_{i-k}, ..., x_{i+k} unwrapped around x_i, reduced mod 1.
  double block_average(std::size_t i, std::size_t k) const;

  /// Number of points in the open arc (c - ell, c + ell), 0 < ell <= 1/2.
  std::size_t count(double center, double ell) const;

  Configuration translated(double c) const;

 private:
  std::vector<double> x_;
};

}  // namespace riesz
