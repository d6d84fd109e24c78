#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace riesz {

enum class TestFunctionKind { indicator, power, cosine, grid };

std::string to_string(TestFunctionKind kind);
TestFunctionKind parse_test_function_kind(const std::string& name);

/// A point where the test function is not smooth, with its order: 0 for a
/// jump, alpha for an |x - a|^{-alpha} blow-up.
struct Singularity {
  double location;
  double order;

  friend bool operator==(const Singularity&, const Singularity&) = default;
};

/// Test function xi for linear statistics, as a function on the unit circle.
///
/// The scale l in (0, 1] only applies to indicators: indicator(a, l) is the
/// indicator of (-a l, a l), i.e. x -> 1_{(-a,a)}(x / l) restricted to the
/// circle. All other kinds live at scale 1.
class TestFunction {
 public:
  /// 1_{(-a, a)}, 0 < a < 1/2. Boundary points get the value 1/2.
  static TestFunction indicator(double a, double scale = 1.0);
  /// zeta(alpha, x) + zeta(alpha, 1 - x), 0 < alpha < 1.
  static TestFunction power(double alpha);
  /// cos(2 pi m x), m >= 1.
  static TestFunction cosine(int m = 1);
  /// Samples on x_j = j / M, j = 0..M-1; M must be a power of two >= 16.
  static TestFunction grid(std::vector<double> values);

  TestFunctionKind kind() const { return kind_; }
  /// a for indicators, alpha for powers, m for cosines, 0 for grids.
  double parameter() const { return parameter_; }
  double scale() const { return scale_; }
  /// Integral over the circle.
  double mean() const;
  const std::vector<Singularity>& singularities() const { return singularities_; }
  std::string name() const;

  /// Value at x (reduced mod 1). Throws SingularityError at a power singularity.
  double operator()(double x) const;
  /// Classical derivative; DomainError for indicators and grids.
  double derivative(double x) const;

  /// Exact Fourier coefficient int xi(x) e^{-2 pi i m x} dx where known
  /// (indicator, power, cosine); empty for grids.
  std::optional<std::complex<double>> fourier(long m) const;

  /// Values on j / M, j = 0..M-1. Power functions are singular at 0 and cannot
  /// be sampled there.
  std::vector<double> sample(std::size_t m) const;

  const std::vector<double>& grid_values() const { return values_; }

  friend bool operator==(const TestFunction&, const TestFunction&) = default;

 private:
  TestFunctionKind kind_ = TestFunctionKind::cosine;
  double parameter_ = 1.0;
  double scale_ = 1.0;
  std::vector<Singularity> singularities_;
  std::vector<double> values_;
};

}  // namespace riesz
