#pragma once

#include <array>
#include <optional>
#include <vector>

#include "riesz/fourier.hpp"
#include "riesz/kernel.hpp"
#include "riesz/test_function.hpp"

namespace riesz {

/// Fourier multiplier of (-Lap)^{(1-s)/2} in the basis e^{2 pi i k x},
/// normalised so that it maps g to c_s (delta_0 - 1): mu(k) = c_s / ghat(k).
struct Multiplier {
  double s = 0.5;
  double c_s = 0.0;
  std::size_t grid_size = 0;
  std::vector<double> values;       ///< mu(k) for k = 0..grid_size/2, mu(0) = 0
  std::array<double, 8> measured{};  ///< mu(1..8) from real-space quadrature
  double fit_residual = 0.0;        ///< max_k |mu(k) / (mu(1) k^{1-s}) - 1| over k <= 8

  double operator()(long k) const;
  /// ghat(k) = c_s / mu(k), the Fourier coefficient of g.
  double kernel_coefficient(long k) const { return c_s / (*this)(k); }
};

/// ghat(m) = 2 Gamma(1-s) sin(pi s / 2) (2 pi |m|)^{s-1}, m != 0.
double kernel_fourier_exact(double s, long m);

/// Measures ghat(m) for m = 1..8 by quadrature of the real-space kernel
/// against cos(2 pi m x), fits mu(k) = mu(1) k^{1-s} and tabulates it up to
/// grid_size / 2. Throws CalibrationError when the fit residual exceeds 1e-6.
Multiplier calibrate_multiplier(const KernelModel& model, std::size_t grid_size);

enum class ClosedForm { none, indicator, power };

/// The transport psi solving -2 (g' * psi) = xi - int xi with int psi = 0.
///
/// This is the beta-free map; the Gibbs measure at inverse temperature beta
/// uses psi / beta. Evaluation uses the closed form when one is attached and
/// the map is unsmoothed, and the spectral tables otherwise.
class TransportMap {
 public:
  TransportMap() = default;
  TransportMap(TestFunction source, double s, PeriodicSeries series,
               ClosedForm closed_form = ClosedForm::none,
               std::optional<double> smoothing = std::nullopt);

  const TestFunction& source() const { return source_; }
  double s() const { return s_; }
  const PeriodicSeries& series() const { return series_; }
  std::size_t grid_size() const { return series_.grid_size(); }
  /// psi on j / M.
  const std::vector<double>& grid() const { return series_.grid(0); }
  ClosedForm closed_form() const { return closed_form_; }
  std::optional<double> smoothing() const { return smoothing_; }

  double operator()(double x) const { return derivative(x, 0); }
  /// p in 0..2.
  double derivative(double x, int p) const;

 private:
  TestFunction source_;
  double s_ = 0.5;
  PeriodicSeries series_;
  ClosedForm closed_form_ = ClosedForm::none;
  std::optional<double> smoothing_;
};

/// psi(x) by adaptive tanh-sinh quadrature of the periodised odd kernel
/// zeta(1-s, z) - zeta(1-s, 1-z) against xi - int xi, split at the
/// singularities of xi. Throws QuadratureError when the error estimate
/// exceeds 1e-9.
double riesz_inverse_pointwise(const TestFunction& xi, double s, double x);

/// Spectral inversion on an M-point grid (M a power of two >= 1024). Uses the
/// exact Fourier coefficients of xi when known and an FFT of the samples
/// otherwise. Throws ResolutionError when more than 1% of the spectral energy
/// sits in modes above M/4.
TransportMap riesz_inverse_spectral(const TestFunction& xi, const Multiplier& mu,
                                    std::size_t grid_size);

/// Spectral map with the closed-form evaluator attached (indicator at scale 1,
/// or power with alpha < s). Falls back to riesz_inverse_spectral otherwise.
TransportMap build_transport(const TestFunction& xi, const Multiplier& mu, std::size_t grid_size);

/// psi for xi = 1_{(-a,a)}:
/// -(cot(pi s / 2) / (4 pi s)) (G(x + a) - G(x - a)), G(u) = zeta(-s, {u}) + zeta(-s, 1 - {u}).
double psi_closed_indicator(double a, double s, double x);
/// p-th derivative, p in 0..2; SingularityError at x = +-a for p >= 1.
double psi_closed_indicator_deriv(double a, double s, double x, int p);

/// psi for xi = zeta(alpha, x) + zeta(alpha, 1 - x), 0 < alpha < s:
/// -(A_alpha / A_s) (zeta(alpha-s, x) - zeta(alpha-s, 1-x)) / (4 Gamma(1+s-alpha) cos(pi (s-alpha) / 2))
/// with A_w = 2 Gamma(1-w) sin(pi w / 2).
double psi_closed_power(double alpha, double s, double x);
/// p-th derivative, p in 0..2; SingularityError at x = 0 for p >= 1.
double psi_closed_power_deriv(double alpha, double s, double x, int p);

/// psi_l = psi * K_l with K_l the unit-mass triangle of half-width l, whose
/// Fourier weights are sinc^2(pi k l). Needs l > 2 / M (ResolutionError).
/// For closed-form maps psi_l'' is evaluated exactly as a second difference.
TransportMap smooth(const TransportMap& psi, double ell);

/// sigma^2 = (1/beta) int xi' psi. Indicators use boundary values of psi,
/// smooth kinds real-space quadrature, grids the trapezoid rule on -xi psi'.
double sigma_xi_squared(const TestFunction& xi, const TransportMap& psi, double beta);

/// (1 / (2 beta c_s)) sum_{m != 0} mu(m) |xihat_m|^2.
double sigma_xi_squared_spectral(const TestFunction& xi, const Multiplier& mu, double beta);

/// sum_{m != 0} mu(m) |xihat_m|^2, the H^{(1-s)/2} seminorm squared in the
/// calibrated normalisation.
double calibrated_seminorm(const TestFunction& xi, const Multiplier& mu);

/// sum_{m != 0} (2 pi |m|)^{2 alpha} |xihat_m|^2 over |m| < M/2.
double sobolev_seminorm(const TestFunction& xi, double alpha, std::size_t grid_size);

/// Fourier coefficients xihat_m for m = 0..M/2 (exact when known, FFT otherwise).
std::vector<Complex> test_function_coefficients(const TestFunction& xi, std::size_t grid_size);

}  // namespace riesz
