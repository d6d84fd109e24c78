#pragma once

#include <cstddef>

namespace riesz {

/// Model parameters of the circular Riesz gas: kernel exponent s in (0,1),
/// inverse temperature beta > 0 and particle count n >= 2.
struct ModelParams {
  double s = 0.5;
  double beta = 1.0;
  std::size_t n = 2;

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Hurwitz zeta function zeta(w, a) = sum_{k>=0} (k + a)^{-w}, analytically
/// continued to w in (-1, inf) \ {1}.
///
/// Euler-Maclaurin summation: the first 20 terms are summed directly and the
/// tail is replaced by its integral, the boundary half-term and Bernoulli
/// corrections through B_10. Relative accuracy is around 1e-13 for
/// a in [1e-6, 10] except in the immediate vicinity of a zero of zeta(., a).
double hurwitz_zeta(double w, double a);

/// Riemann zeta function on (-1, inf) \ {1}.
inline double riemann_zeta(double w) { return hurwitz_zeta(w, 1.0); }

struct RieszConstants {
  double c_s;        ///< normalisation of (-Lap)^{(1-s)/2} g = c_s (delta_0 - 1)
  double c_s_prime;  ///< prefactor of the real-space singular integral form
};

/// c_s = Gamma((1-s)/2) / Gamma(s/2) * sqrt(pi) / 2^{1-s} and
/// c_s' = 2^{1-s} Gamma(1 - s/2) / (|Gamma(-(1-s)/2)| sqrt(pi)).
RieszConstants riesz_constants(double s);

/// Periodic Riesz kernel g(x) = zeta(s, x) + zeta(s, 1 - x) evaluated directly
/// from the Hurwitz zeta function. x is reduced mod 1.
double kernel_g_direct(double s, double x);

/// p-th derivative (0 <= p <= 4) of the periodic kernel, evaluated directly:
/// g^(p)(x) = (-1)^p s (s+1) ... (s+p-1) [zeta(s+p, x) + (-1)^p zeta(s+p, 1-x)].
double kernel_g_deriv_direct(double s, double x, int p);

/// Rising factorial s (s+1) ... (s+p-1); 1 for p = 0.
double rising_factorial(double s, int p);

/// Reduce x into [0, 1).
double wrap_unit(double x);

/// Signed distance representative of x in [-1/2, 1/2).
double centered(double x);

}  // namespace riesz
