#include "riesz/kernel.hpp"

#include <string>

namespace riesz {

namespace detail {

QuinticTable::QuinticTable(double x0, double h, const std::vector<double>& f,
                           const std::vector<double>& df, const std::vector<double>& d2f)
    : x0_(x0), h_(h), inv_h_(1.0 / h) {
  const std::size_t nodes = f.size();
  intervals_ = static_cast<std::ptrdiff_t>(nodes) - 1;
  coeffs_.resize(static_cast<std::size_t>(intervals_) * 6);
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    const double p0 = f[i];
    const double v0 = h * df[i];
    const double a0 = h * h * d2f[i];
    const double p1 = f[i + 1];
    const double v1 = h * df[i + 1];
    const double a1 = h * h * d2f[i + 1];
    double* c = &coeffs_[i * 6];
    // Monomial form of the quintic Hermite basis.
    c[0] = p0;
    c[1] = v0;
    c[2] = 0.5 * a0;
    c[3] = -10.0 * p0 - 6.0 * v0 - 1.5 * a0 + 10.0 * p1 - 4.0 * v1 + 0.5 * a1;
    c[4] = 15.0 * p0 + 8.0 * v0 + 1.5 * a0 - 15.0 * p1 + 7.0 * v1 - a1;
    c[5] = -6.0 * p0 - 3.0 * v0 - 0.5 * a0 + 6.0 * p1 - 3.0 * v1 + 0.5 * a1;
  }
}

}  // namespace detail

double KernelModel::remainder_direct(double x, int p) const {
  // g - x^{-s} - (1-x)^{-s} = zeta(s, 1 + x) + zeta(s, 2 - x) for x in [0, 1].
  const double s = params_.s;
  const double sign = (p % 2 == 0) ? 1.0 : -1.0;
  return sign * rising_factorial(s, p) *
         (hurwitz_zeta(s + p, 1.0 + x) + sign * hurwitz_zeta(s + p, 2.0 - x));
}

KernelModel KernelModel::build(const ModelParams& params, std::size_t resolution) {
  params.validate();
  if (resolution < 1024) {
    throw DomainError("kernel table resolution must be at least 1024, got " +
                      std::to_string(resolution));
  }
  KernelModel model;
  model.params_ = params;
  model.resolution_ = resolution;
  const auto constants = riesz_constants(params.s);
  model.c_s_ = constants.c_s;
  model.c_s_prime_ = constants.c_s_prime;

  const double h = 1.0 / static_cast<double>(resolution);
  std::array<std::vector<double>, 5> rem;
  for (int q = 0; q < 5; ++q) {
    rem[q].resize(resolution + 1);
    for (std::size_t i = 0; i <= resolution; ++i) {
      rem[q][i] = model.remainder_direct(static_cast<double>(i) * h, q);
    }
  }
  for (int p = 0; p < 3; ++p) {
    model.remainder_[p] =
        std::make_shared<const detail::QuinticTable>(0.0, h, rem[p], rem[p + 1], rem[p + 2]);
  }

  const auto far_nodes =
      static_cast<std::size_t>((0.5 - kFarStart) / kFarSpacing + 0.5) + 1;
  std::array<std::vector<double>, 5> far;
  for (int q = 0; q < 5; ++q) {
    far[q].resize(far_nodes);
    for (std::size_t i = 0; i < far_nodes; ++i) {
      far[q][i] = kernel_g_deriv_direct(params.s, kFarStart + static_cast<double>(i) * kFarSpacing, q);
    }
  }
  for (int p = 0; p < 3; ++p) {
    model.far_[p] = std::make_shared<const detail::QuinticTable>(kFarStart, kFarSpacing, far[p],
                                                                  far[p + 1], far[p + 2]);
  }
  return model;
}

double KernelModel::derivative(double x, int p) const {
  switch (p) {
    case 0:
      return g(x);
    case 1:
      return g1(x);
    case 2:
      return g2(x);
    default:
      throw DomainError("kernel derivative order must be 0, 1 or 2, got " + std::to_string(p));
  }
}

}  // namespace riesz
