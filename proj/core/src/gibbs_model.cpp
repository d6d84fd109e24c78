#include "riesz/gibbs_model.hpp"

#include <cmath>
#include <numbers>

#include "riesz/errors.hpp"

namespace riesz {

namespace {

double scale_factor(std::size_t n, double s) { return std::pow(static_cast<double>(n), -s); }

}  // namespace

double energy(const Configuration& config, const KernelModel& model) {
  const std::size_t n = config.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) acc += model.g(config[i] - config[j]);
  }
  return 2.0 * scale_factor(n, model.s()) * acc;
}

double energy_delta(const Configuration& config, std::size_t i, double x_new,
                    const KernelModel& model) {
  const std::size_t n = config.size();
  if (i >= n) throw IndexError("energy_delta: index out of range");
  const double xi = config[i];
  if (x_new == xi) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    acc += model.g(x_new - config[j]) - model.g(xi - config[j]);
  }
  return 2.0 * scale_factor(n, model.s()) * acc;
}

Eigen::VectorXd gradient(const Configuration& config, const KernelModel& model) {
  const auto n = static_cast<Eigen::Index>(config.size());
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = model.g1(config[static_cast<std::size_t>(i)] - config[static_cast<std::size_t>(j)]);
      grad[i] += d;
      grad[j] -= d;
    }
  }
  return 2.0 * scale_factor(config.size(), model.s()) * grad;
}

Eigen::MatrixXd hessian(const Configuration& config, const KernelModel& model) {
  const auto n = static_cast<Eigen::Index>(config.size());
  const double c = 2.0 * scale_factor(config.size(), model.s());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = c * model.g2(config[static_cast<std::size_t>(i)] - config[static_cast<std::size_t>(j)]);
      h(i, j) = -v;
      h(j, i) = -v;
      h(i, i) += v;
      h(j, j) += v;
    }
  }
  return h;
}

double fluct(const Configuration& config, const TestFunction& xi) {
  double acc = 0.0;
  for (double x : config.positions()) acc += xi(x);
  return acc - static_cast<double>(config.size()) * xi.mean();
}

LoopPair make_loop_pair(const TransportMap& psi, const Multiplier& mu) {
  const double two_pi = 2.0 * std::numbers::pi;
  const auto& base = psi.series();
  auto ghat = [&](long k) { return k == 0 ? 0.0 : mu.kernel_coefficient(k); };
  LoopPair pair{psi,
                base.filtered([&](long k) {
                  return Complex(0.0, two_pi * static_cast<double>(k)) * ghat(k);
                }),
                base.filtered([&](long k) {
                  const double w = two_pi * static_cast<double>(k);
                  return Complex(-w * w * ghat(k), 0.0);
                }),
                {}};
  std::vector<double> sq(base.grid(0));
  for (double& v : sq) v *= v;
  pair.g2_psi2 = PeriodicSeries::from_samples(sq).filtered([&](long k) {
    const double w = two_pi * static_cast<double>(k);
    return Complex(-w * w * ghat(k), 0.0);
  });
  return pair;
}

LoopDiagnostics loop_term_A(const Configuration& config, const LoopPair& pair,
                            const KernelModel& model, bool check) {
  const std::size_t n = config.size();
  const double beta = model.params().beta;
  const double s = model.s();
  const double ns = scale_factor(n, s);
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = pair.psi(config[i]) / beta;

  // Pair sum: N^{-s} sum_{i != j} (phi_i - phi_j) g'(x_i - x_j) = grad H . Phi.
  double pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs += (phi[i] - phi[j]) * model.g1(config[i] - config[j]);
    }
  }
  pairs *= 2.0 * ns;
  double single = 0.0;
  for (std::size_t i = 0; i < n; ++i) single += pair.g1_psi(config[i]);
  const double n1s = static_cast<double>(n) * ns;
  LoopDiagnostics out;
  out.a_value = pairs + 2.0 * n1s * single / beta;

  const Eigen::VectorXd grad = gradient(config, model);
  double gp = 0.0;
  for (std::size_t i = 0; i < n; ++i) gp += grad[static_cast<Eigen::Index>(i)] * phi[i];
  out.a_transport = gp - n1s * fluct(config, pair.psi.source()) / beta;
  out.computed_via = LoopPath::pair_sum;
  if (check && std::abs(out.a_value - out.a_transport) > 1e-8 * std::max(1.0, std::abs(out.a_value))) {
    throw MismatchError("loop term A: pair-sum path " + std::to_string(out.a_value) +
                        " disagrees with transport identity " + std::to_string(out.a_transport));
  }
  return out;
}

double loop_term_B_pairs(const Configuration& config, const LoopPair& pair,
                         const KernelModel& model) {
  const std::size_t n = config.size();
  const double beta = model.params().beta;
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = pair.psi(config[i]) / beta;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = phi[i] - phi[j];
      acc += model.g2(config[i] - config[j]) * d * d;
    }
  }
  return 2.0 * scale_factor(n, model.s()) * acc;
}

double loop_term_B(const Configuration& config, const LoopPair& pair, const KernelModel& model) {
  const std::size_t n = config.size();
  const double beta = model.params().beta;
  const double ns = scale_factor(n, model.s());
  const double dn = static_cast<double>(n);
  // F = -2 phi (g'' * phi) + g'' * phi^2 with phi = psi / beta.
  auto f = [&](double x) {
    return (-2.0 * pair.psi(x) * pair.g2_psi(x) + pair.g2_psi2(x)) / (beta * beta);
  };
  double single = 0.0;
  for (double x : config.positions()) single += f(x);
  // int F = -2 <psi, g'' * psi> + mean of g'' * psi^2 (which is zero).
  const double integral = -2.0 * pair.psi.series().inner(pair.g2_psi) / (beta * beta);
  return loop_term_B_pairs(config, pair, model) - 2.0 * dn * ns * single + dn * dn * ns * integral;
}

}  // namespace riesz
