#pragma once

#include <Eigen/Dense>
#include <string>

#include "riesz/configuration.hpp"
#include "riesz/fourier.hpp"
#include "riesz/kernel.hpp"
#include "riesz/test_function.hpp"
#include "riesz/transforms.hpp"

namespace riesz {

// Throughout, N is the size of the configuration and beta comes from the
// kernel model's parameters.

/// H_N = N^{-s} sum_{i != j} g(x_i - x_j).
double energy(const Configuration& config, const KernelModel& model);

/// H_N(x with x_i <- x_new) - H_N(x), in O(N).
double energy_delta(const Configuration& config, std::size_t i, double x_new,
                    const KernelModel& model);

/// dH/dx_i = 2 N^{-s} sum_{j != i} g'(x_i - x_j).
Eigen::VectorXd gradient(const Configuration& config, const KernelModel& model);

/// Off-diagonal -2 N^{-s} g''(x_i - x_j), diagonal minus the off-diagonal row sum.
Eigen::MatrixXd hessian(const Configuration& config, const KernelModel& model);

/// sum_i xi(x_i) - N int xi.
double fluct(const Configuration& config, const TestFunction& xi);

/// A transport with the spectral convolutions needed by the loop terms:
/// g' * psi, g'' * psi and g'' * psi^2 (all for the beta-free psi).
struct LoopPair {
  TransportMap psi;
  PeriodicSeries g1_psi;
  PeriodicSeries g2_psi;
  PeriodicSeries g2_psi2;
};

LoopPair make_loop_pair(const TransportMap& psi, const Multiplier& mu);

enum class LoopPath { pair_sum, transport_identity };

struct LoopDiagnostics {
  double a_value = 0.0;        ///< pair-sum path
  double a_transport = 0.0;    ///< grad H . Psi - N^{1-s} Fluct[xi] / beta
  double b_value = 0.0;
  LoopPath computed_via = LoopPath::pair_sum;
};

/// Loop term A for Psi = (psi(x_i) / beta)_i: the off-diagonal double integral
/// of (Psi(x) - Psi(y)) N^{-s} g'(x - y) against fluct x fluct. Computed as a
/// pair sum plus the spectral single sum, and again through the transport
/// identity. With check = true, a disagreement above 1e-8 max(1, |A|) throws
/// MismatchError.
LoopDiagnostics loop_term_A(const Configuration& config, const LoopPair& pair,
                            const KernelModel& model, bool check = true);

/// Loop term B: off-diagonal double integral of N^{-s} g''(x - y) (Psi(x) - Psi(y))^2
/// against fluct x fluct, expanded into pair sum, single sum and constant.
double loop_term_B(const Configuration& config, const LoopPair& pair, const KernelModel& model);

/// The pure pair part of B (nonnegative).
double loop_term_B_pairs(const Configuration& config, const LoopPair& pair,
                         const KernelModel& model);

}  // namespace riesz
