#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "riesz/configuration.hpp"
#include "riesz/kernel.hpp"
#include "riesz/rng.hpp"

namespace riesz {

class ObservableSet;

enum class Scheme { rwm, mala };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

struct SamplerConfig {
  Scheme scheme = Scheme::rwm;
  double step = 1.0;  ///< proposal scale as a fraction of the mean gap 1/N
  std::size_t sweeps = 200000;
  std::size_t burn_in = 20000;
  std::size_t thin = 10;
  std::uint64_t seed = 20240611;
  double target_accept = -1.0;  ///< negative: 0.4 for rwm, 0.57 for mala
  std::size_t adapt_sweeps = 0;  ///< 0: adapt during the whole burn-in
  std::size_t chains = 8;
  double init_jitter = 0.1;  ///< uniform start jitter as a fraction of 1/N
  /// After every sweep: a uniform rotation of the whole configuration and one
  /// flow move on Fourier mode 1 + (t - 1) mod collective_modes (0 disables both).
  std::size_t collective_modes = 4;

  double effective_target() const;
  std::size_t effective_adapt() const;
  /// Throws DomainError when step <= 0, thin < 1, burn_in >= sweeps (sweeps > 0),
  /// or the target acceptance is outside (0, 1).
  void validate() const;

  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

/// Draws the Metropolis acceptance decision for an energy change dh:
/// accept iff u < exp(-beta dh). Infinite dh is always rejected.
inline bool metropolis_accept(double beta_dh, double u) {
  if (!(beta_dh < std::numeric_limits<double>::infinity())) return false;
  if (beta_dh <= 0.0) return true;
  return u < std::exp(-beta_dh);
}

/// One Metropolis sweep without caching: visits the sites in a random order,
/// proposes x_i + U[-step/N, step/N] (mod 1), accepts with min(1, exp(-beta dH))
/// and re-sorts at the end. Returns the acceptance rate. Collisions closer
/// than the kernel's singular radius are rejected.
double metropolis_sweep(Configuration& config, const KernelModel& model, double step,
                        Xoshiro256& rng);

/// One MALA move of all particles: x' = x - tau beta grad H + sqrt(2 tau) Z with
/// sqrt(2 tau) = step / N, Metropolis-Hastings corrected on the lift to R^N.
/// Returns 1 on acceptance and 0 on rejection.
double mala_sweep(Configuration& config, const KernelModel& model, double step, Xoshiro256& rng);

/// A Markov chain with an N x N cache of pair kernel values, so a single-site
/// proposal costs N kernel evaluations.
class Chain {
 public:
  Chain(const KernelModel& model, Configuration init, std::uint64_t seed);

  /// Runs one sweep of the given scheme at the given step; returns the
  /// acceptance rate of the sweep.
  double sweep(Scheme scheme, double step);

  /// Moves every point along the time-t flow of dx/dt = sin(2 pi m x + phi) / (2 pi m)
  /// for t uniform in [-tau, tau] and phi uniform, accepting with
  /// min(1, exp(-beta dH) * Jacobian). The flows form a group in t, so the
  /// move is reversible. Returns 1 on acceptance.
  double collective_move(int m, double tau);
  /// Rotates the configuration by c (the energy is invariant).
  void rotate(double c);

  const Configuration& configuration() const { return config_; }
  double energy() const;
  Xoshiro256& rng() { return rng_; }

 private:
  double rwm_sweep(double step);
  double mala_step(double step);
  void rebuild_cache();
  void sort_and_permute();

  const KernelModel* model_;
  Configuration config_;
  std::vector<double> x_;
  std::vector<double> cache_;  // row-major g(x_i - x_j), zero diagonal
  std::vector<double> rowsum_;
  std::vector<double> scratch_;
  std::vector<double> spare_;
  std::vector<std::size_t> order_;
  Xoshiro256 rng_;
};

/// Lattice plus uniform jitter of amplitude jitter / N, rotated by a uniform offset.
Configuration initial_configuration(std::size_t n, double jitter, Xoshiro256& rng);

struct ChainRecord {
  std::uint64_t seed = 0;
  std::vector<std::size_t> sweeps;                      ///< sweep index per record
  std::map<std::string, std::vector<double>> series;    ///< observable -> values
  double final_step = 0.0;
  double accept_rate = 0.0;  ///< mean acceptance after burn-in
  std::vector<double> collective_tau;     ///< final flow amplitude per mode
  double collective_accept = 0.0;         ///< mean flow-move acceptance after burn-in
  double seconds = 0.0;
};

struct RunResult {
  std::vector<ChainRecord> chains;
  std::vector<std::string> observables;

  /// values[chain] for one observable.
  std::vector<std::vector<double>> series(const std::string& name) const;
};

/// Runs independent chains (chain c seeded with chain_seed(seed, c)) on up to
/// `threads` workers. Records every thin-th sweep after burn-in; with zero
/// sweeps the initial configuration is recorded once. Output does not depend
/// on the thread count.
RunResult run_chains(const KernelModel& model, const SamplerConfig& sconfig,
                     const ObservableSet& observables, std::size_t threads = 1);

}  // namespace riesz
