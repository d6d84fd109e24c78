#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "riesz/experiment_spec.hpp"

namespace riesz {

struct AcceptanceOptions {
  Suite suite = Suite::quick;
  std::size_t threads = 1;
  std::uint64_t seed = 20240611;
  /// Directory holding hurwitz_reference.csv.
  std::string data_dir;
  /// When set, every sampling run writes a full artifact directory below it.
  std::string out_dir;
  /// Criteria to run (1..9); empty runs all.
  std::vector<int> only;
  /// Progress lines go here when set.
  std::ostream* log = nullptr;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  bool numerical_error = false;  ///< failed by an exception from the numerics
  std::string detail;
  double seconds = 0.0;
};

/// Sampler workload per suite.
struct Workload {
  std::size_t chains;
  std::size_t sweeps;
  std::size_t burn_in;
  std::size_t thin;
};
Workload workload(Suite suite);

/// Runs the acceptance criteria in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS  C3 exact-symmetry statistics [12.3 s] detail"
std::string format_result(const CriterionResult& r);

/// Empirical versus enumerated stationary law of the discretised three-particle
/// Metropolis chain (12 cells, +-1 cell proposals).
struct DiscreteChainCheck {
  double max_abs_error = 0.0;      ///< empirical vs exp(-beta H) weights
  double total_variation = 0.0;
  double stationary_error = 0.0;   ///< enumerated transition matrix fixed point vs weights
  std::size_t states = 0;
};
DiscreteChainCheck discrete_three_particle_check(double s, double beta, std::size_t steps,
                                                 std::uint64_t seed);

}  // namespace riesz
