#pragma once

#include <map>
#include <string>
#include <vector>

#include "riesz/statistics.hpp"
#include "riesz/test_function.hpp"

namespace riesz {

/// Recorded series per chain: chains[c][t].
using ChainSeries = std::vector<std::vector<double>>;

/// Effective sample size every reported estimate must reach.
inline constexpr double kMinEss = 200.0;

struct Prediction {
  double sigma2 = 0.0;       ///< asymptotic variance sigma_xi^2
  double scale_power = 0.0;  ///< expected growth exponent
  double normalizer = 1.0;   ///< N^s zeta(-s, 2 l) for counts
};

struct VarianceEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double ess = 0.0;
};

/// Pooled mean with a batch-means standard error. A series that is constant
/// across every chain is exact (stderr 0, ess = records); otherwise the pooled
/// ESS must reach min_ess (SampleError).
VarianceEstimate mean_with_error(const ChainSeries& chains, double min_ess = kMinEss);

/// Variance about the pooled mean with a batch-means standard error over
/// ceil(sqrt(records)) batches per chain. SampleError when the ESS is below
/// min_ess or the series is constant.
VarianceEstimate variance_with_error(const ChainSeries& chains, double min_ess = 50.0);

struct GapProfileRow {
  long k = 0;
  double variance = 0.0;
  double stderr_ = 0.0;
  double ess = 0.0;
};

struct GapProfile {
  std::vector<GapProfileRow> rows;
  double exponent = 0.0;
  double exponent_stderr = 0.0;
};

/// Var[gap(., k)] from the gapsq:k series (mean of (gap - k)^2 over labels)
/// and a weighted least-squares fit of log Var against log k. With fewer
/// than two positive variances the exponent is NaN.
GapProfile gap_variance_profile(const std::map<long, ChainSeries>& gapsq, double min_ess = kMinEss);

struct NumberVarianceRow {
  double ell = 0.0;
  double variance = 0.0;
  double stderr_ = 0.0;
  double ess = 0.0;
  double normalizer = 0.0;      ///< N^s zeta(-s, 2 l)
  double ratio = 0.0;           ///< variance / normalizer
  double ratio_stderr = 0.0;
  double stated_sigma2 = 0.0;    ///< cot(pi s / 2) / (beta (pi / 2) s)
  double predicted = 0.0;       ///< N^s sigma^2 of the indicator, from the transport
};

/// Counts in (-l, l) per record. Var is taken about the pooled mean; a count
/// series constant across chains (l = 1/2) has variance 0.
std::vector<NumberVarianceRow> number_variance(const std::map<double, ChainSeries>& counts,
                                               std::size_t n, double s, double beta,
                                               double min_ess = kMinEss);

struct CLTReport {
  double n_effective = 0.0;
  double ks_stat = 0.0;
  double ks_pvalue = 0.0;
  double w1_to_gaussian = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double variance_ratio = 0.0;  ///< empirical / predicted
  double variance_ratio_stderr = 0.0;
};

/// CLT diagnostics for z = (x - center) / scale against Normal(0, sigma2).
/// Records are thinned to spacing >= the autocorrelation time for KS, W1 and
/// moments; the variance ratio uses all records with batch means. With
/// lattice = true the raw values are integers and KS uses the continuity
/// corrected lattice distance. Needs >= 200 effectively independent samples.
CLTReport clt_test(const ChainSeries& chains, double center, double scale, double sigma2,
                   bool lattice = false);

struct InequalityCheck {
  double empirical = 0.0;
  double empirical_stderr = 0.0;
  double bound = 0.0;
  double bound_stderr = 0.0;
  double margin = 0.0;  ///< bound + 3 sqrt(se_emp^2 + se_bound^2) - empirical
  bool holds = false;
};

/// int xi^2 over the circle.
double test_function_square_mean(const TestFunction& xi);

/// Var[Fluct[xi]] <= N (int xi^2 - (int xi)^2).
InequalityCheck sub_poisson_check(const ChainSeries& fluct, const TestFunction& xi, std::size_t n,
                                  double min_ess = kMinEss);

/// Var[gap(i, k)] <= E[grad F . (beta Hess H)^{-1} grad F] from the gap:k and
/// bl:k series.
InequalityCheck brascamp_lieb_check(const ChainSeries& gap, const ChainSeries& bl,
                                    double min_ess = kMinEss);

struct TailRow {
  double parameter = 0.0;  ///< eps, or delta for the nearest-neighbour tail
  double threshold = 0.0;  ///< k^{s/2 + eps}, or delta
  std::size_t hits = 0;
  std::size_t samples = 0;
  double probability = 0.0;
  double lower = 0.0;  ///< Wilson interval
  double upper = 0.0;
  bool bound_only = false;  ///< fewer than 10 hits: read upper as a bound
};

struct RigidityTails {
  std::vector<TailRow> gap_tail;      ///< P(|gap(., k) - k| > k^{s/2 + eps})
  std::vector<TailRow> collision_tail;  ///< P(gap(., 1) < delta)
};

/// Tail frequencies from thinned gap:k and gap:1 series (either may be empty).
RigidityTails rigidity_tails(const ChainSeries& gap_k, long k, double s,
                             const std::vector<double>& eps, const ChainSeries& gap_1,
                             const std::vector<double>& deltas);

struct LoopRow {
  std::size_t n = 0;
  double mean = 0.0;
  double mean_stderr = 0.0;
  double variance = 0.0;
  double variance_stderr = 0.0;
  double ess = 0.0;
};

struct LoopStatistics {
  std::vector<LoopRow> rows;
  double exponent = 0.0;  ///< fitted growth of Var A in N; NaN with one N
  double exponent_stderr = 0.0;
};

LoopStatistics loop_statistics(const std::map<std::size_t, ChainSeries>& a_by_n,
                               double min_ess = kMinEss);

}  // namespace riesz
