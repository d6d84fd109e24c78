#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace riesz {

struct EssResult {
  double ess = 0.0;
  double act = 1.0;  ///< integrated autocorrelation time, clamped to >= 1
};

/// Geyer's initial monotone positive sequence estimator on FFT autocovariances.
/// Needs >= 100 records and nonzero variance (SampleError otherwise).
EssResult effective_sample_size(const std::vector<double>& values);

double mean(const std::vector<double>& values);
/// Unbiased sample variance.
double sample_variance(const std::vector<double>& values);

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Mean with a batch-means standard error pooled over chains; each chain is
/// cut into ceil(sqrt(n_c)) batches.
Estimate batch_means_mean(const std::vector<std::vector<double>>& chains);

/// Variance about the pooled mean, with the batch-means standard error of the
/// squared deviations.
Estimate batch_means_variance(const std::vector<std::vector<double>>& chains);

/// Total ESS over chains.
double pooled_ess(const std::vector<std::vector<double>>& chains);

/// Every ceil(act)-th record of each chain, concatenated.
std::vector<double> thin_to_independent(const std::vector<std::vector<double>>& chains);

double normal_cdf(double x);

/// One-sample Kolmogorov-Smirnov distance between the empirical law of the
/// samples and a continuous cdf.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// KS distance for integer-valued samples against a continuous model
/// discretised with a continuity correction: F(k) = cdf(k + 1/2) at integers.
double ks_statistic_lattice(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
double ks_pvalue(double d, std::size_t n);

/// Exact W1 distance between the empirical law and Normal(mu, sigma^2),
/// integrating |F_n - Phi| piecewise in closed form.
double w1_to_normal(std::vector<double> samples, double mu, double sigma);

double skewness(const std::vector<double>& values);
double excess_kurtosis(const std::vector<double>& values);

/// Wilson score interval for k successes out of n at z standard deviations.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Weighted least squares y = a + b x; weights 1/sigma^2 (all ones if sigma empty).
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& sigma = {});

}  // namespace riesz
