#include "riesz/statistics.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "riesz/errors.hpp"
#include "riesz/fourier.hpp"

namespace riesz {

namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Antiderivative of the standard normal cdf.
double cdf_integral(double x) { return x * normal_cdf(x) + normal_pdf(x); }

}  // namespace

double mean(const std::vector<double>& values) {
  if (values.empty()) throw SampleError("mean of an empty series");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

double sample_variance(const std::vector<double>& values) {
  if (values.size() < 2) throw SampleError("variance needs at least two records");
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return acc / static_cast<double>(values.size() - 1);
}

EssResult effective_sample_size(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 100) throw SampleError("ESS needs at least 100 records, got " + std::to_string(n));
  const double m = mean(values);
  std::size_t size = 16;
  while (size < 2 * n) size *= 2;
  std::vector<double> padded(size, 0.0);
  for (std::size_t i = 0; i < n; ++i) padded[i] = values[i] - m;
  auto c = forward_real(padded);
  for (auto& z : c) z = std::norm(z);
  const auto acov = inverse_real(c, size);
  const double c0 = acov[0];
  if (!(c0 > 1e-300 * static_cast<double>(n))) {
    throw SampleError("ESS of a constant series is undefined");
  }
  auto rho = [&](std::size_t k) { return acov[k] / c0; };

  // tau = -1 + 2 sum_k Gamma_k with Gamma_k = rho_{2k} + rho_{2k+1}, truncated at
  // the first non-positive pair and forced monotone.
  double tau = -1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    double gamma = rho(2 * k) + rho(2 * k + 1);
    if (!(gamma > 0.0)) break;
    gamma = std::min(gamma, prev);
    prev = gamma;
    tau += 2.0 * gamma;
  }
  EssResult r;
  r.act = std::max(1.0, tau);
  r.ess = static_cast<double>(n) / r.act;
  return r;
}

Estimate batch_means_mean(const std::vector<std::vector<double>>& chains) {
  std::vector<double> batch_means;
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& c : chains) {
    const std::size_t n = c.size();
    if (n < 4) throw SampleError("batch means need at least 4 records per chain");
    const auto b = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const std::size_t len = n / b;
    for (std::size_t k = 0; k < b; ++k) {
      double acc = 0.0;
      for (std::size_t t = k * len; t < (k + 1) * len; ++t) acc += c[t];
      batch_means.push_back(acc / static_cast<double>(len));
    }
    for (double v : c) total += v;
    count += n;
  }
  Estimate e;
  e.value = total / static_cast<double>(count);
  const double var_b = sample_variance(batch_means);
  e.stderr_ = std::sqrt(var_b / static_cast<double>(batch_means.size()));
  return e;
}

Estimate batch_means_variance(const std::vector<std::vector<double>>& chains) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& c : chains) {
    for (double v : c) total += v;
    count += c.size();
  }
  if (count < 2) throw SampleError("variance needs at least two records");
  const double m = total / static_cast<double>(count);
  std::vector<std::vector<double>> squares;
  for (const auto& c : chains) {
    std::vector<double> sq(c.size());
    for (std::size_t t = 0; t < c.size(); ++t) sq[t] = (c[t] - m) * (c[t] - m);
    squares.push_back(std::move(sq));
  }
  Estimate e = batch_means_mean(squares);
  e.value *= static_cast<double>(count) / static_cast<double>(count - 1);
  return e;
}

double pooled_ess(const std::vector<std::vector<double>>& chains) {
  double total = 0.0;
  for (const auto& c : chains) total += effective_sample_size(c).ess;
  return total;
}

std::vector<double> thin_to_independent(const std::vector<std::vector<double>>& chains) {
  std::vector<double> out;
  for (const auto& c : chains) {
    const auto step = static_cast<std::size_t>(std::ceil(effective_sample_size(c).act));
    for (std::size_t t = 0; t < c.size(); t += step) out.push_back(c[t]);
  }
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw SampleError("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_statistic_lattice(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw SampleError("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  const auto lo = static_cast<long>(std::floor(samples.front())) - 1;
  const auto hi = static_cast<long>(std::ceil(samples.back())) + 1;
  double d = 0.0;
  std::size_t idx = 0;
  for (long k = lo; k <= hi; ++k) {
    while (idx < samples.size() && samples[idx] <= static_cast<double>(k) + 1e-9) ++idx;
    const double emp = static_cast<double>(idx) / n;
    d = std::max(d, std::abs(emp - cdf(static_cast<double>(k) + 0.5)));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double w1_to_normal(std::vector<double> samples, double mu, double sigma) {
  if (samples.empty()) throw SampleError("W1 of an empty sample");
  if (!(sigma > 0.0)) throw DomainError("W1 reference needs sigma > 0");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  // Work in standard units; W1 scales with sigma.
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = (samples[i] - mu) / sigma;
  double acc = cdf_integral(z.front());  // int_{-inf}^{z_1} Phi
  acc += normal_pdf(z.back()) - z.back() * (1.0 - normal_cdf(z.back()));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = z[i];
    const double b = z[i + 1];
    if (b <= a) continue;
    const double c = static_cast<double>(i + 1) / static_cast<double>(n);
    // |c - Phi| on [a, b]; Phi crosses c at most once.
    const double cross = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * c - 1.0);
    auto segment = [&](double l, double r) {
      const double area = (cdf_integral(r) - cdf_integral(l));
      return std::abs(c * (r - l) - area);
    };
    if (cross > a && cross < b) {
      acc += segment(a, cross) + segment(cross, b);
    } else {
      acc += segment(a, b);
    }
  }
  return sigma * acc;
}

double skewness(const std::vector<double>& values) {
  const double m = mean(values);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(values.size());
  m2 /= n;
  m3 /= n;
  if (!(m2 > 0.0)) throw SampleError("skewness of a constant sample");
  return m3 / std::pow(m2, 1.5);
}

double excess_kurtosis(const std::vector<double>& values) {
  const double m = mean(values);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(values.size());
  m2 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw SampleError("kurtosis of a constant sample");
  return m4 / (m2 * m2) - 3.0;
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) throw SampleError("Wilson interval with no trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& sigma) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n || (!sigma.empty() && sigma.size() != n)) {
    throw DomainError("linear_fit: need matching x, y (and sigma) with at least two points");
  }
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) throw DomainError("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = (sw * sxy - sx * sy) / det;
  f.intercept = (sxx * sy - sx * sxy) / det;
  if (!sigma.empty()) {
    f.slope_stderr = std::sqrt(sw / det);
  } else if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    f.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) * sw / det);
  }
  return f;
}

}  // namespace riesz
