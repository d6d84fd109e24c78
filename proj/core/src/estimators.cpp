#include "riesz/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "riesz/errors.hpp"
#include "riesz/special_functions.hpp"
#include "riesz/transforms.hpp"

namespace riesz {

namespace {

std::size_t total_records(const ChainSeries& chains) {
  std::size_t n = 0;
  for (const auto& c : chains) n += c.size();
  return n;
}

bool is_constant(const ChainSeries& chains) {
  bool first = true;
  double v0 = 0.0;
  for (const auto& c : chains) {
    for (double v : c) {
      if (first) {
        v0 = v;
        first = false;
      } else if (v != v0) {
        return false;
      }
    }
  }
  return true;
}

double gated_ess(const ChainSeries& chains, double min_ess, const char* what) {
  const double ess = pooled_ess(chains);
  if (ess < min_ess) {
    throw SampleError(std::string(what) + ": effective sample size " + std::to_string(ess) +
                      " below " + std::to_string(min_ess));
  }
  return ess;
}

std::vector<double> squared_deviations(const ChainSeries& chains, double centre,
                                       ChainSeries& out) {
  std::vector<double> flat;
  out.clear();
  for (const auto& c : chains) {
    std::vector<double> sq(c.size());
    for (std::size_t t = 0; t < c.size(); ++t) {
      sq[t] = (c[t] - centre) * (c[t] - centre);
      flat.push_back(sq[t]);
    }
    out.push_back(std::move(sq));
  }
  return flat;
}

}  // namespace

VarianceEstimate mean_with_error(const ChainSeries& chains, double min_ess) {
  const std::size_t n = total_records(chains);
  if (n == 0) throw SampleError("mean of an empty series");
  VarianceEstimate e;
  if (is_constant(chains)) {
    e.value = chains.front().front();
    e.ess = static_cast<double>(n);
    return e;
  }
  e.ess = gated_ess(chains, min_ess, "mean");
  const Estimate b = batch_means_mean(chains);
  e.value = b.value;
  e.stderr_ = b.stderr_;
  return e;
}

VarianceEstimate variance_with_error(const ChainSeries& chains, double min_ess) {
  if (is_constant(chains)) throw SampleError("variance of a constant series");
  VarianceEstimate e;
  e.ess = gated_ess(chains, min_ess, "variance");
  const Estimate b = batch_means_variance(chains);
  e.value = b.value;
  e.stderr_ = b.stderr_;
  return e;
}

GapProfile gap_variance_profile(const std::map<long, ChainSeries>& gapsq, double min_ess) {
  GapProfile out;
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> sy;
  for (const auto& [k, chains] : gapsq) {
    const VarianceEstimate m = mean_with_error(chains, min_ess);
    out.rows.push_back({k, m.value, m.stderr_, m.ess});
    if (m.value > 0.0) {
      lx.push_back(std::log(static_cast<double>(k)));
      ly.push_back(std::log(m.value));
      sy.push_back(std::max(m.stderr_ / m.value, 1e-12));
    }
  }
  if (lx.size() < 2) {
    out.exponent = std::numeric_limits<double>::quiet_NaN();
    out.exponent_stderr = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const LinearFit fit = linear_fit(lx, ly, sy);
  out.exponent = fit.slope;
  out.exponent_stderr = fit.slope_stderr;
  return out;
}

std::vector<NumberVarianceRow> number_variance(const std::map<double, ChainSeries>& counts,
                                               std::size_t n, double s, double beta,
                                               double min_ess) {
  std::vector<NumberVarianceRow> out;
  const double ns = std::pow(static_cast<double>(n), s);
  const double stated = 1.0 / (std::tan(0.5 * std::numbers::pi * s) * beta * 0.5 * std::numbers::pi * s);
  for (const auto& [ell, chains] : counts) {
    NumberVarianceRow row;
    row.ell = ell;
    row.stated_sigma2 = stated;
    if (ell < 0.5) {
      row.normalizer = ns * hurwitz_zeta(-s, 2.0 * ell);
      row.predicted = ns * (psi_closed_indicator(ell, s, -ell) - psi_closed_indicator(ell, s, ell)) / beta;
    }
    if (is_constant(chains)) {
      row.ess = static_cast<double>(total_records(chains));
    } else {
      const VarianceEstimate v = variance_with_error(chains, min_ess);
      row.variance = v.value;
      row.stderr_ = v.stderr_;
      row.ess = v.ess;
    }
    if (row.normalizer > 0.0) {
      row.ratio = row.variance / row.normalizer;
      row.ratio_stderr = row.stderr_ / row.normalizer;
    }
    out.push_back(row);
  }
  return out;
}

CLTReport clt_test(const ChainSeries& chains, double center, double scale, double sigma2,
                   bool lattice) {
  if (!(sigma2 > 0.0) || !(scale > 0.0)) throw DomainError("CLT test needs sigma2 > 0 and scale > 0");
  if (is_constant(chains)) throw SampleError("CLT test on a degenerate (constant) series");
  const std::vector<double> raw = thin_to_independent(chains);
  if (raw.size() < 200) {
    throw SampleError("CLT test needs >= 200 effectively independent samples, got " +
                      std::to_string(raw.size()));
  }
  CLTReport r;
  r.n_effective = static_cast<double>(raw.size());
  const double sd = std::sqrt(sigma2);
  std::vector<double> z(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) z[i] = (raw[i] - center) / scale;
  if (lattice) {
    r.ks_stat = ks_statistic_lattice(raw, [&](double y) { return normal_cdf((y - center) / (scale * sd)); });
  } else {
    r.ks_stat = ks_statistic(z, [&](double y) { return normal_cdf(y / sd); });
  }
  r.ks_pvalue = ks_pvalue(r.ks_stat, raw.size());
  r.w1_to_gaussian = w1_to_normal(z, 0.0, sd);
  r.skewness = skewness(z);
  r.excess_kurtosis = excess_kurtosis(z);
  ChainSeries sq;
  squared_deviations(chains, center, sq);
  const Estimate m = batch_means_mean(sq);
  const double norm = scale * scale * sigma2;
  r.variance_ratio = m.value / norm;
  r.variance_ratio_stderr = m.stderr_ / norm;
  return r;
}

double test_function_square_mean(const TestFunction& xi) {
  switch (xi.kind()) {
    case TestFunctionKind::indicator:
      return 2.0 * xi.parameter() * xi.scale();
    case TestFunctionKind::cosine:
      return 0.5;
    case TestFunctionKind::grid: {
      double acc = 0.0;
      for (double v : xi.grid_values()) acc += v * v;
      return acc / static_cast<double>(xi.grid_values().size());
    }
    case TestFunctionKind::power: {
      if (xi.parameter() >= 0.5) return std::numeric_limits<double>::infinity();
      boost::math::quadrature::tanh_sinh<double> integrator;
      const double half = integrator.integrate(
          [&](double x) {
            if (x < 1e-300) return 0.0;
            const double v = xi(x);
            return v * v;
          },
          0.0, 0.5);
      return 2.0 * half;
    }
  }
  return 0.0;
}

InequalityCheck sub_poisson_check(const ChainSeries& fluct, const TestFunction& xi, std::size_t n,
                                  double min_ess) {
  InequalityCheck c;
  const double m = xi.mean();
  c.bound = static_cast<double>(n) * (test_function_square_mean(xi) - m * m);
  if (!is_constant(fluct)) {
    const VarianceEstimate v = variance_with_error(fluct, min_ess);
    c.empirical = v.value;
    c.empirical_stderr = v.stderr_;
  }
  c.margin = c.bound + 3.0 * c.empirical_stderr - c.empirical;
  c.holds = c.margin >= 0.0;
  return c;
}

InequalityCheck brascamp_lieb_check(const ChainSeries& gap, const ChainSeries& bl, double min_ess) {
  InequalityCheck c;
  const VarianceEstimate v = variance_with_error(gap, min_ess);
  const VarianceEstimate b = mean_with_error(bl, min_ess);
  c.empirical = v.value;
  c.empirical_stderr = v.stderr_;
  c.bound = b.value;
  c.bound_stderr = b.stderr_;
  c.margin = c.bound + 3.0 * std::hypot(c.empirical_stderr, c.bound_stderr) - c.empirical;
  c.holds = c.margin >= 0.0;
  return c;
}

namespace {

TailRow tail_row(const std::vector<double>& values, double parameter, double threshold,
                 const std::function<bool(double)>& hit) {
  TailRow row;
  row.parameter = parameter;
  row.threshold = threshold;
  row.samples = values.size();
  for (double v : values) row.hits += hit(v) ? 1 : 0;
  row.probability = row.samples ? static_cast<double>(row.hits) / static_cast<double>(row.samples) : 0.0;
  const auto [lo, hi] = wilson_interval(row.hits, row.samples);
  row.lower = lo;
  row.upper = hi;
  row.bound_only = row.hits < 10;
  return row;
}

}  // namespace

RigidityTails rigidity_tails(const ChainSeries& gap_k, long k, double s,
                             const std::vector<double>& eps, const ChainSeries& gap_1,
                             const std::vector<double>& deltas) {
  RigidityTails out;
  if (!gap_k.empty()) {
    const std::vector<double> values = is_constant(gap_k) ? gap_k.front() : thin_to_independent(gap_k);
    const double dk = static_cast<double>(k);
    for (double e : eps) {
      const double thr = std::pow(dk, 0.5 * s + e);
      out.gap_tail.push_back(tail_row(values, e, thr, [&](double v) { return std::abs(v - dk) > thr; }));
    }
  }
  if (!gap_1.empty()) {
    const std::vector<double> values = is_constant(gap_1) ? gap_1.front() : thin_to_independent(gap_1);
    for (double d : deltas) {
      out.collision_tail.push_back(tail_row(values, d, d, [&](double v) { return v < d; }));
    }
  }
  return out;
}

LoopStatistics loop_statistics(const std::map<std::size_t, ChainSeries>& a_by_n, double min_ess) {
  LoopStatistics out;
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> sy;
  for (const auto& [n, chains] : a_by_n) {
    LoopRow row;
    row.n = n;
    if (is_constant(chains)) {
      row.mean = chains.front().front();
      row.ess = static_cast<double>(total_records(chains));
    } else {
      const VarianceEstimate m = mean_with_error(chains, min_ess);
      const VarianceEstimate v = variance_with_error(chains, min_ess);
      row.mean = m.value;
      row.mean_stderr = m.stderr_;
      row.variance = v.value;
      row.variance_stderr = v.stderr_;
      row.ess = m.ess;
    }
    if (row.variance > 0.0) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(row.variance));
      sy.push_back(std::max(row.variance_stderr / row.variance, 1e-12));
    }
    out.rows.push_back(row);
  }
  if (lx.size() < 2) {
    out.exponent = std::numeric_limits<double>::quiet_NaN();
    out.exponent_stderr = std::numeric_limits<double>::quiet_NaN();
  } else {
    const LinearFit fit = linear_fit(lx, ly, sy);
    out.exponent = fit.slope;
    out.exponent_stderr = fit.slope_stderr;
  }
  return out;
}

}  // namespace riesz
