#include "riesz/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <thread>

#include "riesz/errors.hpp"
#include "riesz/gibbs_model.hpp"
#include "riesz/observables.hpp"

namespace riesz {

std::string to_string(Scheme scheme) { return scheme == Scheme::rwm ? "rwm" : "mala"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "rwm") return Scheme::rwm;
  if (name == "mala") return Scheme::mala;
  throw DomainError("unknown sampler scheme '" + name + "' (expected rwm or mala)");
}

double SamplerConfig::effective_target() const {
  if (target_accept > 0.0) return target_accept;
  return scheme == Scheme::rwm ? 0.4 : 0.57;
}

std::size_t SamplerConfig::effective_adapt() const {
  return adapt_sweeps == 0 ? burn_in : std::min(adapt_sweeps, burn_in);
}

void SamplerConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("sampler step must be positive");
  if (thin < 1) throw DomainError("sampler thin must be >= 1");
  if (sweeps > 0 && burn_in >= sweeps) throw DomainError("sampler burn_in must be < sweeps");
  const double t = effective_target();
  if (!(t > 0.0 && t < 1.0)) throw DomainError("target acceptance must lie in (0, 1)");
  if (chains < 1) throw DomainError("at least one chain is required");
  if (!(init_jitter >= 0.0 && init_jitter < 0.5)) throw DomainError("init_jitter must lie in [0, 1/2)");
  if (collective_modes > 64) throw DomainError("collective_modes must be at most 64");
}

namespace {

double min_distance_ok(double d) { return std::abs(centered(d)) >= KernelModel::kSingularRadius; }

void shuffle(std::vector<std::size_t>& order, Xoshiro256& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

double metropolis_sweep(Configuration& config, const KernelModel& model, double step,
                        Xoshiro256& rng) {
  const std::size_t n = config.size();
  std::vector<double> x = config.positions();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  const double beta = model.params().beta;
  const double pref = 2.0 * std::pow(static_cast<double>(n), -model.s());
  const double width = step / static_cast<double>(n);
  std::size_t accepted = 0;
  for (std::size_t i : order) {
    const double proposal = wrap_unit(x[i] + width * (2.0 * rng.uniform() - 1.0));
    const double u = rng.uniform();
    double dh = 0.0;
    bool collide = false;
    for (std::size_t j = 0; j < n && !collide; ++j) {
      if (j == i) continue;
      if (!min_distance_ok(proposal - x[j])) {
        collide = true;
        break;
      }
      dh += model.g_or_inf(proposal - x[j]) - model.g_or_inf(x[i] - x[j]);
    }
    const double bdh = collide ? std::numeric_limits<double>::infinity() : beta * pref * dh;
    if (metropolis_accept(bdh, u)) {
      x[i] = proposal;
      ++accepted;
    }
  }
  config = Configuration(std::move(x));
  return static_cast<double>(accepted) / static_cast<double>(n);
}

double mala_sweep(Configuration& config, const KernelModel& model, double step, Xoshiro256& rng) {
  const std::size_t n = config.size();
  const double beta = model.params().beta;
  const double h = step / static_cast<double>(n);  // sqrt(2 tau)
  const double tau = 0.5 * h * h;
  const Eigen::VectorXd grad = gradient(config, model);
  const double e0 = energy(config, model);
  std::vector<double> inc(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    inc[i] = -tau * beta * grad[static_cast<Eigen::Index>(i)] + h * rng.normal();
    y[i] = config[i] + inc[i];
  }
  const double u = rng.uniform();
  // Collision check on the proposal.
  std::vector<double> ys(y.size());
  for (std::size_t i = 0; i < n; ++i) ys[i] = wrap_unit(y[i]);
  std::vector<double> sorted = ys;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (i + 1 < n) ? sorted[i + 1] - sorted[i] : sorted[0] + 1.0 - sorted[i];
    if (d < KernelModel::kSingularRadius) return 0.0;
  }
  Configuration proposal(ys);
  const double e1 = energy(proposal, model);
  // Gradient at the proposal, in the proposal's unsorted labelling.
  Eigen::VectorXd grad1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  const double pref = 2.0 * std::pow(static_cast<double>(n), -model.s());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = model.g1(ys[i] - ys[j]);
      grad1[static_cast<Eigen::Index>(i)] += pref * d;
      grad1[static_cast<Eigen::Index>(j)] -= pref * d;
    }
  }
  double fwd = 0.0;
  double bwd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double a = inc[i] + tau * beta * grad[k];
    const double b = -inc[i] + tau * beta * grad1[k];
    fwd += a * a;
    bwd += b * b;
  }
  const double log_ratio = -beta * (e1 - e0) - (bwd - fwd) / (4.0 * tau);
  if (log_ratio >= 0.0 || u < std::exp(log_ratio)) {
    config = std::move(proposal);
    return 1.0;
  }
  return 0.0;
}

Chain::Chain(const KernelModel& model, Configuration init, std::uint64_t seed)
    : model_(&model), config_(std::move(init)), x_(config_.positions()), rng_(seed) {
  const std::size_t n = x_.size();
  cache_.assign(n * n, 0.0);
  rowsum_.assign(n, 0.0);
  scratch_.assign(n, 0.0);
  order_.resize(n);
  rebuild_cache();
}

void Chain::rebuild_cache() {
  const std::size_t n = x_.size();
  std::fill(rowsum_.begin(), rowsum_.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cache_[i * n + i] = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = model_->g(x_[i] - x_[j]);
      cache_[i * n + j] = v;
      cache_[j * n + i] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += cache_[i * n + j];
    rowsum_[i] = acc;
  }
}

double Chain::energy() const {
  double acc = 0.0;
  for (double r : rowsum_) acc += r;
  return std::pow(static_cast<double>(x_.size()), -model_->s()) * acc;
}

double Chain::sweep(Scheme scheme, double step) {
  const double rate = scheme == Scheme::rwm ? rwm_sweep(step) : mala_step(step);
  return rate;
}

double Chain::rwm_sweep(double step) {
  const std::size_t n = x_.size();
  std::iota(order_.begin(), order_.end(), 0);
  shuffle(order_, rng_);
  const double beta = model_->params().beta;
  const double pref = 2.0 * std::pow(static_cast<double>(n), -model_->s());
  const double width = step / static_cast<double>(n);
  std::size_t accepted = 0;
  for (std::size_t i : order_) {
    const double proposal = wrap_unit(x_[i] + width * (2.0 * rng_.uniform() - 1.0));
    const double u = rng_.uniform();
    const double sum = model_->row(proposal, x_.data(), n, i, scratch_.data());
    bool collide = false;
    if (!std::isfinite(sum)) collide = true;
    const double bdh =
        collide ? std::numeric_limits<double>::infinity() : beta * pref * (sum - rowsum_[i]);
    if (metropolis_accept(bdh, u)) {
      double* row = &cache_[i * n];
      for (std::size_t j = 0; j < n; ++j) {
        const double delta = scratch_[j] - row[j];
        rowsum_[j] += delta;
        row[j] = scratch_[j];
        cache_[j * n + i] = scratch_[j];
      }
      rowsum_[i] = sum;
      x_[i] = proposal;
      ++accepted;
    }
  }
  sort_and_permute();
  return static_cast<double>(accepted) / static_cast<double>(n);
}

double Chain::collective_move(int m, double tau) {
  const std::size_t n = x_.size();
  const double two_pi_m = 2.0 * std::numbers::pi * static_cast<double>(m);
  const double phi = 2.0 * std::numbers::pi * rng_.uniform();
  const double t = tau * (2.0 * rng_.uniform() - 1.0);
  const double u = rng_.uniform();
  const double ch = std::cosh(t);
  const double sh = std::sinh(t);
  std::vector<double> y(n);
  double log_jac = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = two_pi_m * x_[i] + phi;
    const double c0 = std::cos(th);
    const double s0 = std::sin(th);
    const double den = ch - c0 * sh;
    const double s1 = s0 / den;
    const double c1 = (c0 * ch - sh) / den;
    // The flow never crosses the fixed points, so the angle moves by less than pi.
    const double dth = std::atan2(s1 * c0 - c1 * s0, c1 * c0 + s1 * s0);
    y[i] = wrap_unit(x_[i] + dth / two_pi_m);
    log_jac -= std::log(den);
  }
  spare_.resize(n * n);
  double upper = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double* row = &spare_[i * n];
    row[i] = 0.0;
    upper += model_->row(y[i], y.data() + i + 1, n - i - 1, n, row + i + 1);
  }
  if (!std::isfinite(upper)) return 0.0;
  double old_total = 0.0;
  for (double r : rowsum_) old_total += r;
  const double dh = std::pow(static_cast<double>(n), -model_->s()) * (2.0 * upper - old_total);
  const double log_ratio = -model_->params().beta * dh + log_jac;
  if (!(log_ratio >= 0.0 || u < std::exp(log_ratio))) return 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) spare_[j * n + i] = spare_[i * n + j];
  }
  cache_.swap(spare_);
  x_.swap(y);
  sort_and_permute();
  return 1.0;
}

void Chain::rotate(double c) {
  for (double& v : x_) v = wrap_unit(v + c);
  sort_and_permute();
}

double Chain::mala_step(double step) {
  Configuration c = config_;
  const double a = mala_sweep(c, *model_, step, rng_);
  if (a > 0.0) {
    config_ = std::move(c);
    x_ = config_.positions();
    rebuild_cache();
  }
  return a;
}

void Chain::sort_and_permute() {
  const std::size_t n = x_.size();
  std::iota(order_.begin(), order_.end(), 0);
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return x_[a] < x_[b]; });
  bool identity = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (order_[i] != i) {
      identity = false;
      break;
    }
  }
  if (!identity) {
    std::vector<double> x(n);
    std::vector<double> r(n);
    std::vector<double> c(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = x_[order_[i]];
      r[i] = rowsum_[order_[i]];
      const double* src = &cache_[order_[i] * n];
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] = src[order_[j]];
    }
    x_.swap(x);
    rowsum_.swap(r);
    cache_.swap(c);
  }
  // Refresh the incrementally updated row sums to stop rounding drift.
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* row = &cache_[i * n];
    for (std::size_t j = 0; j < n; ++j) acc += row[j];
    rowsum_[i] = acc;
  }
  config_ = Configuration(x_);
}

Configuration initial_configuration(std::size_t n, double jitter, Xoshiro256& rng) {
  const double dn = static_cast<double>(n);
  const double offset = rng.uniform();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = offset + (static_cast<double>(i) + jitter * (2.0 * rng.uniform() - 1.0)) / dn;
  }
  return Configuration(std::move(x));
}

std::vector<std::vector<double>> RunResult::series(const std::string& name) const {
  std::vector<std::vector<double>> out;
  for (const auto& c : chains) {
    auto it = c.series.find(name);
    if (it == c.series.end()) throw ConfigError("observable '" + name + "' was not recorded");
    out.push_back(it->second);
  }
  return out;
}

namespace {

[[noreturn]] void rethrow_with_context(const std::exception& e, std::size_t chain, std::size_t sweep) {
  const std::string msg =
      "chain " + std::to_string(chain) + ", sweep " + std::to_string(sweep) + ": " + e.what();
  if (dynamic_cast<const SingularityError*>(&e)) throw SingularityError(msg);
  if (dynamic_cast<const NumericalError*>(&e)) throw NumericalError(msg);
  if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(msg);
  throw Error(msg);
}

ChainRecord run_one(const KernelModel& model, const SamplerConfig& sc,
                    const ObservableSet& observables, std::size_t c) {
  const auto t0 = std::chrono::steady_clock::now();
  ChainRecord rec;
  rec.seed = chain_seed(sc.seed, c);
  Xoshiro256 init_rng(rec.seed);
  Xoshiro256 obs_rng(splitmix64(rec.seed ^ 0x6F62736572766521ULL));
  Configuration init = initial_configuration(model.params().n, sc.init_jitter, init_rng);
  Chain chain(model, std::move(init), splitmix64(rec.seed));
  for (const auto& name : observables.names()) rec.series[name];

  auto record = [&](std::size_t sweep) {
    std::vector<double> v;
    try {
      v = observables.evaluate(chain.configuration(), obs_rng);
    } catch (const std::exception& e) {
      rethrow_with_context(e, c, sweep);
    }
    rec.sweeps.push_back(sweep);
    for (std::size_t k = 0; k < v.size(); ++k) rec.series[observables.names()[k]].push_back(v[k]);
  };

  if (sc.sweeps == 0) {
    record(0);
    rec.final_step = sc.step;
    return rec;
  }
  double log_step = std::log(sc.step);
  const double target = sc.effective_target();
  const std::size_t adapt = sc.effective_adapt();
  double acc_sum = 0.0;
  std::size_t acc_count = 0;
  double window_sum = 0.0;
  std::size_t window_count = 0;
  const std::size_t modes = sc.collective_modes;
  std::vector<double> log_tau(modes, std::log(0.5));
  std::vector<std::size_t> tau_updates(modes, 0);
  double coll_sum = 0.0;
  std::size_t coll_count = 0;
  for (std::size_t t = 1; t <= sc.sweeps; ++t) {
    double rate = 0.0;
    try {
      rate = chain.sweep(sc.scheme, std::exp(log_step));
      if (modes > 0) {
        chain.rotate(chain.rng().uniform());
        const std::size_t k = (t - 1) % modes;
        const double a = chain.collective_move(static_cast<int>(k + 1), std::exp(log_tau[k]));
        if (t <= adapt) {
          ++tau_updates[k];
          log_tau[k] += (a - 0.5) / std::pow(static_cast<double>(tau_updates[k]) + 10.0, 0.6);
          log_tau[k] = std::clamp(log_tau[k], std::log(1e-6), std::log(4.0));
        } else if (t > sc.burn_in) {
          coll_sum += a;
          ++coll_count;
        }
      }
    } catch (const std::exception& e) {
      rethrow_with_context(e, c, t);
    }
    if (t <= adapt) {
      log_step += (rate - target) / std::pow(static_cast<double>(t) + 10.0, 0.6);
      log_step = std::clamp(log_step, std::log(1e-4), std::log(0.5 * static_cast<double>(model.params().n)));
      if (t + 100 > adapt) {
        window_sum += rate;
        ++window_count;
      }
      if (t == adapt && sc.scheme == Scheme::mala && window_count > 0 &&
          window_sum / static_cast<double>(window_count) < 0.01) {
        throw ConvergenceError("chain " + std::to_string(c) +
                               ": MALA acceptance below 1% at the end of adaptation");
      }
    }
    if (t > sc.burn_in) {
      acc_sum += rate;
      ++acc_count;
      if ((t - sc.burn_in) % sc.thin == 0) record(t);
    }
  }
  rec.final_step = std::exp(log_step);
  rec.accept_rate = acc_count ? acc_sum / static_cast<double>(acc_count) : 0.0;
  for (double lt : log_tau) rec.collective_tau.push_back(std::exp(lt));
  rec.collective_accept = coll_count ? coll_sum / static_cast<double>(coll_count) : 0.0;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

RunResult run_chains(const KernelModel& model, const SamplerConfig& sconfig,
                     const ObservableSet& observables, std::size_t threads) {
  sconfig.validate();
  RunResult result;
  result.observables = observables.names();
  result.chains.resize(sconfig.chains);
  threads = std::max<std::size_t>(1, std::min(threads, sconfig.chains));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(sconfig.chains);
  auto worker = [&]() {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= sconfig.chains) return;
      try {
        result.chains[c] = run_one(model, sconfig, observables, c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

}  // namespace riesz
