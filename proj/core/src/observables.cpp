#include "riesz/observables.hpp"

#include <cmath>
#include <optional>

#include "riesz/errors.hpp"
#include "riesz/gibbs_model.hpp"
#include "riesz/linear_algebra.hpp"
#include "riesz/transforms.hpp"

namespace riesz {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<long> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const long v = std::stol(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<double> parse_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

class GapObservable : public Observable {
 public:
  GapObservable(std::string name, std::size_t k) : Observable(std::move(name)), k_(k) {}
  double evaluate(const Configuration& c, Xoshiro256& rng) const override {
    return c.gap(static_cast<std::size_t>(rng.below(c.size())), k_);
  }

 private:
  std::size_t k_;
};

class GapSquareObservable : public Observable {
 public:
  GapSquareObservable(std::string name, std::size_t k) : Observable(std::move(name)), k_(k) {}
  double evaluate(const Configuration& c, Xoshiro256&) const override {
    const double k = static_cast<double>(k_);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double d = c.gap(i, k_) - k;
      acc += d * d;
    }
    return acc / static_cast<double>(c.size());
  }

 private:
  std::size_t k_;
};

class CountObservable : public Observable {
 public:
  CountObservable(std::string name, double ell) : Observable(std::move(name)), ell_(ell) {}
  double evaluate(const Configuration& c, Xoshiro256&) const override {
    return static_cast<double>(c.count(0.0, ell_));
  }

 private:
  double ell_;
};

class CountSquareObservable : public Observable {
 public:
  CountSquareObservable(std::string name, double ell) : Observable(std::move(name)), ell_(ell) {}
  double evaluate(const Configuration& c, Xoshiro256&) const override {
    // Sliding window over the centres j / N with two pointers on the doubled sequence.
    const std::size_t n = c.size();
    const double dn = static_cast<double>(n);
    const double expected = 2.0 * dn * ell_;
    std::vector<double> x(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = c[i] - 1.0;
      x[i + n] = c[i];
      x[i + 2 * n] = c[i] + 1.0;
    }
    std::size_t lo = 0;
    std::size_t hi = 0;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double centre = static_cast<double>(j) / dn;
      while (lo < x.size() && !(x[lo] > centre - ell_)) ++lo;
      if (hi < lo) hi = lo;
      while (hi < x.size() && x[hi] < centre + ell_) ++hi;
      const double d = static_cast<double>(hi - lo) - expected;
      acc += d * d;
    }
    return acc / dn;
  }

 private:
  double ell_;
};

class FluctObservable : public Observable {
 public:
  FluctObservable(std::string name, TestFunction xi) : Observable(std::move(name)), xi_(std::move(xi)) {}
  double evaluate(const Configuration& c, Xoshiro256&) const override { return fluct(c, xi_); }

 private:
  TestFunction xi_;
};

class LoopObservable : public Observable {
 public:
  LoopObservable(std::string name, const KernelModel& model, LoopPair pair, bool is_b)
      : Observable(std::move(name)), model_(&model), pair_(std::move(pair)), is_b_(is_b) {}
  double evaluate(const Configuration& c, Xoshiro256&) const override {
    if (is_b_) return loop_term_B(c, pair_, *model_);
    return loop_term_A(c, pair_, *model_, false).a_value;
  }

 private:
  const KernelModel* model_;
  LoopPair pair_;
  bool is_b_;
};

class BrascampLiebObservable : public Observable {
 public:
  BrascampLiebObservable(std::string name, const KernelModel& model, std::size_t k)
      : Observable(std::move(name)), model_(&model), k_(k) {}
  double evaluate(const Configuration& c, Xoshiro256& rng) const override {
    const std::size_t n = c.size();
    const auto i = static_cast<std::size_t>(rng.below(n));
    Eigen::VectorXd grad_f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const double dn = static_cast<double>(n);
    grad_f[static_cast<Eigen::Index>((i + k_) % n)] += dn;
    grad_f[static_cast<Eigen::Index>(i)] -= dn;
    const Eigen::MatrixXd h = model_->params().beta * hessian(c, *model_);
    const auto sol = projected_cg(h, grad_f, 1e-8);
    return grad_f.dot(sol.x);
  }

 private:
  const KernelModel* model_;
  std::size_t k_;
};

class EnergyObservable : public Observable {
 public:
  EnergyObservable(std::string name, const KernelModel& model)
      : Observable(std::move(name)), model_(&model) {}
  double evaluate(const Configuration& c, Xoshiro256&) const override { return energy(c, *model_); }

 private:
  const KernelModel* model_;
};

struct Parsed {
  enum Kind { gap, gapsq, count, countsq, fluct, loop_a, loop_b, bl, energy } kind;
  long k = 0;
  double ell = 0.0;
  std::optional<TestFunction> xi;
};

std::optional<TestFunction> resolve_function(const std::vector<std::string>& parts,
                                             std::size_t from,
                                             const std::map<std::string, TestFunction>& named) {
  if (parts.size() == from) return TestFunction::cosine(1);
  if (parts[from] == "cos") {
    if (parts.size() == from + 1) return TestFunction::cosine(1);
    if (parts.size() == from + 2) {
      auto m = parse_int(parts[from + 1]);
      if (m && *m >= 1) return TestFunction::cosine(static_cast<int>(*m));
    }
    return std::nullopt;
  }
  if (parts.size() == from + 1) {
    auto it = named.find(parts[from]);
    if (it != named.end()) return it->second;
  }
  return std::nullopt;
}

std::optional<Parsed> parse_name(const std::string& name,
                                 const std::map<std::string, TestFunction>& named) {
  const auto parts = split(name, ':');
  const std::string& head = parts[0];
  Parsed p{};
  if (head == "energy" && parts.size() == 1) {
    p.kind = Parsed::energy;
    return p;
  }
  if ((head == "gap" || head == "gapsq" || head == "bl") && parts.size() == 2) {
    auto k = parse_int(parts[1]);
    if (!k || *k < 1) return std::nullopt;
    p.kind = head == "gap" ? Parsed::gap : (head == "gapsq" ? Parsed::gapsq : Parsed::bl);
    p.k = *k;
    return p;
  }
  if ((head == "count" || head == "countsq") && parts.size() == 2) {
    auto l = parse_real(parts[1]);
    if (!l || !(*l > 0.0 && *l <= 0.5)) return std::nullopt;
    p.kind = head == "count" ? Parsed::count : Parsed::countsq;
    p.ell = *l;
    return p;
  }
  if (head == "fluct" && parts.size() >= 2) {
    p.kind = Parsed::fluct;
    p.xi = resolve_function(parts, 1, named);
    if (!p.xi) return std::nullopt;
    return p;
  }
  if (head == "A" || head == "B") {
    p.kind = head == "A" ? Parsed::loop_a : Parsed::loop_b;
    p.xi = resolve_function(parts, 1, named);
    if (!p.xi) return std::nullopt;
    return p;
  }
  return std::nullopt;
}

}  // namespace

bool is_valid_observable_name(const std::string& name,
                              const std::map<std::string, TestFunction>& test_functions) {
  return parse_name(name, test_functions).has_value();
}

ObservableSet::ObservableSet(const KernelModel& model, const std::vector<std::string>& names,
                             const ObservableContext& context)
    : names_(names) {
  std::optional<Multiplier> mu;
  const std::size_t n = model.params().n;
  for (const auto& name : names) {
    auto parsed = parse_name(name, context.test_functions);
    if (!parsed) throw ConfigError("unknown observable '" + name + "'");
    if ((parsed->kind == Parsed::gap || parsed->kind == Parsed::gapsq || parsed->kind == Parsed::bl) &&
        static_cast<std::size_t>(2 * parsed->k) > n) {
      throw ConfigError("observable '" + name + "' needs k <= N/2");
    }
    std::shared_ptr<const Observable> item;
    switch (parsed->kind) {
      case Parsed::gap:
        item = std::make_shared<GapObservable>(name, static_cast<std::size_t>(parsed->k));
        break;
      case Parsed::gapsq:
        item = std::make_shared<GapSquareObservable>(name, static_cast<std::size_t>(parsed->k));
        break;
      case Parsed::count:
        item = std::make_shared<CountObservable>(name, parsed->ell);
        break;
      case Parsed::countsq:
        item = std::make_shared<CountSquareObservable>(name, parsed->ell);
        break;
      case Parsed::fluct:
        item = std::make_shared<FluctObservable>(name, *parsed->xi);
        break;
      case Parsed::loop_a:
      case Parsed::loop_b: {
        if (!mu) mu = calibrate_multiplier(model, context.grid_size);
        auto psi = build_transport(*parsed->xi, *mu, context.grid_size);
        item = std::make_shared<LoopObservable>(name, model, make_loop_pair(psi, *mu),
                                                parsed->kind == Parsed::loop_b);
        break;
      }
      case Parsed::bl:
        item = std::make_shared<BrascampLiebObservable>(name, model, static_cast<std::size_t>(parsed->k));
        break;
      case Parsed::energy:
        item = std::make_shared<EnergyObservable>(name, model);
        break;
    }
    items_.push_back(std::move(item));
  }
}

std::vector<double> ObservableSet::evaluate(const Configuration& config, Xoshiro256& rng) const {
  std::vector<double> out;
  out.reserve(items_.size());
  for (const auto& item : items_) out.push_back(item->evaluate(config, rng));
  return out;
}

}  // namespace riesz
