#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "riesz/configuration.hpp"
#include "riesz/kernel.hpp"
#include "riesz/rng.hpp"
#include "riesz/test_function.hpp"

namespace riesz {

/// A scalar function of a configuration recorded along a chain. Randomised
/// observables (random labels) draw from the chain's observation generator.
class Observable {
 public:
  explicit Observable(std::string name) : name_(std::move(name)) {}
  virtual ~Observable() = default;
  const std::string& name() const { return name_; }
  virtual double evaluate(const Configuration& config, Xoshiro256& rng) const = 0;

 private:
  std::string name_;
};

/// Named test functions available to fluct:/A:/B: observables.
struct ObservableContext {
  std::map<std::string, TestFunction> test_functions;
  std::size_t grid_size = 8192;
};

/// Recognised names:
///   gap:k          N (x_{i+k} - x_i) at a uniformly random label i
///   gapsq:k        mean over i of (gap(i, k) - k)^2
///   count:l        number of points in (-l, l)
///   countsq:l      mean over the N centres j / N of (count - 2 N l)^2
///   fluct:cos[:m]  Fluct of cos(2 pi m x); fluct:<name> for a named test function
///   A[:<name>], B[:<name>]  loop terms for the transport of cos(2 pi x) or of <name>
///   bl:k           grad F . (beta Hess H)^{-1} grad F for F = gap(i, k), random i
///   energy         H_N
/// Unknown names throw ConfigError.
class ObservableSet {
 public:
  ObservableSet() = default;
  ObservableSet(const KernelModel& model, const std::vector<std::string>& names,
                const ObservableContext& context = {});

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return items_.size(); }
  /// Values in the order of names(); draws happen in that order too.
  std::vector<double> evaluate(const Configuration& config, Xoshiro256& rng) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::shared_ptr<const Observable>> items_;
};

/// Checks a single observable name without building it.
bool is_valid_observable_name(const std::string& name,
                              const std::map<std::string, TestFunction>& test_functions = {});

}  // namespace riesz
