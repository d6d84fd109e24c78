#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riesz/observables.hpp"
#include "riesz/sampler.hpp"
#include "riesz/special_functions.hpp"
#include "riesz/test_function.hpp"

namespace riesz {

enum class Suite { quick, full };

std::string to_string(Suite suite);
Suite parse_suite(const std::string& name);

/// Everything needed to reproduce a run. The text form is documented in
/// docs/formats.md.
struct ExperimentSpec {
  ModelParams model{0.5, 1.0, 2};
  std::map<std::string, TestFunction> test_functions;
  SamplerConfig sampler;
  std::vector<std::string> observables;
  std::string output_dir = "rieszlab-out";
  std::size_t grid_size = 8192;        ///< spectral grid for transports
  std::size_t kernel_resolution = 4096;
  std::optional<Suite> suite;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  ObservableContext context() const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Observables recorded when a config lists none.
std::vector<std::string> default_observables();

/// Parses the line-oriented format. Unknown sections or keys, malformed lines
/// and bad values throw ConfigError with line and column; the result is
/// validated.
ExperimentSpec parse_config_text(const std::string& text);
/// Reads and parses a file; ConfigError when it cannot be read.
ExperimentSpec parse_config(const std::string& path);

/// Canonical text form; parse_config_text(emit_config(spec)) == spec.
std::string emit_config(const ExperimentSpec& spec);

}  // namespace riesz
