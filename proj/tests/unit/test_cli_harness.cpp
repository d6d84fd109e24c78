#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "riesz/errors.hpp"
#include "riesz/experiment.hpp"
#include "riesz/experiment_spec.hpp"

using namespace riesz;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rieszlab-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmallRun = R"(
[model]
s = 0.5
beta = 2
n = 8

[sampler]
sweeps = 400
burn_in = 100
thin = 2
chains = 2
seed = 17

[[observable]]
name = gap:1
[[observable]]
name = count:0.125
[[observable]]
name = fluct:cos
)";

}  // namespace

TEST_SUITE("cli_harness") {
  TEST_CASE("minimal config takes defaults") {
    const ExperimentSpec spec = parse_config_text("[model]\ns = 0.3\nbeta = 1.5\nn = 64\n");
    CHECK(spec.model.s == 0.3);
    CHECK(spec.model.beta == 1.5);
    CHECK(spec.model.n == 64);
    CHECK(spec.sampler == SamplerConfig{});
    CHECK(spec.observables == default_observables());
    CHECK(spec.output_dir == "rieszlab-out");
    CHECK(spec.grid_size == 8192);
    CHECK_FALSE(spec.suite.has_value());
  }

  TEST_CASE("invalid values and malformed input") {
    CHECK_THROWS_AS(parse_config_text("[model]\ns = 1.5\nbeta = 1\nn = 8\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[model]\ns = 0.5\nbeta = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[sampler]\nsweeps = 10\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[model]\ns = 0.5\nbeta = 1\nn = 8\n[[observable]]\nname = bogus\n"),
                    ConfigError);
    try {
      parse_config_text("[model]\ns = 0.5\nbeta = 1\nn = 8\n\n[sampler]\n  stepp = 2\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 7);
      CHECK(e.column() == 3);
      CHECK(std::string(e.what()).find("stepp") != std::string::npos);
    }
    try {
      parse_config_text("[model]\ns = 0.5\nbeta = 1\nn = abc\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 4);
      CHECK(e.column() == 5);
    }
    try {
      parse_config_text("[model]\ns = 0.5\ns = 0.6\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config_text("[modle]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[[model]]\ns = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("s = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("/nonexistent/dir/x.cfg"), ConfigError);
    CHECK_THROWS_AS(parse_suite("medium"), ConfigError);
  }

  TEST_CASE("emit and parse round trip") {
    const std::string text = R"(# comment line
[model]
s = 0.35
beta = 2.5   # trailing comment
n = 128

[sampler]
scheme = mala
step = 0.3
seed = 99
collective_modes = 0

[[test_function]]
name = window
kind = indicator
a = 0.2
scale = 0.5

[[test_function]]
name = spike
kind = power
alpha = 0.1

[[observable]]
name = fluct:window
[[observable]]
name = A:spike

[output]
dir = "out dir # not a comment"

[run]
suite = quick
)";
    const ExperimentSpec spec = parse_config_text(text);
    CHECK(spec.sampler.scheme == Scheme::mala);
    CHECK(spec.output_dir == "out dir # not a comment");
    CHECK(spec.test_functions.at("window") == TestFunction::indicator(0.2, 0.5));
    CHECK(spec.suite == Suite::quick);
    const ExperimentSpec again = parse_config_text(emit_config(spec));
    CHECK(again == spec);
    CHECK(emit_config(again) == emit_config(spec));
  }

  TEST_CASE("series CSV round trip") {
    const ExperimentSpec spec = parse_config_text(kSmallRun);
    const KernelModel model = KernelModel::build(spec.model, spec.kernel_resolution);
    const ObservableSet obs(model, spec.observables, spec.context());
    SamplerConfig sc = spec.sampler;
    const RunResult r = run_chains(model, sc, obs, 1);
    const fs::path dir = scratch_dir("csv");
    fs::create_directories(dir);
    const fs::path file = dir / series_file_name("fluct:cos");
    CHECK(file.filename() == "fluct_cos.csv");
    write_series_csv(file.string(), r, "fluct:cos");
    CHECK(slurp(file).rfind("chain,sweep,value\n", 0) == 0);
    CHECK(read_series_csv(file.string()) == r.series("fluct:cos"));
    fs::remove_all(dir);
  }

  TEST_CASE("artifact directory is complete and deterministic") {
    const ExperimentSpec spec = parse_config_text(kSmallRun);
    const fs::path a = scratch_dir("run-a");
    const fs::path b = scratch_dir("run-b");
    const Report ra = run_experiment(spec, a.string(), 1);
    run_experiment(spec, b.string(), 2);
    for (const char* f : {"spec.cfg", "metadata.json", "report.json", "series/gap_1.csv", "series/count_0.125.csv",
                          "series/fluct_cos.csv"}) {
      CHECK(fs::exists(a / f));
    }
    CHECK(slurp(a / "series/fluct_cos.csv") == slurp(b / "series/fluct_cos.csv"));
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(parse_config(a.string() + "/spec.cfg") == spec);
    const auto j = nlohmann::json::parse(slurp(a / "report.json"));
    CHECK(j.at("schema_version") == kReportSchemaVersion);
    CHECK(j.at("claims").size() == ra.claims.size());
    // Re-analysis reads the artifacts back and reproduces the report.
    const Report re = analyze_run(a.string());
    CHECK(re.to_json() == ra.to_json());
    CHECK_THROWS_AS(run_experiment(spec, "/nonexistent-parent/x", 1), ConfigError);
    CHECK_THROWS_AS(analyze_run(scratch_dir("missing").string()), ConfigError);
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("analysis turns estimator failures into failing claims") {
    ExperimentSpec spec = parse_config_text(kSmallRun);
    SeriesMap series;
    series["gap:1"] = ChainSeries{std::vector<double>(50, 1.0), std::vector<double>(50, 1.0)};
    series["count:0.125"] = ChainSeries{{2.0, 2.0, 3.0}};
    series["fluct:cos"] = ChainSeries{{0.1, -0.2, 0.05}};
    const Report r = analyze(spec, series);
    CHECK_FALSE(r.claims.empty());
    CHECK_FALSE(r.all_pass());
    bool gap_exact = false;
    for (const Claim& c : r.claims) {
      if (c.id == "gap_mean:1") gap_exact = c.pass && c.empirical == 1.0;
    }
    CHECK(gap_exact);
  }
}
