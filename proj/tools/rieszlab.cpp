// rieszlab: command-line front end to the circular Riesz gas library.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "riesz/acceptance.hpp"
#include "riesz/errors.hpp"
#include "riesz/experiment.hpp"
#include "riesz/kernel.hpp"
#include "riesz/transforms.hpp"

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2, kNumerical = 3 };

std::size_t default_threads() {
  if (const char* env = std::getenv("RGL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw riesz::ConfigError(std::string("RGL_THREADS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;

  std::size_t thread_count() const { return threads ? *threads : default_threads(); }
};

void add_common(CLI::App* cmd, Common& c, const std::string& out_help) {
  cmd->add_option("--seed", c.seed, "64-bit seed (overrides the config)");
  cmd->add_option("--threads", c.threads, "worker threads (default: $RGL_THREADS or 1)")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, out_help);
}

// Opens --out, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw riesz::ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rieszlab: circular Riesz gas laboratory"};
  app.set_version_flag("--version", std::string(RIESZ_VERSION));
  app.require_subcommand(1);

  // kernel
  Common kernel_opts;
  double kernel_s = 0.5;
  std::size_t kernel_points = 1000;
  std::size_t kernel_resolution = 4096;
  auto* kernel = app.add_subcommand("kernel", "tabulate g, g', g'' to CSV (x, g, g1, g2)");
  add_common(kernel, kernel_opts, "CSV path (default stdout)");
  kernel->add_option("--s", kernel_s, "kernel exponent in (0, 1)");
  kernel->add_option("--points", kernel_points, "points x_i = i / (points + 1)")->check(CLI::PositiveNumber);
  kernel->add_option("--resolution", kernel_resolution, "remainder table intervals (>= 1024)");

  // transform
  Common transform_opts;
  std::string transform_kind = "cosine";
  double transform_s = 0.5;
  double transform_beta = 1.0;
  double transform_a = 0.125;
  double transform_alpha = 0.2;
  int transform_m = 1;
  std::size_t transform_grid = 8192;
  std::size_t transform_points = 1000;
  auto* transform = app.add_subcommand("transform", "emit x, xi, psi, psi' for a test function as CSV");
  add_common(transform, transform_opts, "CSV path (default stdout)");
  transform->add_option("--kind", transform_kind, "indicator, power or cosine")
      ->check(CLI::IsMember({"indicator", "power", "cosine"}));
  transform->add_option("--s", transform_s, "kernel exponent in (0, 1)");
  transform->add_option("--beta", transform_beta, "inverse temperature; psi is divided by beta");
  transform->add_option("--a", transform_a, "indicator half-width");
  transform->add_option("--alpha", transform_alpha, "power exponent");
  transform->add_option("--m", transform_m, "cosine frequency");
  transform->add_option("--grid", transform_grid, "spectral grid size (power of two >= 1024)");
  transform->add_option("--points", transform_points, "points x_i = (i + 1/2) / points")->check(CLI::PositiveNumber);

  // sample
  Common sample_opts;
  std::string sample_config;
  auto* sample = app.add_subcommand("sample", "run the chains of a config and write an artifact directory");
  add_common(sample, sample_opts, "artifact directory (overrides [output] dir)");
  sample->add_option("config", sample_config, "experiment config file")->required();

  // analyze
  Common analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "recompute report.json and tables from an artifact directory");
  add_common(analyze, analyze_opts, "artifact directory to analyse");
  std::string analyze_dir;
  analyze->add_option("dir", analyze_dir, "artifact directory (alternative to --out)");

  // verify
  Common verify_opts;
  std::string verify_suite = "quick";
  std::vector<int> verify_only;
  std::string verify_data = RIESZ_DEFAULT_DATA_DIR;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite, one line per criterion");
  add_common(verify, verify_opts, "write every sampling run's artifacts below this directory");
  verify->add_option("--suite", verify_suite, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--only", verify_only, "criteria to run (1..9)")->check(CLI::Range(1, 9));
  verify->add_option("--data", verify_data, "directory with hurwitz_reference.csv");
  bool verify_quiet = false;
  verify->add_flag("--quiet", verify_quiet, "no progress lines on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (kernel->parsed()) {
      const riesz::KernelModel model = riesz::KernelModel::build({kernel_s, 1.0, 2}, kernel_resolution);
      Output out(kernel_opts.out);
      std::ostream& os = out.stream();
      os << "x,g,g1,g2\n";
      for (std::size_t i = 1; i <= kernel_points; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(kernel_points + 1);
        os << real(x) << ',' << real(model.g(x)) << ',' << real(model.g1(x)) << ',' << real(model.g2(x)) << '\n';
      }
      return kPass;
    }
    if (transform->parsed()) {
      if (!(transform_beta > 0.0)) throw riesz::ConfigError("--beta must be positive");
      riesz::TestFunction xi = riesz::TestFunction::cosine(1);
      if (transform_kind == "indicator") xi = riesz::TestFunction::indicator(transform_a);
      if (transform_kind == "power") xi = riesz::TestFunction::power(transform_alpha);
      if (transform_kind == "cosine") xi = riesz::TestFunction::cosine(transform_m);
      const riesz::KernelModel model = riesz::KernelModel::build({transform_s, transform_beta, 2});
      const riesz::Multiplier mu = riesz::calibrate_multiplier(model, transform_grid);
      const riesz::TransportMap psi = riesz::build_transport(xi, mu, transform_grid);
      Output out(transform_opts.out);
      std::ostream& os = out.stream();
      os << "x,xi,psi,psi1\n";
      for (std::size_t i = 0; i < transform_points; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(transform_points);
        double v = 0.0;
        double p0 = 0.0;
        double p1 = 0.0;
        try {
          v = xi(x);
        } catch (const riesz::SingularityError&) {
          v = std::numeric_limits<double>::quiet_NaN();
        }
        p0 = psi(x) / transform_beta;
        try {
          p1 = psi.derivative(x, 1) / transform_beta;
        } catch (const riesz::SingularityError&) {
          p1 = std::numeric_limits<double>::quiet_NaN();
        }
        os << real(x) << ',' << real(v) << ',' << real(p0) << ',' << real(p1) << '\n';
      }
      return kPass;
    }
    if (sample->parsed()) {
      riesz::ExperimentSpec spec = riesz::parse_config(sample_config);
      if (!sample_opts.out.empty()) spec.output_dir = sample_opts.out;
      if (sample_opts.seed) spec.sampler.seed = *sample_opts.seed;
      spec.validate();
      const riesz::Report report = riesz::run_experiment(spec, spec.output_dir, sample_opts.thread_count());
      for (const auto& c : report.claims) {
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.id << "  empirical " << c.empirical << "  predicted "
                  << c.predicted << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
      }
      std::cout << "artifacts in " << spec.output_dir << '\n';
      return report.all_pass() ? kPass : kCheckFailure;
    }
    if (analyze->parsed()) {
      const std::string dir = !analyze_opts.out.empty() ? analyze_opts.out : analyze_dir;
      if (dir.empty()) throw riesz::ConfigError("analyze needs a directory (--out DIR)");
      const riesz::Report report = riesz::analyze_run(dir);
      for (const auto& c : report.claims) {
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.id << "  empirical " << c.empirical << "  predicted "
                  << c.predicted << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
      }
      return report.all_pass() ? kPass : kCheckFailure;
    }
    if (verify->parsed()) {
      riesz::AcceptanceOptions opts;
      opts.suite = riesz::parse_suite(verify_suite);
      opts.threads = verify_opts.thread_count();
      if (verify_opts.seed) opts.seed = *verify_opts.seed;
      opts.data_dir = verify_data;
      opts.out_dir = verify_opts.out;
      opts.only = verify_only;
      if (!verify_quiet) opts.log = &std::cerr;
      const auto results = riesz::run_acceptance(opts);
      bool all = true;
      bool numerical = false;
      for (const auto& r : results) {
        std::cout << riesz::format_result(r) << '\n';
        all = all && r.pass;
        numerical = numerical || r.numerical_error;
      }
      if (numerical) return kNumerical;
      return all ? kPass : kCheckFailure;
    }
  } catch (const riesz::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const riesz::DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const riesz::IndexError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const riesz::SampleError& e) {
    std::cerr << "check failure: " << e.what() << '\n';
    return kCheckFailure;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
