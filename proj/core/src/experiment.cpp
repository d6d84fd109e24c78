#include "riesz/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "riesz/errors.hpp"
#include "riesz/observables.hpp"
#include "riesz/transforms.hpp"

#ifndef RIESZ_VERSION
#define RIESZ_VERSION "unknown"
#endif

namespace riesz {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_table(const fs::path& path, const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + real17(row[i]);
    out += "\n";
  }
  write_text(path, out);
}

struct Split {
  std::string head;
  std::string arg;
};

Split split_name(const std::string& name) {
  const auto pos = name.find(':');
  if (pos == std::string::npos) return {name, ""};
  return {name.substr(0, pos), name.substr(pos + 1)};
}

// Adds a claim, turning estimator exceptions into a failing claim.
template <class F>
void checked(Report& r, const std::string& id, const std::string& description, F&& body) {
  Claim c;
  c.id = id;
  c.description = description;
  try {
    body(c);
  } catch (const Error& e) {
    c.pass = false;
    c.note = e.what();
  }
  r.claims.push_back(std::move(c));
}

class Predictor {
 public:
  explicit Predictor(const ExperimentSpec& spec) : spec_(spec) {}

  // sigma_xi^2 = -(1/beta) int xi' psi, through the transport.
  double sigma2(const TestFunction& xi) {
    if (!mu_) {
      model_ = KernelModel::build(spec_.model, spec_.kernel_resolution);
      mu_ = calibrate_multiplier(model_, spec_.grid_size);
    }
    const TransportMap psi = build_transport(xi, *mu_, spec_.grid_size);
    return sigma_xi_squared(xi, psi, spec_.model.beta);
  }

 private:
  const ExperimentSpec& spec_;
  KernelModel model_;
  std::optional<Multiplier> mu_;
};

}  // namespace

bool Report::all_pass() const {
  for (const auto& c : claims) {
    if (!c.pass) return false;
  }
  return true;
}

std::string Report::to_json() const {
  json j;
  j["schema"] = "rieszlab-report";
  j["schema_version"] = kReportSchemaVersion;
  j["all_pass"] = all_pass();
  json arr = json::array();
  for (const auto& c : claims) {
    arr.push_back({{"id", c.id},
                   {"description", c.description},
                   {"empirical", number(c.empirical)},
                   {"empirical_stderr", number(c.empirical_stderr)},
                   {"predicted", number(c.predicted)},
                   {"tolerance", number(c.tolerance)},
                   {"pass", c.pass},
                   {"note", c.note}});
  }
  j["claims"] = arr;
  json tj = json::object();
  for (const auto& entry : tables) tj[entry.first] = "tables/" + entry.first + ".csv";
  j["tables"] = tj;
  return j.dump(2) + "\n";
}

Report analyze(const ExperimentSpec& spec, const SeriesMap& series) {
  Report r;
  const std::size_t n = spec.model.n;
  const double s = spec.model.s;
  const double beta = spec.model.beta;
  const double ns = std::pow(static_cast<double>(n), s);
  Predictor predictor(spec);

  // Per-observable summary.
  Table summary{{"index", "mean", "mean_stderr", "variance", "variance_stderr", "ess"}, {}};
  for (std::size_t idx = 0; idx < spec.observables.size(); ++idx) {
    const auto it = series.find(spec.observables[idx]);
    if (it == series.end()) continue;
    std::vector<double> row{static_cast<double>(idx), NAN, NAN, NAN, NAN, NAN};
    try {
      const VarianceEstimate m = mean_with_error(it->second, 0.0);
      row[1] = m.value;
      row[2] = m.stderr_;
      row[5] = m.ess;
      const VarianceEstimate v = variance_with_error(it->second, 0.0);
      row[3] = v.value;
      row[4] = v.stderr_;
    } catch (const Error&) {
    }
    summary.rows.push_back(row);
  }
  r.tables["observables"] = summary;

  std::map<long, ChainSeries> gapsq;
  std::map<double, ChainSeries> counts;
  for (const auto& name : spec.observables) {
    const auto it = series.find(name);
    if (it == series.end()) continue;
    const ChainSeries& data = it->second;
    const auto [head, arg] = split_name(name);
    if (head == "gap") {
      const long k = std::stol(arg);
      checked(r, "gap_mean:" + arg, "E[gap(i, k)] = k within 3 batch-means stderr", [&](Claim& c) {
        const VarianceEstimate m = mean_with_error(data);
        c.empirical = m.value;
        c.empirical_stderr = m.stderr_;
        c.predicted = static_cast<double>(k);
        c.tolerance = 3.0 * m.stderr_;
        c.pass = std::abs(m.value - c.predicted) <= c.tolerance;
      });
      const std::string bl = "bl:" + arg;
      if (series.count(bl)) {
        checked(r, "brascamp_lieb:" + arg, "Var[gap(i, k)] <= E[grad F (beta Hess H)^-1 grad F] + 3 sigma",
                [&](Claim& c) {
                  const InequalityCheck chk = brascamp_lieb_check(data, series.at(bl));
                  c.empirical = chk.empirical;
                  c.empirical_stderr = chk.empirical_stderr;
                  c.predicted = chk.bound;
                  c.tolerance = chk.margin;
                  c.pass = chk.holds;
                  c.note = "predicted is the bound; tolerance is the margin";
                });
      }
    } else if (head == "gapsq") {
      gapsq[std::stol(arg)] = data;
    } else if (head == "count") {
      const double ell = std::stod(arg);
      counts[ell] = data;
      if (ell < 0.5) {
        const TestFunction ind = TestFunction::indicator(ell);
        checked(r, "sub_poisson:" + name, "Var <= N (int xi^2 - (int xi)^2) + 3 sigma", [&](Claim& c) {
          const InequalityCheck chk = sub_poisson_check(data, ind, n);
          c.empirical = chk.empirical;
          c.empirical_stderr = chk.empirical_stderr;
          c.predicted = chk.bound;
          c.tolerance = chk.margin;
          c.pass = chk.holds;
          c.note = "predicted is the bound; tolerance is the margin";
        });
        const double center = 2.0 * ell * static_cast<double>(n);
        const bool lattice = center == std::floor(center);
        checked(r, "clt:" + name, "count fluctuation ~ Normal(0, N^s sigma^2): KS p >= 0.01, variance ratio in [0.85, 1.15]",
                [&](Claim& c) {
                  const double sigma2 = predictor.sigma2(ind);
                  const CLTReport rep = clt_test(data, center, std::sqrt(ns), sigma2, lattice);
                  c.empirical = rep.variance_ratio;
                  c.empirical_stderr = rep.variance_ratio_stderr;
                  c.predicted = 1.0;
                  c.tolerance = 0.15;
                  c.pass = rep.ks_pvalue >= 0.01 && std::abs(rep.variance_ratio - 1.0) <= 0.15;
                  char buf[256];
                  std::snprintf(buf, sizeof buf, "sigma2=%.6g ks=%.4g p=%.4g w1=%.4g skew=%.3g kurt=%.3g n_eff=%.0f",
                                sigma2, rep.ks_stat, rep.ks_pvalue, rep.w1_to_gaussian, rep.skewness,
                                rep.excess_kurtosis, rep.n_effective);
                  c.note = buf;
                });
      }
    } else if (head == "fluct") {
      const bool is_cos = arg.rfind("cos", 0) == 0;
      TestFunction xi = TestFunction::cosine(1);
      if (is_cos) {
        if (arg.size() > 4) xi = TestFunction::cosine(std::stoi(arg.substr(4)));
      } else {
        xi = spec.test_functions.at(arg);
      }
      checked(r, "sub_poisson:" + name, "Var <= N (int xi^2 - (int xi)^2) + 3 sigma", [&](Claim& c) {
        const InequalityCheck chk = sub_poisson_check(data, xi, n);
        c.empirical = chk.empirical;
        c.empirical_stderr = chk.empirical_stderr;
        c.predicted = chk.bound;
        c.tolerance = chk.margin;
        c.pass = chk.holds;
        c.note = "predicted is the bound; tolerance is the margin";
      });
      if (xi.kind() == TestFunctionKind::cosine) {
        checked(r, "clt:" + name, "Fluct / N^{s/2} ~ Normal(0, sigma^2): KS p >= 0.01, variance ratio in [0.85, 1.15]",
                [&](Claim& c) {
                  const double sigma2 = predictor.sigma2(xi);
                  const CLTReport rep = clt_test(data, 0.0, std::sqrt(ns), sigma2, false);
                  c.empirical = rep.variance_ratio;
                  c.empirical_stderr = rep.variance_ratio_stderr;
                  c.predicted = 1.0;
                  c.tolerance = 0.15;
                  c.pass = rep.ks_pvalue >= 0.01 && std::abs(rep.variance_ratio - 1.0) <= 0.15;
                  char buf[256];
                  std::snprintf(buf, sizeof buf, "sigma2=%.6g ks=%.4g p=%.4g w1=%.4g skew=%.3g kurt=%.3g n_eff=%.0f",
                                sigma2, rep.ks_stat, rep.ks_pvalue, rep.w1_to_gaussian, rep.skewness,
                                rep.excess_kurtosis, rep.n_effective);
                  c.note = buf;
                });
      }
    } else if (head == "A") {
      checked(r, "loop_mean:" + name, "E[A] = 0 within 3 batch-means stderr", [&](Claim& c) {
        const VarianceEstimate m = mean_with_error(data);
        c.empirical = m.value;
        c.empirical_stderr = m.stderr_;
        c.predicted = 0.0;
        c.tolerance = 3.0 * m.stderr_;
        c.pass = std::abs(m.value) <= c.tolerance;
      });
    }
  }

  if (!gapsq.empty()) {
    Table t{{"k", "variance", "stderr", "ess"}, {}};
    std::optional<GapProfile> profile;
    checked(r, "gap_exponent", "log-log slope of Var[gap(., k)] in k equals s within 0.15", [&](Claim& c) {
      profile = gap_variance_profile(gapsq);
      c.empirical = profile->exponent;
      c.empirical_stderr = profile->exponent_stderr;
      c.predicted = s;
      c.tolerance = 0.15;
      c.pass = std::isfinite(profile->exponent) && std::abs(profile->exponent - s) <= 0.15;
      if (gapsq.size() < 2) {
        c.pass = false;
        c.note = "needs at least two gapsq:k observables";
      }
    });
    if (profile) {
      for (const auto& row : profile->rows) {
        t.rows.push_back({static_cast<double>(row.k), row.variance, row.stderr_, row.ess});
      }
    }
    r.tables["gap_profile"] = t;
  }

  if (!counts.empty()) {
    Table t{{"ell", "variance", "stderr", "ess", "normalizer", "ratio", "ratio_stderr", "stated_sigma2",
             "transport_prediction"},
            {}};
    for (const auto& [ell, data] : counts) {
      const std::string id = "number_variance:" + real17(ell);
      checked(r, id, "Var[count]/(N^s zeta(-s, 2l)) equals cot(pi s/2)/(beta (pi/2) s) within 15%",
              [&](Claim& c) {
                const auto rows = number_variance({{ell, data}}, n, s, beta);
                const auto& row = rows.front();
                t.rows.push_back({row.ell, row.variance, row.stderr_, row.ess, row.normalizer, row.ratio,
                                  row.ratio_stderr, row.stated_sigma2, row.predicted});
                c.empirical = row.ratio;
                c.empirical_stderr = row.ratio_stderr;
                c.predicted = row.stated_sigma2;
                c.tolerance = 0.15 * row.stated_sigma2;
                c.pass = ell < 0.5 ? std::abs(row.ratio - row.stated_sigma2) <= c.tolerance : row.variance == 0.0;
                char buf[200];
                std::snprintf(buf, sizeof buf, "Var=%.6g; N^s sigma^2 from the transport = %.6g", row.variance,
                              row.predicted);
                c.note = buf;
              });
    }
    r.tables["number_variance"] = t;
  }

  // Rigidity and near-collision tails.
  if (series.count("gap:1")) {
    Table t{{"k", "parameter", "threshold", "hits", "samples", "probability", "lower", "upper"}, {}};
    for (const auto& name : spec.observables) {
      const auto [head, arg] = split_name(name);
      if (head != "gap") continue;
      const long k = std::stol(arg);
      try {
        const RigidityTails tails =
            rigidity_tails(series.at(name), k, s, {0.0, 0.1, 0.2, 0.3}, k == 1 ? series.at("gap:1") : ChainSeries{},
                           {0.5, 0.2, 0.1, 0.05});
        for (const auto& row : tails.gap_tail) {
          t.rows.push_back({static_cast<double>(k), row.parameter, row.threshold, static_cast<double>(row.hits),
                            static_cast<double>(row.samples), row.probability, row.lower, row.upper});
        }
        for (const auto& row : tails.collision_tail) {
          t.rows.push_back({0.0, row.parameter, row.threshold, static_cast<double>(row.hits),
                            static_cast<double>(row.samples), row.probability, row.lower, row.upper});
        }
      } catch (const Error&) {
      }
    }
    r.tables["tails"] = t;
  }
  return r;
}

std::string series_file_name(const std::string& observable) {
  std::string out;
  for (char ch : observable) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                    ch == '.' || ch == '-';
    out += ok ? ch : '_';
  }
  return out + ".csv";
}

void write_series_csv(const std::string& path, const RunResult& result, const std::string& observable) {
  std::string out = "chain,sweep,value\n";
  for (std::size_t c = 0; c < result.chains.size(); ++c) {
    const ChainRecord& rec = result.chains[c];
    const auto& values = rec.series.at(observable);
    for (std::size_t t = 0; t < values.size(); ++t) {
      out += std::to_string(c) + "," + std::to_string(rec.sweeps[t]) + "," + real17(values[t]) + "\n";
    }
  }
  write_text(path, out);
}

ChainSeries read_series_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != "chain,sweep,value") {
    throw ConfigError("'" + path + "' is not a series file (bad header)");
  }
  ChainSeries out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = a == std::string::npos ? a : line.find(',', a + 1);
    if (b == std::string::npos) throw ConfigError("malformed series row", line_no, 1);
    std::size_t chain = 0;
    double value = 0.0;
    try {
      chain = std::stoul(line.substr(0, a));
      value = std::stod(line.substr(b + 1));
    } catch (const std::exception&) {
      throw ConfigError("malformed series row", line_no, 1);
    }
    if (chain > out.size()) throw ConfigError("series rows must be grouped by chain", line_no, 1);
    if (chain == out.size()) out.emplace_back();
    out[chain].push_back(value);
  }
  return out;
}

namespace {

void write_report(const fs::path& dir, const Report& report) {
  fs::create_directories(dir / "tables");
  for (const auto& [name, t] : report.tables) write_table(dir / "tables" / (name + ".csv"), t);
  write_text(dir / "report.json", report.to_json());
}

}  // namespace

Report run_experiment(const ExperimentSpec& spec, const std::string& out_dir, std::size_t threads) {
  spec.validate();
  const fs::path dir(out_dir);
  std::error_code ec;
  if (!fs::exists(dir)) {
    if (!dir.parent_path().empty() && !fs::is_directory(dir.parent_path())) {
      throw ConfigError("output directory parent '" + dir.parent_path().string() + "' does not exist");
    }
    fs::create_directory(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out_dir + "': " + ec.message());
  } else if (!fs::is_directory(dir)) {
    throw ConfigError("'" + out_dir + "' exists and is not a directory");
  }
  fs::create_directories(dir / "series");

  const auto t0 = std::chrono::steady_clock::now();
  const KernelModel model = KernelModel::build(spec.model, spec.kernel_resolution);
  const ObservableSet observables(model, spec.observables, spec.context());
  const RunResult result = run_chains(model, spec.sampler, observables, threads);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_text(dir / "spec.cfg", emit_config(spec));
  json files = json::object();
  for (const auto& name : spec.observables) {
    const std::string file = series_file_name(name);
    write_series_csv((dir / "series" / file).string(), result, name);
    files[name] = "series/" + file;
  }
  json meta;
  meta["schema"] = "rieszlab-run";
  meta["schema_version"] = kReportSchemaVersion;
  meta["library_version"] = RIESZ_VERSION;
  meta["rng"] = "xoshiro256**; chain c seeded with seed ^ splitmix64(c)";
  meta["seed"] = spec.sampler.seed;
  meta["threads"] = threads;
  meta["seconds"] = seconds;
  meta["series"] = files;
  json chains = json::array();
  for (const auto& rec : result.chains) {
    chains.push_back({{"seed", rec.seed},
                      {"records", rec.sweeps.size()},
                      {"final_step", number(rec.final_step)},
                      {"accept_rate", number(rec.accept_rate)},
                      {"collective_tau", rec.collective_tau},
                      {"collective_accept", number(rec.collective_accept)},
                      {"seconds", rec.seconds}});
  }
  meta["chains"] = chains;
  write_text(dir / "metadata.json", meta.dump(2) + "\n");

  SeriesMap series;
  for (const auto& name : spec.observables) series[name] = result.series(name);
  Report report = analyze(spec, series);
  write_report(dir, report);
  return report;
}

Report analyze_run(const std::string& dir_name) {
  const fs::path dir(dir_name);
  if (!fs::is_directory(dir)) throw ConfigError("run directory '" + dir_name + "' does not exist");
  const ExperimentSpec spec = parse_config((dir / "spec.cfg").string());
  SeriesMap series;
  for (const auto& name : spec.observables) {
    series[name] = read_series_csv((dir / "series" / series_file_name(name)).string());
  }
  Report report = analyze(spec, series);
  write_report(dir, report);
  return report;
}

}  // namespace riesz
