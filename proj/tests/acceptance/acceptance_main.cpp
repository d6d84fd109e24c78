// Acceptance suite: one PASS/FAIL line per criterion on stdout.
// Usage: riesz_acceptance [--suite quick|full] [--threads N] [--out DIR] [--only 1,2,...]
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

#include "riesz/acceptance.hpp"

int main(int argc, char** argv) {
  riesz::AcceptanceOptions opts;
  opts.data_dir = RIESZ_TEST_DATA_DIR;
  opts.log = &std::cerr;
  if (const char* env = std::getenv("RGL_THREADS")) opts.threads = std::strtoul(env, nullptr, 10);
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto value = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << "missing value for " << arg << '\n';
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--suite") {
      const std::string v = value();
      if (v != "quick" && v != "full") {
        std::cerr << "--suite must be quick or full\n";
        return 2;
      }
      opts.suite = riesz::parse_suite(v);
    } else if (arg == "--threads") {
      opts.threads = std::strtoul(value().c_str(), nullptr, 10);
    } else if (arg == "--out") {
      opts.out_dir = value();
    } else if (arg == "--only") {
      std::stringstream ss(value());
      std::string item;
      while (std::getline(ss, item, ',')) opts.only.push_back(std::atoi(item.c_str()));
    } else {
      std::cerr << "unknown argument " << arg << '\n';
      return 2;
    }
  }
  if (opts.threads == 0) opts.threads = 1;
  const auto results = riesz::run_acceptance(opts);
  bool all = true;
  for (const auto& r : results) {
    std::cout << riesz::format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
