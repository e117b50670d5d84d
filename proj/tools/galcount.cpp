#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "galcount/galcount.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Count Galois cohomology classes over Q and verify Poisson summation"};
  std::string config_path;
  std::string out_path;
  int threads = 1;
  bool verbose = false;
  app.add_option("--config", config_path, "Run configuration file")->required();
  app.add_option("--out", out_path, "Write the report here instead of stdout (overrides the config's out key)");
  app.add_option("--threads", threads, "Worker threads (runs are currently sequential)")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "Print timing and the resolved configuration to stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return galcount::kExitUsage;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot read config " << config_path << "\n";
    return galcount::kExitUsage;
  }
  std::stringstream text;
  text << in.rdbuf();

  galcount::RunConfig config;
  try {
    config = galcount::parse_config(text.str());
  } catch (const galcount::Error& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return galcount::kExitConfig;
  }
  if (!out_path.empty()) config.out = out_path;
  if (verbose) std::cerr << galcount::to_config_text(config);

  const auto start = std::chrono::steady_clock::now();
  std::ostringstream report;
  const int code = galcount::run_guarded(config, report, std::cerr);
  if (config.out.empty()) {
    std::cout << report.str();
  } else {
    std::ofstream out(config.out);
    if (!out) {
      std::cerr << "cannot write " << config.out << "\n";
      return galcount::kExitUsage;
    }
    out << report.str();
  }
  if (verbose) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "exit " << code << " after " << secs << " s\n";
  }
  return code;
}
