#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dessim/trace.hpp"

namespace dessim::cli {

struct GenTracesOptions {
  std::size_t count = 32;
  std::size_t entries = 5000;
  double cold_ms = 150.0;
  double warm_mean_ms = 19.0;
  double dispersion = 0.2;
  std::uint64_t seed = 0;
  std::filesystem::path out;
};

struct SimulateOptions {
  std::filesystem::path traces;
  std::size_t requests = 0;
  std::string arrival = "poisson";
  std::optional<double> lambda_ms;
  bool lambda_from_traces = false;
  double idle_timeout_ms = 300000.0;
  double warmup_fraction = 0.05;  // used when deriving lambda from traces
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::size_t runs = 1;
};

struct StatsOptions {
  std::vector<std::filesystem::path> inputs;
  double warmup_fraction = 0.05;
  double confidence = 0.95;
  std::uint64_t bootstrap_seed = 0;
  std::filesystem::path out;
};

struct ValidateOptions {
  std::vector<std::filesystem::path> measured;
  std::vector<std::filesystem::path> simulated;
  double confidence = 0.95;
  double skew_tol = 0.5;
  double kurt_rel_tol = 0.25;
  std::optional<double> ks_max;
  double warmup_fraction = 0.05;
  std::vector<double> extra_percentiles;
  std::uint64_t bootstrap_seed = 0;
  std::filesystem::path out;
  std::optional<std::filesystem::path> plot_data;
};

// Each command validates its options before doing any work and throws a
// dessim::Error subclass on failure. Returned paths are the files written.
std::vector<std::filesystem::path> gen_traces(const GenTracesOptions& opts);
std::vector<std::filesystem::path> simulate(const SimulateOptions& opts);
std::filesystem::path stats(const StatsOptions& opts);
std::filesystem::path validate(const ValidateOptions& opts);

// Warm-trimmed mean response time (ms) over all entries of all traces.
double warm_trimmed_mean_ms(const std::vector<TraceFile>& traces, double warmup_fraction);

// "out/results.csv", 2 -> "out/results_run2.csv"
std::filesystem::path run_output_path(const std::filesystem::path& out, std::size_t run);

}  // namespace dessim::cli
