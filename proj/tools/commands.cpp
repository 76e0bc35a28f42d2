#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <iostream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "dessim/engine.hpp"
#include "dessim/error.hpp"
#include "dessim/io.hpp"
#include "dessim/stats.hpp"
#include "dessim/validation.hpp"
#include "dessim/version.hpp"
#include "dessim/workload.hpp"

namespace dessim::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string tool_tag() { return "faas-dessim " + std::string(kVersion); }

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

void check_fraction(double f, const char* flag) {
  require(f >= 0.0 && f < 1.0, std::string(flag) + " must be in [0, 1)");
}

void check_confidence(double c) { require(c > 0.0 && c < 1.0, "--confidence must be in (0, 1)"); }

}  // namespace

fs::path run_output_path(const fs::path& out, std::size_t run) {
  fs::path p = out;
  p.replace_filename(out.stem().string() + "_run" + std::to_string(run) + out.extension().string());
  return p;
}

std::vector<fs::path> gen_traces(const GenTracesOptions& opts) {
  require(opts.count >= 1, "--count must be at least 1");
  require(opts.entries >= 2, "--entries must be at least 2");
  require(opts.cold_ms > 0.0, "--cold-ms must be positive");
  require(opts.warm_mean_ms > 0.0, "--warm-mean-ms must be positive");
  require(opts.dispersion >= 0.0, "--dispersion must be non-negative");
  require(!opts.out.empty(), "--out is required");

  std::vector<fs::path> written;
  for (std::size_t i = 0; i < opts.count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "trace_%03zu.csv", i);
    const std::uint64_t file_seed = derive_seed(opts.seed, i);
    const TraceFile trace =
        synth_trace(opts.entries, opts.cold_ms, opts.warm_mean_ms, opts.dispersion, file_seed, name);
    const Provenance provenance = {
        {"tool", tool_tag()},
        {"command", "gen-traces"},
        {"index", std::to_string(i)},
        {"count", std::to_string(opts.count)},
        {"entries", std::to_string(opts.entries)},
        {"cold_ms", format_double(opts.cold_ms)},
        {"warm_mean_ms", format_double(opts.warm_mean_ms)},
        {"dispersion", format_double(opts.dispersion)},
        {"seed", std::to_string(opts.seed)},
        {"file_seed", std::to_string(file_seed)},
    };
    const fs::path path = opts.out / name;
    write_trace_csv(trace, path, provenance);
    written.push_back(path);
  }
  return written;
}

double warm_trimmed_mean_ms(const std::vector<TraceFile>& traces, double warmup_fraction) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& trace : traces) {
    const auto warm = trim_warmup(trace.entries, warmup_fraction);
    for (const auto& e : warm) sum += to_ms(e.duration);
    n += warm.size();
  }
  if (n == 0) throw InputError("no trace entries to derive lambda from");
  return sum / static_cast<double>(n);
}

std::vector<fs::path> simulate(const SimulateOptions& opts) {
  const ArrivalKind kind = parse_arrival_kind(opts.arrival);
  require(opts.requests >= 1, "--requests must be at least 1");
  require(opts.runs >= 1, "--runs must be at least 1");
  require(!opts.out.empty(), "--out is required");
  require(opts.idle_timeout_ms > 0.0, "--idle-timeout-ms must be positive");
  check_fraction(opts.warmup_fraction, "--warmup-frac");
  require(!(opts.lambda_ms && opts.lambda_from_traces),
          "--lambda-ms and --lambda-from-traces are mutually exclusive");
  if (kind == ArrivalKind::closed_loop) {
    require(!opts.lambda_ms && !opts.lambda_from_traces, "closed-loop arrival takes no lambda");
  } else {
    require(opts.lambda_ms || opts.lambda_from_traces,
            "open-loop arrival needs --lambda-ms or --lambda-from-traces");
    if (opts.lambda_ms) require(*opts.lambda_ms > 0.0, "--lambda-ms must be positive");
  }

  SimulationConfig base;
  base.trace_files = read_trace_dir(opts.traces);
  base.n_requests = opts.requests;
  base.idle_timeout = duration_from_ms(opts.idle_timeout_ms);
  base.warmup_fraction = opts.warmup_fraction;
  base.arrival_model.kind = kind;
  std::string lambda_source = "none";
  if (opts.lambda_ms) {
    base.arrival_model.lambda_ms = *opts.lambda_ms;
    lambda_source = "flag";
  } else if (opts.lambda_from_traces) {
    base.arrival_model.lambda_ms = warm_trimmed_mean_ms(base.trace_files, opts.warmup_fraction);
    lambda_source = "traces";
  }
  validate_config(base);

  auto run_one = [&](std::size_t run) {
    SimulationConfig config = base;
    config.seed = derive_seed(opts.seed, run - 1);
    const SimulationResult result = run_simulation(config);
    const Provenance provenance = {
        {"tool", tool_tag()},
        {"command", "simulate"},
        {"traces", opts.traces.string()},
        {"trace_files", std::to_string(config.trace_files.size())},
        {"requests", std::to_string(config.n_requests)},
        {"arrival", std::string(to_string(kind))},
        {"lambda_ms", format_double(config.arrival_model.lambda_ms)},
        {"lambda_source", lambda_source},
        {"idle_timeout_us", std::to_string(config.idle_timeout.count())},
        {"warmup_fraction", format_double(config.warmup_fraction)},
        {"seed", std::to_string(opts.seed)},
        {"run", std::to_string(run)},
        {"runs", std::to_string(opts.runs)},
        {"run_seed", std::to_string(config.seed)},
        {"replicas_created", std::to_string(result.replicas_created)},
        {"cold_start_count", std::to_string(result.cold_start_count)},
    };
    const fs::path path = run_output_path(opts.out, run);
    write_results(result, path, provenance);
    return std::make_pair(path, result.replicas_created);
  };

  std::vector<std::future<std::pair<fs::path, std::size_t>>> pending;
  for (std::size_t run = 1; run <= opts.runs; ++run) {
    pending.push_back(std::async(std::launch::async, run_one, run));
  }
  std::vector<fs::path> written;
  for (auto& f : pending) {
    auto [path, replicas] = f.get();
    std::cerr << "wrote " << path.string() << " (" << replicas << " replicas)\n";
    written.push_back(path);
  }
  return written;
}

namespace {

ordered_json moments_json(std::span<const double> sample) {
  ordered_json j;
  j["n"] = sample.size();
  j["mean_ms"] = mean(sample);
  j["median_ms"] = percentile(sample, 50.0);
  try {
    const Moments m = moments(sample);
    j["variance_ms2"] = m.variance;
    j["skewness"] = m.skewness;
    j["kurtosis"] = m.kurtosis;
  } catch (const Error&) {
    j["variance_ms2"] = sample.size() >= 2 ? ordered_json(0.0) : ordered_json(nullptr);
    j["skewness"] = nullptr;
    j["kurtosis"] = nullptr;
  }
  return j;
}

struct LoadedRun {
  std::vector<double> times_ms;
  std::optional<SimulationResult> result;
};

LoadedRun load_run(const fs::path& path) {
  LoadedRun run;
  run.times_ms = read_response_times_ms(path);
  const std::string text = read_text_file(path);
  if (text.find(kResultsHeader) != std::string::npos) run.result = read_results(path);
  return run;
}

std::vector<std::string> names(const std::vector<fs::path>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(p.string());
  return out;
}

}  // namespace

fs::path stats(const StatsOptions& opts) {
  require(!opts.inputs.empty(), "--in needs at least one file");
  require(!opts.out.empty(), "--out is required");
  check_fraction(opts.warmup_fraction, "--warmup-frac");
  check_confidence(opts.confidence);

  ordered_json doc;
  doc["tool"] = {{"name", "faas-dessim"}, {"version", std::string(kVersion)}};
  doc["config"] = {{"command", "stats"},
                   {"inputs", names(opts.inputs)},
                   {"warmup_fraction", opts.warmup_fraction},
                   {"confidence", opts.confidence},
                   {"bootstrap_seed", opts.bootstrap_seed}};

  std::vector<std::vector<double>> trimmed;
  std::vector<double> pooled;
  ordered_json runs = ordered_json::array();
  for (const auto& path : opts.inputs) {
    const LoadedRun run = load_run(path);
    auto warm = trim_warmup(run.times_ms, opts.warmup_fraction);
    ordered_json r;
    r["file"] = path.string();
    r["observations"] = run.times_ms.size();
    r["trimmed"] = run.times_ms.size() - warm.size();
    if (run.result) {
      r["replicas_created"] = run.result->replicas_created;
      r["cold_start_count"] = run.result->cold_start_count;
    }
    r["moments"] = moments_json(warm);
    runs.push_back(r);
    pooled.insert(pooled.end(), warm.begin(), warm.end());
    trimmed.push_back(std::move(warm));
  }
  doc["runs"] = runs;
  doc["pooled"] = moments_json(pooled);

  ordered_json rows = ordered_json::array();
  for (double p : kReportPercentiles) {
    const auto ci = percentile_ci(trimmed, p, opts.confidence, opts.bootstrap_seed);
    ordered_json row;
    row["percentile"] = p;
    row["label"] = percentile_label(p);
    row["lower_ms"] = ci.interval.lower;
    row["upper_ms"] = ci.interval.upper;
    row["confidence"] = ci.interval.confidence;
    row["method"] = std::string(to_string(ci.method));
    row["per_run_ms"] = ci.per_run;
    row["pooled_ms"] = ci.pooled;
    rows.push_back(row);
  }
  doc["percentiles"] = rows;

  write_text_file(opts.out, doc.dump(2) + "\n");
  return opts.out;
}

fs::path validate(const ValidateOptions& opts) {
  require(!opts.measured.empty(), "--measured needs at least one file");
  require(!opts.simulated.empty(), "--simulated needs at least one file");
  require(!opts.out.empty(), "--out is required");
  check_confidence(opts.confidence);
  check_fraction(opts.warmup_fraction, "--warmup-frac");
  require(opts.skew_tol >= 0.0 && opts.kurt_rel_tol >= 0.0, "tolerances must be non-negative");
  if (opts.ks_max) require(*opts.ks_max >= 0.0 && *opts.ks_max <= 1.0, "--ks-max must be in [0, 1]");
  for (double p : opts.extra_percentiles) require(p >= 0.0 && p <= 100.0, "percentiles must be in [0, 100]");

  auto load = [](const std::vector<fs::path>& paths) {
    std::vector<std::vector<double>> runs;
    for (const auto& p : paths) runs.push_back(read_response_times_ms(p));
    return runs;
  };
  const auto measured = load(opts.measured);
  const auto simulated = load(opts.simulated);

  ValidationOptions vo;
  vo.confidence = opts.confidence;
  vo.skew_tol = opts.skew_tol;
  vo.kurt_rel_tol = opts.kurt_rel_tol;
  vo.ks_max = opts.ks_max;
  vo.warmup_fraction = opts.warmup_fraction;
  vo.extra_percentiles = opts.extra_percentiles;
  vo.bootstrap_seed = opts.bootstrap_seed;

  ValidationReport report = compare(measured, simulated, vo);
  report.measured_inputs = names(opts.measured);
  report.simulated_inputs = names(opts.simulated);
  write_report(report, opts.out);
  if (opts.plot_data) emit_plot_data(report, *opts.plot_data);

  std::cout << render_percentile_table(report);
  std::cout << render_mean_difference(report);
  std::cout << "ks_distance: " << format_double(report.ks_distance) << "\n";
  std::cout << "verdict: " << to_string(report.checks.verdict) << "\n";
  return opts.out;
}

}  // namespace dessim::cli
