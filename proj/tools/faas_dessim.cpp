// faas-dessim: trace-driven FaaS simulator and validation toolkit.
//
//   faas-dessim gen-traces --out traces/
//   faas-dessim simulate --traces traces/ --requests 20000 --lambda-from-traces --runs 4 --out sim/results.csv
//   faas-dessim stats --in sim/results_run*.csv --out summary.json
//   faas-dessim validate --measured m*.csv --simulated sim/results_run*.csv --out report.json
//
// Errors are reported as a single line "error: <kind>: <message>" on stderr.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "dessim/error.hpp"
#include "dessim/version.hpp"

namespace {

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

// FAAS_DESSIM_SEED supplies the seed when --seed is absent.
std::uint64_t env_seed() {
  const char* raw = std::getenv("FAAS_DESSIM_SEED");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(raw, &used, 10);
    if (used == std::string(raw).size()) return v;
  } catch (const std::exception&) {
  }
  throw dessim::ParameterError("FAAS_DESSIM_SEED is not an unsigned integer");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dessim::cli;

  CLI::App app{"Trace-driven FaaS platform simulator and predictive-validation toolkit",
               "faas-dessim"};
  app.set_version_flag("--version", std::string(dessim::kVersion));
  app.require_subcommand(1);

  GenTracesOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-traces", "Write synthetic trace files");
  gen_cmd->add_option("--count", gen.count, "Number of trace files")->capture_default_str();
  gen_cmd->add_option("--entries", gen.entries, "Entries per file (first is the cold start)")
      ->capture_default_str();
  gen_cmd->add_option("--cold-ms", gen.cold_ms, "Cold-start duration (ms)")->capture_default_str();
  gen_cmd->add_option("--warm-mean-ms", gen.warm_mean_ms, "Mean warm duration (ms)")
      ->capture_default_str();
  gen_cmd->add_option("--dispersion", gen.dispersion, "Log-space sigma of warm durations")
      ->capture_default_str();
  auto* gen_seed = gen_cmd->add_option("--seed", gen.seed, "Base seed");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  SimulateOptions sim;
  double lambda_ms = 0.0;
  auto* sim_cmd = app.add_subcommand("simulate", "Run simulations and write results CSVs");
  sim_cmd->add_option("--traces", sim.traces, "Directory of trace CSV files")->required();
  sim_cmd->add_option("--requests", sim.requests, "Requests per run")->required();
  sim_cmd->add_option("--arrival", sim.arrival, "poisson | exponential | closed-loop")
      ->check(CLI::IsMember({"poisson", "exponential", "closed-loop"}))
      ->capture_default_str();
  auto* lambda_opt = sim_cmd->add_option("--lambda-ms", lambda_ms, "Mean inter-arrival gap (ms)");
  auto* lambda_traces = sim_cmd->add_flag("--lambda-from-traces", sim.lambda_from_traces,
                                          "Use the warm-trimmed mean of the traces as lambda");
  lambda_opt->excludes(lambda_traces);
  sim_cmd->add_option("--idle-timeout-ms", sim.idle_timeout_ms, "Replica idle timeout (ms)")
      ->capture_default_str();
  sim_cmd->add_option("--warmup-frac", sim.warmup_fraction,
                      "Warmup fraction trimmed when deriving lambda from traces")
      ->capture_default_str();
  auto* sim_seed = sim_cmd->add_option("--seed", sim.seed, "Base seed");
  sim_cmd->add_option("--out", sim.out, "Results path; runs are suffixed _run<i>")->required();
  sim_cmd->add_option("--runs", sim.runs, "Independent runs")->capture_default_str();

  StatsOptions st;
  auto* stats_cmd = app.add_subcommand("stats", "Summarize results or trace CSVs");
  stats_cmd->add_option("--in", st.inputs, "Input files")->required();
  stats_cmd->add_option("--warmup-frac", st.warmup_fraction, "Leading fraction dropped per run")
      ->capture_default_str();
  stats_cmd->add_option("--confidence", st.confidence, "Interval confidence")->capture_default_str();
  stats_cmd->add_option("--bootstrap-seed", st.bootstrap_seed, "Seed for the single-run bootstrap");
  stats_cmd->add_option("--out", st.out, "Summary JSON path")->required();

  ValidateOptions val;
  double ks_max = 0.0;
  std::string plot_dir;
  auto* val_cmd = app.add_subcommand("validate", "Compare measured and simulated runs");
  val_cmd->add_option("--measured", val.measured, "Measured run files")->required();
  val_cmd->add_option("--simulated", val.simulated, "Simulated run files")->required();
  val_cmd->add_option("--confidence", val.confidence, "Interval confidence")->capture_default_str();
  val_cmd->add_option("--skew-tol", val.skew_tol, "Max absolute skewness difference")
      ->capture_default_str();
  val_cmd->add_option("--kurt-rel-tol", val.kurt_rel_tol, "Max relative kurtosis difference")
      ->capture_default_str();
  auto* ks_opt = val_cmd->add_option("--ks-max", ks_max, "Enable a KS-distance check with this bound");
  val_cmd->add_option("--warmup-frac", val.warmup_fraction, "Leading fraction dropped per run")
      ->capture_default_str();
  val_cmd->add_option("--extra-percentiles", val.extra_percentiles, "Additional table rows");
  val_cmd->add_option("--bootstrap-seed", val.bootstrap_seed, "Seed for the single-run bootstrap");
  val_cmd->add_option("--out", val.out, "Report JSON path")->required();
  auto* plot_opt = val_cmd->add_option("--plot-data", plot_dir, "Directory for ECDF/Cullen-Frey CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (gen_cmd->parsed()) {
      if (gen_seed->count() == 0) gen.seed = env_seed();
      const auto files = gen_traces(gen);
      std::cerr << "wrote " << files.size() << " trace files to " << gen.out.string() << "\n";
    } else if (sim_cmd->parsed()) {
      if (sim_seed->count() == 0) sim.seed = env_seed();
      if (lambda_opt->count() > 0) sim.lambda_ms = lambda_ms;
      simulate(sim);
    } else if (stats_cmd->parsed()) {
      stats(st);
    } else if (val_cmd->parsed()) {
      if (ks_opt->count() > 0) val.ks_max = ks_max;
      if (plot_opt->count() > 0) val.plot_data = plot_dir;
      validate(val);
    }
  } catch (const dessim::ParameterError& e) {
    std::cerr << "error: usage: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const dessim::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
