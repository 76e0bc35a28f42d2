#include "dessim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <string>

#include "dessim/version.hpp"

namespace dessim {

double ks_distance(const Ecdf& a, const Ecdf& b) {
  if (a.x().empty() || b.x().empty()) throw InputError("ks_distance: empty ECDF");
  // Both step functions only change at their own breakpoints, so walking the
  // merged breakpoints visits every value |F_a - F_b| takes.
  const auto& xa = a.x();
  const auto& xb = b.x();
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0, sup = 0.0;
  while (i < xa.size() || j < xb.size()) {
    double x;
    if (j == xb.size() || (i < xa.size() && xa[i] <= xb[j])) {
      x = xa[i];
    } else {
      x = xb[j];
    }
    while (i < xa.size() && xa[i] <= x) fa = a.p()[i++];
    while (j < xb.size() && xb[j] <= x) fb = b.p()[j++];
    sup = std::max(sup, std::abs(fa - fb));
  }
  return sup;
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::shape_valid ? "shape-valid" : "shape-divergent";
}

Verdict parse_verdict(std::string_view text) {
  if (text == "shape-valid") return Verdict::shape_valid;
  if (text == "shape-divergent") return Verdict::shape_divergent;
  throw FormatError("unknown verdict '" + std::string(text) + "'");
}

ShapeChecks shape_verdict(const Moments& measured, const Moments& simulated, double skew_tol,
                          double kurt_rel_tol) {
  for (const Moments* m : {&measured, &simulated}) {
    if (m->n < 2 || !std::isfinite(m->skewness) || !std::isfinite(m->kurtosis) ||
        !(m->kurtosis > 0.0)) {
      throw InputError("shape_verdict: undefined moments");
    }
  }
  if (!(skew_tol >= 0.0) || !(kurt_rel_tol >= 0.0)) {
    throw ParameterError("shape tolerances must be non-negative");
  }
  ShapeChecks c;
  c.skewness_diff = std::abs(measured.skewness - simulated.skewness);
  c.kurtosis_rel_diff = std::abs(measured.kurtosis - simulated.kurtosis) / measured.kurtosis;
  c.skewness_ok = c.skewness_diff <= skew_tol;
  c.kurtosis_ok = c.kurtosis_rel_diff <= kurt_rel_tol;
  c.verdict = c.skewness_ok && c.kurtosis_ok ? Verdict::shape_valid : Verdict::shape_divergent;
  return c;
}

namespace {

SourceSummary summarize(std::string name, const std::vector<std::vector<double>>& runs,
                        std::vector<double>& pooled) {
  SourceSummary s;
  s.name = std::move(name);
  s.runs = runs.size();
  for (const auto& run : runs) {
    s.run_sizes.push_back(run.size());
    pooled.insert(pooled.end(), run.begin(), run.end());
  }
  s.moments = moments(pooled);
  s.ecdf = Ecdf(pooled);
  return s;
}

std::vector<std::vector<double>> prepare(std::span<const std::vector<double>> runs,
                                         double warmup_fraction, const char* side) {
  if (runs.empty()) throw InputError(std::string(side) + " side has no runs");
  std::vector<std::vector<double>> out;
  out.reserve(runs.size());
  for (const auto& run : runs) {
    if (run.empty()) throw InputError(std::string(side) + " side contains an empty run");
    out.push_back(trim_warmup(run, warmup_fraction));
  }
  return out;
}

}  // namespace

ValidationReport compare(std::span<const std::vector<double>> measured_runs,
                         std::span<const std::vector<double>> simulated_runs,
                         const ValidationOptions& options) {
  const auto measured = prepare(measured_runs, options.warmup_fraction, "measured");
  const auto simulated = prepare(simulated_runs, options.warmup_fraction, "simulated");

  ValidationReport report;
  report.tool_version = std::string(kVersion);
  report.options = options;

  std::vector<double> pooled_m, pooled_s;
  report.measured = summarize("measured", measured, pooled_m);
  report.simulated = summarize("simulated", simulated, pooled_s);

  std::vector<double> rows(std::begin(kReportPercentiles), std::end(kReportPercentiles));
  rows.insert(rows.end(), options.extra_percentiles.begin(), options.extra_percentiles.end());
  for (double p : rows) {
    report.percentiles.push_back(
        {p, percentile_ci(measured, p, options.confidence, options.bootstrap_seed),
         percentile_ci(simulated, p, options.confidence, options.bootstrap_seed)});
  }

  report.mean_difference = report.measured.moments.mean - report.simulated.moments.mean;
  report.mean_difference_ci = mean_difference_ci(pooled_m, pooled_s, options.confidence);
  report.ks_distance = ks_distance(report.measured.ecdf, report.simulated.ecdf);

  report.checks = shape_verdict(report.measured.moments, report.simulated.moments,
                                options.skew_tol, options.kurt_rel_tol);
  if (options.ks_max) {
    report.checks.ks_ok = report.ks_distance <= *options.ks_max;
    if (!*report.checks.ks_ok) report.checks.verdict = Verdict::shape_divergent;
  }
  return report;
}

std::string percentile_label(double p) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, res.ptr) + "th";
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string bracket(const Interval& i) { return "[" + fixed2(i.lower) + ", " + fixed2(i.upper) + "]"; }

}  // namespace

std::string render_percentile_table(const ValidationReport& report) {
  std::string out = "Percentile | Measurement (ms) | Simulation (ms)\n";
  for (const auto& row : report.percentiles) {
    out += percentile_label(row.p) + " | " + bracket(row.measured.interval) + " | " +
           bracket(row.simulated.interval) + "\n";
  }
  return out;
}

std::string render_mean_difference(const ValidationReport& report) {
  return "mean difference (ms) | " + bracket(report.mean_difference_ci) + "\n";
}

}  // namespace dessim
