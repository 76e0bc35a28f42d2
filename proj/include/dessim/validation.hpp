#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dessim/stats.hpp"

namespace dessim {

// sup over the union of breakpoints of |F_a(x) - F_b(x)|.
double ks_distance(const Ecdf& a, const Ecdf& b);

enum class Verdict { shape_valid, shape_divergent };

std::string_view to_string(Verdict verdict);
Verdict parse_verdict(std::string_view text);

inline constexpr double kDefaultSkewTolerance = 0.5;
inline constexpr double kDefaultKurtosisRelTolerance = 0.25;

struct ShapeChecks {
  double skewness_diff = 0.0;       // |g1_m - g1_s|
  double kurtosis_rel_diff = 0.0;   // |b2_m - b2_s| / b2_m
  bool skewness_ok = false;
  bool kurtosis_ok = false;
  std::optional<bool> ks_ok;        // only when a KS bound is configured
  Verdict verdict = Verdict::shape_divergent;

  bool operator==(const ShapeChecks&) const = default;
};

// shape-valid iff |g1_m - g1_s| <= skew_tol and |b2_m - b2_s| / b2_m <=
// kurt_rel_tol. Throws InputError for non-finite moments.
ShapeChecks shape_verdict(const Moments& measured, const Moments& simulated,
                          double skew_tol = kDefaultSkewTolerance,
                          double kurt_rel_tol = kDefaultKurtosisRelTolerance);

struct ValidationOptions {
  double confidence = 0.95;
  double skew_tol = kDefaultSkewTolerance;
  double kurt_rel_tol = kDefaultKurtosisRelTolerance;
  std::optional<double> ks_max;           // enables the KS check
  double warmup_fraction = 0.0;           // applied per run before analysis
  std::vector<double> extra_percentiles;  // appended after the fixed rows
  std::uint64_t bootstrap_seed = 0;

  bool operator==(const ValidationOptions&) const = default;
};

// Rows of the percentile table, matching the published comparison.
inline constexpr double kReportPercentiles[] = {50.0, 95.0, 99.0, 99.9};

struct PercentileRow {
  double p = 0.0;
  PercentileInterval measured;
  PercentileInterval simulated;

  bool operator==(const PercentileRow&) const = default;
};

struct SourceSummary {
  std::string name;  // "measured" or "simulated"
  std::size_t runs = 0;
  std::vector<std::size_t> run_sizes;  // after warmup trimming
  Moments moments;
  Ecdf ecdf;

  bool operator==(const SourceSummary&) const = default;
};

struct ValidationReport {
  std::string tool_version;
  ValidationOptions options;
  SourceSummary measured;
  SourceSummary simulated;
  std::vector<PercentileRow> percentiles;
  double mean_difference = 0.0;  // mean(measured) - mean(simulated)
  Interval mean_difference_ci;
  double ks_distance = 0.0;
  ShapeChecks checks;
  // Input file names, filled in by callers that read runs from disk.
  std::vector<std::string> measured_inputs;
  std::vector<std::string> simulated_inputs;

  bool operator==(const ValidationReport&) const = default;
};

// Samples are response times in milliseconds, one vector per run.
ValidationReport compare(std::span<const std::vector<double>> measured_runs,
                         std::span<const std::vector<double>> simulated_runs,
                         const ValidationOptions& options = {});

// Plain-text percentile table with 2-decimal intervals, e.g.
// "50th | [22.83, 22.84] | [18.93, 18.97]".
std::string render_percentile_table(const ValidationReport& report);
// "mean difference (ms) | [lo, hi]"
std::string render_mean_difference(const ValidationReport& report);

std::string percentile_label(double p);

}  // namespace dessim
