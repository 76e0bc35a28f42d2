#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dessim/error.hpp"

namespace dessim {

// Number of leading observations dropped by trim_warmup: ceil(fraction * n).
// A 1e-9 slack absorbs binary rounding of fractions such as 0.05.
std::size_t warmup_count(std::size_t n, double fraction);

// Drops the first warmup_count(n, fraction) elements, preserving order.
template <typename T>
std::vector<T> trim_warmup(std::span<const T> records, double fraction) {
  const std::size_t drop = warmup_count(records.size(), fraction);
  return std::vector<T>(records.begin() + static_cast<std::ptrdiff_t>(drop), records.end());
}

template <typename T>
std::vector<T> trim_warmup(const std::vector<T>& records, double fraction) {
  return trim_warmup(std::span<const T>(records), fraction);
}

// Right-continuous empirical CDF: F(x) = #{values <= x} / n.
class Ecdf {
 public:
  Ecdf() = default;  // empty; evaluates to 0 everywhere
  explicit Ecdf(std::span<const double> sample);

  // Reconstructs from stored points; checks strictly increasing x and
  // probabilities ending at exactly 1.
  static Ecdf from_points(std::vector<double> x, std::vector<double> p, std::size_t n);

  double operator()(double x) const;

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& p() const { return p_; }
  std::size_t sample_size() const { return n_; }

  bool operator==(const Ecdf&) const = default;

 private:
  std::vector<double> x_;
  std::vector<double> p_;
  std::size_t n_ = 0;
};

// Quantile by linear interpolation between order statistics (Hyndman-Fan
// type 7): with sorted x[0..n-1], h = (n - 1) * p / 100, the result is
// x[floor(h)] + (h - floor(h)) * (x[floor(h) + 1] - x[floor(h)]).
double percentile(std::span<const double> sample, double p);

// Same rule on data already sorted ascending.
double percentile_sorted(std::span<const double> sorted, double p);

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;  // population (divide by n)
  double skewness = 0.0;  // g1 = m3 / m2^1.5
  double kurtosis = 0.0;  // b2 = m4 / m2^2, normal -> 3

  // Cullen-Frey plot coordinates (square of skewness, kurtosis).
  double cullen_frey_x() const { return skewness * skewness; }
  double cullen_frey_y() const { return kurtosis; }

  bool operator==(const Moments&) const = default;
};

// Population-moment estimators. Throws InputError for n < 2 and
// DegenerateSampleError for zero variance.
Moments moments(std::span<const double> sample);

double mean(std::span<const double> sample);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double confidence = 0.95;

  double width() const { return upper - lower; }
  bool operator==(const Interval&) const = default;
};

enum class CiMethod { student_t, bootstrap };

std::string_view to_string(CiMethod method);
CiMethod parse_ci_method(std::string_view text);

struct PercentileInterval {
  double p = 50.0;
  Interval interval;
  CiMethod method = CiMethod::student_t;
  std::vector<double> per_run;  // percentile of each run
  double pooled = 0.0;          // percentile of all runs concatenated

  bool operator==(const PercentileInterval&) const = default;
};

inline constexpr std::size_t kBootstrapResamples = 1000;

// Two-sided Student-t quantile: t such that P(|T_df| <= t) = confidence.
double student_t_critical(double confidence, double df);

// Per-run percentiles, then a Student-t interval across runs. A single run
// falls back to a seeded percentile bootstrap with kBootstrapResamples.
PercentileInterval percentile_ci(std::span<const std::vector<double>> runs, double p,
                                 double confidence, std::uint64_t bootstrap_seed = 0);

// Welch interval for mean(a) - mean(b).
Interval mean_difference_ci(std::span<const double> a, std::span<const double> b,
                            double confidence);

}  // namespace dessim
