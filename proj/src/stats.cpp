#include "dessim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "dessim/workload.hpp"

namespace dessim {

std::size_t warmup_count(std::size_t n, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw ParameterError("warmup fraction must be in [0, 1), got " + std::to_string(fraction));
  }
  const double raw = fraction * static_cast<double>(n);
  const auto drop = static_cast<std::size_t>(std::max(0.0, std::ceil(raw - 1e-9)));
  // never drop the final observation
  return std::min(drop, n == 0 ? 0 : n - 1);
}

namespace {

void require_non_empty(std::span<const double> sample, const char* what) {
  if (sample.empty()) throw InputError(std::string(what) + ": empty sample");
}

void require_finite(std::span<const double> sample, const char* what) {
  for (double v : sample) {
    if (!std::isfinite(v)) throw InputError(std::string(what) + ": non-finite value");
  }
}

std::vector<double> sorted_copy(std::span<const double> sample) {
  std::vector<double> v(sample.begin(), sample.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

Ecdf::Ecdf(std::span<const double> sample) : n_(sample.size()) {
  require_non_empty(sample, "ecdf");
  require_finite(sample, "ecdf");
  const auto sorted = sorted_copy(sample);
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // last index of each run of equal values carries the cumulative count
    if (i + 1 == sorted.size() || sorted[i + 1] != sorted[i]) {
      x_.push_back(sorted[i]);
      p_.push_back(static_cast<double>(i + 1) / n);
    }
  }
}

Ecdf Ecdf::from_points(std::vector<double> x, std::vector<double> p, std::size_t n) {
  if (x.empty() && p.empty() && n == 0) return Ecdf{};
  if (x.empty() || x.size() != p.size() || n < x.size()) {
    throw FormatError("ecdf points: inconsistent sizes");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1]) || !(p[i] > p[i - 1])) {
      throw FormatError("ecdf points must be strictly increasing");
    }
  }
  if (p.back() != 1.0 || !(p.front() > 0.0)) throw FormatError("ecdf probabilities must end at 1");
  Ecdf e;
  e.x_ = std::move(x);
  e.p_ = std::move(p);
  e.n_ = n;
  return e;
}

double Ecdf::operator()(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0.0;
  return p_[static_cast<std::size_t>(it - x_.begin()) - 1];
}

double percentile_sorted(std::span<const double> sorted, double p) {
  require_non_empty(sorted, "percentile");
  if (!(p >= 0.0 && p <= 100.0)) {
    throw ParameterError("percentile p must be in [0, 100], got " + std::to_string(p));
  }
  const double h = static_cast<double>(sorted.size() - 1) * p / 100.0;
  const double floor_h = std::floor(h);
  const auto lo = static_cast<std::size_t>(floor_h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - floor_h) * (sorted[lo + 1] - sorted[lo]);
}

double percentile(std::span<const double> sample, double p) {
  require_non_empty(sample, "percentile");
  const auto sorted = sorted_copy(sample);
  return percentile_sorted(sorted, p);
}

double mean(std::span<const double> sample) {
  require_non_empty(sample, "mean");
  return std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(sample.size());
}

Moments moments(std::span<const double> sample) {
  if (sample.size() < 2) throw InputError("moments need at least 2 observations");
  require_finite(sample, "moments");
  Moments m;
  m.n = sample.size();
  m.mean = mean(sample);
  m.median = percentile(sample, 50.0);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : sample) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const auto n = static_cast<double>(sample.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw DegenerateSampleError("zero-variance sample: skewness/kurtosis undefined");
  m.variance = m2;
  m.skewness = m3 / std::pow(m2, 1.5);
  m.kurtosis = m4 / (m2 * m2);
  return m;
}

std::string_view to_string(CiMethod method) {
  return method == CiMethod::student_t ? "student-t" : "bootstrap";
}

CiMethod parse_ci_method(std::string_view text) {
  if (text == "student-t") return CiMethod::student_t;
  if (text == "bootstrap") return CiMethod::bootstrap;
  throw FormatError("unknown CI method '" + std::string(text) + "'");
}

namespace {

void check_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ParameterError("confidence must be in (0, 1), got " + std::to_string(confidence));
  }
}

}  // namespace

double student_t_critical(double confidence, double df) {
  check_confidence(confidence);
  if (!(df > 0.0)) throw ParameterError("degrees of freedom must be positive");
  const boost::math::students_t dist(df);
  return boost::math::quantile(dist, 0.5 + confidence / 2.0);
}

PercentileInterval percentile_ci(std::span<const std::vector<double>> runs, double p,
                                 double confidence, std::uint64_t bootstrap_seed) {
  if (runs.empty()) throw InputError("percentile_ci: no runs");
  check_confidence(confidence);

  PercentileInterval out;
  out.p = p;
  out.interval.confidence = confidence;
  std::vector<double> pooled;
  for (const auto& run : runs) {
    require_non_empty(run, "percentile_ci run");
    out.per_run.push_back(percentile(run, p));
    pooled.insert(pooled.end(), run.begin(), run.end());
  }
  out.pooled = percentile(pooled, p);

  if (runs.size() >= 2) {
    out.method = CiMethod::student_t;
    const double k = static_cast<double>(runs.size());
    const double centre = mean(out.per_run);
    double ss = 0.0;
    for (double v : out.per_run) ss += (v - centre) * (v - centre);
    const double sd = std::sqrt(ss / (k - 1.0));
    const double half = student_t_critical(confidence, k - 1.0) * sd / std::sqrt(k);
    out.interval.lower = centre - half;
    out.interval.upper = centre + half;
    return out;
  }

  // One run: percentile bootstrap over resamples of that run.
  out.method = CiMethod::bootstrap;
  const auto& run = runs.front();
  Rng rng(bootstrap_seed);
  std::vector<double> stats;
  stats.reserve(kBootstrapResamples);
  std::vector<double> resample(run.size());
  for (std::size_t b = 0; b < kBootstrapResamples; ++b) {
    for (auto& v : resample) v = run[rng.below(run.size())];
    std::sort(resample.begin(), resample.end());
    stats.push_back(percentile_sorted(resample, p));
  }
  std::sort(stats.begin(), stats.end());
  const double alpha = 1.0 - confidence;
  out.interval.lower = percentile_sorted(stats, 100.0 * alpha / 2.0);
  out.interval.upper = percentile_sorted(stats, 100.0 * (1.0 - alpha / 2.0));
  return out;
}

Interval mean_difference_ci(std::span<const double> a, std::span<const double> b,
                            double confidence) {
  check_confidence(confidence);
  if (a.size() < 2 || b.size() < 2) throw InputError("mean difference needs 2+ values per side");
  auto sample_var = [](std::span<const double> s, double m) {
    double ss = 0.0;
    for (double v : s) ss += (v - m) * (v - m);
    return ss / static_cast<double>(s.size() - 1);
  };
  const double ma = mean(a), mb = mean(b);
  const double va = sample_var(a, ma) / static_cast<double>(a.size());
  const double vb = sample_var(b, mb) / static_cast<double>(b.size());
  const double diff = ma - mb;
  Interval out{diff, diff, confidence};
  const double se2 = va + vb;
  if (se2 == 0.0) return out;
  // Welch-Satterthwaite degrees of freedom
  const double df = se2 * se2 /
                    (va * va / static_cast<double>(a.size() - 1) +
                     vb * vb / static_cast<double>(b.size() - 1));
  const double half = student_t_critical(confidence, df) * std::sqrt(se2);
  out.lower = diff - half;
  out.upper = diff + half;
  return out;
}

}  // namespace dessim
