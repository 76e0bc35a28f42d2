#include "dessim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dessim/error.hpp"

namespace dessim {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("Rng::below requires a positive bound");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::standard_normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string_view to_string(ArrivalKind kind) {
  switch (kind) {
    case ArrivalKind::poisson: return "poisson";
    case ArrivalKind::exponential: return "exponential";
    case ArrivalKind::closed_loop: return "closed-loop";
  }
  return "unknown";
}

ArrivalKind parse_arrival_kind(std::string_view text) {
  if (text == "poisson") return ArrivalKind::poisson;
  if (text == "exponential") return ArrivalKind::exponential;
  if (text == "closed-loop") return ArrivalKind::closed_loop;
  throw ParameterError("unknown arrival model '" + std::string(text) + "'");
}

std::size_t schedule_size(const ArrivalSchedule& schedule) {
  if (const auto* open = std::get_if<OpenLoopSchedule>(&schedule)) return open->times.size();
  return std::get<ClosedLoopSchedule>(schedule).n_requests;
}

namespace {

void check_open_loop_params(double mean_ms, std::size_t n, const char* what) {
  if (!(mean_ms > 0.0) || !std::isfinite(mean_ms)) {
    throw ParameterError(std::string(what) + " must be positive and finite, got " +
                         std::to_string(mean_ms));
  }
  if (n == 0) throw ParameterError("number of arrivals must be at least 1");
}

// Inverse-CDF sampler for Poisson(lambda) over a window holding all but a
// negligible tail of the mass.
class PoissonTable {
 public:
  explicit PoissonTable(double lambda) {
    const double spread = 40.0 * std::sqrt(lambda) + 40.0;
    lo_ = static_cast<std::int64_t>(std::max(0.0, std::floor(lambda - spread)));
    const auto hi = static_cast<std::int64_t>(std::ceil(lambda + spread));
    if (hi - lo_ > 50'000'000) throw ParameterError("poisson lambda too large");
    cdf_.reserve(static_cast<std::size_t>(hi - lo_ + 1));
    const double log_lambda = std::log(lambda);
    double acc = 0.0;
    for (std::int64_t k = lo_; k <= hi; ++k) {
      const auto kd = static_cast<double>(k);
      acc += std::exp(kd * log_lambda - lambda - std::lgamma(kd + 1.0));
      cdf_.push_back(acc);
    }
  }

  std::int64_t sample(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return lo_ + (it - cdf_.begin());
  }

 private:
  std::int64_t lo_ = 0;
  std::vector<double> cdf_;
};

}  // namespace

OpenLoopSchedule poisson_interarrivals(double lambda_ms, std::size_t n, std::uint64_t seed) {
  check_open_loop_params(lambda_ms, n, "poisson lambda_ms");
  OpenLoopSchedule schedule;
  schedule.times.reserve(n);
  schedule.times.emplace_back();
  if (n == 1) return schedule;

  const PoissonTable table(lambda_ms);
  Rng rng(seed);
  SimTime t{};
  for (std::size_t i = 1; i < n; ++i) {
    t = t + std::chrono::milliseconds(table.sample(rng));
    schedule.times.push_back(t);
  }
  return schedule;
}

OpenLoopSchedule exponential_interarrivals(double mean_ms, std::size_t n, std::uint64_t seed) {
  check_open_loop_params(mean_ms, n, "exponential mean_ms");
  OpenLoopSchedule schedule;
  schedule.times.reserve(n);
  schedule.times.emplace_back();
  Rng rng(seed);
  SimTime t{};
  const double mean_us = mean_ms * 1000.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double gap = -mean_us * std::log1p(-rng.uniform());
    t = t + Duration(std::llround(gap));
    schedule.times.push_back(t);
  }
  return schedule;
}

ArrivalSchedule make_schedule(const ArrivalModel& model, std::size_t n, std::uint64_t seed) {
  switch (model.kind) {
    case ArrivalKind::poisson: return poisson_interarrivals(model.lambda_ms, n, seed);
    case ArrivalKind::exponential: return exponential_interarrivals(model.lambda_ms, n, seed);
    case ArrivalKind::closed_loop:
      if (n == 0) throw ParameterError("number of arrivals must be at least 1");
      return ClosedLoopSchedule{n};
  }
  throw ParameterError("unknown arrival model");
}

TraceFile synth_trace(std::size_t n_entries, double cold_duration_ms, double warm_mean_ms,
                      double warm_dispersion, std::uint64_t seed, std::string id) {
  if (n_entries < 2) throw ParameterError("synthetic trace needs at least 2 entries");
  if (!(cold_duration_ms > 0.0) || !std::isfinite(cold_duration_ms)) {
    throw ParameterError("cold_duration_ms must be positive");
  }
  if (!(warm_mean_ms > 0.0) || !std::isfinite(warm_mean_ms)) {
    throw ParameterError("warm_mean_ms must be positive");
  }
  if (!(warm_dispersion >= 0.0) || !std::isfinite(warm_dispersion)) {
    throw ParameterError("warm_dispersion must be non-negative");
  }
  const Duration cold = duration_from_ms(cold_duration_ms);
  if (cold <= Duration::zero()) throw ParameterError("cold_duration_ms rounds to zero microseconds");

  TraceFile trace;
  trace.id = std::move(id);
  trace.entries.reserve(n_entries);
  trace.entries.push_back({cold, 200});

  // mean of exp(N(mu, s^2)) is exp(mu + s^2 / 2)
  const double log_mean = std::log(warm_mean_ms * 1000.0) - 0.5 * warm_dispersion * warm_dispersion;
  Rng rng(seed);
  for (std::size_t i = 1; i < n_entries; ++i) {
    const double us = std::exp(log_mean + warm_dispersion * rng.standard_normal());
    trace.entries.push_back({Duration(std::max<std::int64_t>(1, std::llround(us))), 200});
  }
  return trace;
}

}  // namespace dessim
