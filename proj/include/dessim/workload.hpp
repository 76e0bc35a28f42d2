#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dessim/time.hpp"
#include "dessim/trace.hpp"

namespace dessim {

// Portable random stream. std::mt19937_64's output sequence is fixed by the
// standard; the distribution transforms below are implemented here rather
// than with <random> distributions, whose algorithms vary between standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer on [0, bound), bound > 0, rejection-sampled.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via Box-Muller, one value per call.
  double standard_normal();

 private:
  std::mt19937_64 engine_;
};

// Independent per-stream seed (splitmix64 of base + index), used to give
// each generated trace file or simulation run its own stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

enum class ArrivalKind { poisson, exponential, closed_loop };

std::string_view to_string(ArrivalKind kind);
ArrivalKind parse_arrival_kind(std::string_view text);

struct ArrivalModel {
  ArrivalKind kind = ArrivalKind::poisson;
  double lambda_ms = 0.0;  // mean gap; ignored for closed_loop
};

// Open-loop arrival times, starting at 0 and non-decreasing.
struct OpenLoopSchedule {
  std::vector<SimTime> times;
};

// Each request is issued when the previous one completes.
struct ClosedLoopSchedule {
  std::size_t n_requests = 0;
};

using ArrivalSchedule = std::variant<OpenLoopSchedule, ClosedLoopSchedule>;

std::size_t schedule_size(const ArrivalSchedule& schedule);

// Gaps are Poisson(lambda_ms) whole milliseconds. Sampling inverts a
// precomputed CDF table covering lambda +/- 40 sqrt(lambda) (+40), outside of
// which the tail mass is below double precision.
OpenLoopSchedule poisson_interarrivals(double lambda_ms, std::size_t n, std::uint64_t seed);

// Gaps are exponential with the given mean, rounded to whole microseconds.
OpenLoopSchedule exponential_interarrivals(double mean_ms, std::size_t n, std::uint64_t seed);

// Dispatches on model.kind; closed_loop yields a ClosedLoopSchedule of n.
ArrivalSchedule make_schedule(const ArrivalModel& model, std::size_t n, std::uint64_t seed);

// Synthetic trace: a fixed cold entry followed by n_entries - 1 log-normal
// warm durations with mean warm_mean_ms. warm_dispersion is the standard
// deviation of the underlying normal (log-space sigma). Durations are rounded
// to microseconds and clamped to at least 1 us; every status code is 200.
TraceFile synth_trace(std::size_t n_entries, double cold_duration_ms, double warm_mean_ms,
                      double warm_dispersion, std::uint64_t seed, std::string id = "synthetic");

}  // namespace dessim
