#pragma once

#include <chrono>
#include <compare>
#include <cstdint>

namespace dessim {

// All engine arithmetic happens on integer microseconds.
using Duration = std::chrono::microseconds;

// Point on the simulated timeline, measured from simulation start.
class SimTime {
 public:
  constexpr SimTime() = default;
  constexpr explicit SimTime(Duration since_start) : since_start_(since_start) {}

  static constexpr SimTime from_us(std::int64_t us) { return SimTime(Duration(us)); }

  constexpr std::int64_t us() const { return since_start_.count(); }
  constexpr Duration since_start() const { return since_start_; }

  friend constexpr SimTime operator+(SimTime t, Duration d) { return SimTime(t.since_start_ + d); }
  friend constexpr Duration operator-(SimTime a, SimTime b) { return a.since_start_ - b.since_start_; }

  constexpr auto operator<=>(const SimTime&) const = default;

 private:
  Duration since_start_{0};
};

inline double to_ms(Duration d) { return static_cast<double>(d.count()) / 1000.0; }

// Rounds a real millisecond quantity to the nearest microsecond.
Duration duration_from_ms(double ms);

}  // namespace dessim
