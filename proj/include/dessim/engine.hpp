#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dessim/time.hpp"
#include "dessim/trace.hpp"
#include "dessim/workload.hpp"

namespace dessim {

using ReplicaId = std::int64_t;
using RequestId = std::int64_t;

enum class ReplicaState { busy, available, terminated };

struct Replica {
  ReplicaId id = 0;
  ReplicaTrace trace;
  ReplicaState state = ReplicaState::busy;
  SimTime available_since{};  // meaningful only while available
  SimTime created_at{};
  std::optional<SimTime> terminated_at;
};

struct ResponseRecord {
  RequestId request_id = 0;
  SimTime arrival{};
  SimTime start{};
  Duration duration{0};
  int status_code = 0;
  ReplicaId replica_id = 0;
  bool cold_start = false;

  SimTime completion() const { return start + duration; }
  bool operator==(const ResponseRecord&) const = default;
};

struct TraceAssignment {
  ReplicaId replica_id = 0;
  std::string trace_id;
  SimTime at{};

  bool operator==(const TraceAssignment&) const = default;
};

inline constexpr Duration kDefaultIdleTimeout = std::chrono::minutes(5);
inline constexpr double kDefaultWarmupFraction = 0.05;

struct SimulationConfig {
  std::vector<TraceFile> trace_files;
  std::size_t n_requests = 1;
  ArrivalModel arrival_model;
  Duration idle_timeout = kDefaultIdleTimeout;
  std::uint64_t seed = 0;
  double warmup_fraction = kDefaultWarmupFraction;
};

// Throws ConfigError / InputError on an unusable configuration.
void validate_config(const SimulationConfig& config);

struct SimulationResult {
  std::vector<ResponseRecord> records;  // arrival order
  std::size_t replicas_created = 0;
  std::size_t cold_start_count = 0;
  std::vector<TraceAssignment> trace_assignment_log;

  bool operator==(const SimulationResult&) const = default;
};

// Load balancer: the available, non-expired replica that most recently
// became available; ties go to the lowest id.
std::optional<ReplicaId> select_available_replica(std::span<const Replica> replicas, SimTime now,
                                                  Duration idle_timeout);

// Terminates every available replica idle for at least idle_timeout and
// returns their ids in ascending order. Busy replicas are untouched.
std::vector<ReplicaId> expire_idle_replicas(std::span<Replica> replicas, SimTime now,
                                            Duration idle_timeout);

// Picks the trace for a newly created replica: the first never-assigned file
// in configuration order, otherwise the least recently assigned one. Appends
// the assignment to the log and returns the index into trace_files.
std::size_t acquire_trace(std::span<const TraceFile> trace_files,
                          std::vector<TraceAssignment>& assignment_log, ReplicaId replica,
                          SimTime now);

// Runs one simulation. Events at equal timestamps are processed as
// completions, then arrivals, then idle expiry; ids break remaining ties.
// Requests never queue: an arrival with no available replica creates one.
SimulationResult run_simulation(const SimulationConfig& config, const ArrivalSchedule& schedule);

// Convenience: builds the schedule from config.arrival_model and config.seed.
SimulationResult run_simulation(const SimulationConfig& config);

}  // namespace dessim
