#include "dessim/engine.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "dessim/error.hpp"

namespace dessim {

void validate_config(const SimulationConfig& config) {
  if (config.trace_files.empty()) throw ConfigError("at least one trace file is required");
  if (config.n_requests == 0) throw ConfigError("n_requests must be at least 1");
  if (config.idle_timeout <= Duration::zero()) throw ConfigError("idle_timeout must be positive");
  if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction < 1.0)) {
    throw ConfigError("warmup_fraction must be in [0, 1)");
  }
  std::unordered_set<std::string> ids;
  for (const auto& trace : config.trace_files) {
    validate_trace(trace);
    if (!ids.insert(trace.id).second) throw ConfigError("duplicate trace id '" + trace.id + "'");
  }
}

std::optional<ReplicaId> select_available_replica(std::span<const Replica> replicas, SimTime now,
                                                  Duration idle_timeout) {
  const Replica* best = nullptr;
  for (const auto& r : replicas) {
    if (r.state != ReplicaState::available) continue;
    if (now - r.available_since >= idle_timeout) continue;
    if (best == nullptr || r.available_since > best->available_since ||
        (r.available_since == best->available_since && r.id < best->id)) {
      best = &r;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

std::vector<ReplicaId> expire_idle_replicas(std::span<Replica> replicas, SimTime now,
                                            Duration idle_timeout) {
  std::vector<ReplicaId> expired;
  for (auto& r : replicas) {
    if (r.state != ReplicaState::available) continue;
    if (now - r.available_since >= idle_timeout) {
      r.state = ReplicaState::terminated;
      r.terminated_at = r.available_since + idle_timeout;
      expired.push_back(r.id);
    }
  }
  std::sort(expired.begin(), expired.end());
  return expired;
}

std::size_t acquire_trace(std::span<const TraceFile> trace_files,
                          std::vector<TraceAssignment>& assignment_log, ReplicaId replica,
                          SimTime now) {
  if (trace_files.empty()) throw ConfigError("no trace files to assign");

  std::unordered_map<std::string_view, std::size_t> index_of;
  for (std::size_t i = 0; i < trace_files.size(); ++i) index_of.emplace(trace_files[i].id, i);

  // Position of the most recent assignment of each file in the log.
  std::vector<std::optional<std::size_t>> last_use(trace_files.size());
  for (std::size_t pos = 0; pos < assignment_log.size(); ++pos) {
    auto it = index_of.find(assignment_log[pos].trace_id);
    if (it != index_of.end()) last_use[it->second] = pos;
  }

  std::size_t chosen = 0;
  auto unused = std::find(last_use.begin(), last_use.end(), std::nullopt);
  if (unused != last_use.end()) {
    chosen = static_cast<std::size_t>(unused - last_use.begin());
  } else {
    for (std::size_t i = 1; i < last_use.size(); ++i) {
      if (*last_use[i] < *last_use[chosen]) chosen = i;
    }
  }
  assignment_log.push_back({replica, trace_files[chosen].id, now});
  return chosen;
}

namespace {

struct Completion {
  SimTime at;
  ReplicaId replica;
  bool operator>(const Completion& o) const {
    return at != o.at ? at > o.at : replica > o.replica;
  }
};

void check_schedule(const SimulationConfig& config, const ArrivalSchedule& schedule) {
  const std::size_t n = schedule_size(schedule);
  if (n != config.n_requests) {
    throw InputError("schedule has " + std::to_string(n) + " arrivals but n_requests is " +
                     std::to_string(config.n_requests));
  }
  if (const auto* open = std::get_if<OpenLoopSchedule>(&schedule)) {
    SimTime prev{};
    for (std::size_t i = 0; i < open->times.size(); ++i) {
      if (open->times[i] < prev) {
        throw InputError("arrival schedule is not non-decreasing at index " + std::to_string(i));
      }
      prev = open->times[i];
    }
  }
}

}  // namespace

SimulationResult run_simulation(const SimulationConfig& config, const ArrivalSchedule& schedule) {
  validate_config(config);
  check_schedule(config, schedule);

  const auto* open = std::get_if<OpenLoopSchedule>(&schedule);
  const std::span<const TraceFile> files(config.trace_files);

  SimulationResult result;
  result.records.reserve(config.n_requests);
  std::vector<Replica> replicas;  // replicas[i].id == i + 1
  std::priority_queue<Completion, std::vector<Completion>, std::greater<>> completions;

  for (std::size_t i = 0; i < config.n_requests; ++i) {
    SimTime now;
    if (open != nullptr) {
      now = open->times[i];
    } else {
      now = i == 0 ? SimTime{} : result.records.back().completion();
    }

    // Completions at or before the arrival free their replicas first.
    while (!completions.empty() && completions.top().at <= now) {
      auto& r = replicas[static_cast<std::size_t>(completions.top().replica - 1)];
      r.state = ReplicaState::available;
      r.available_since = completions.top().at;
      completions.pop();
    }
    expire_idle_replicas(replicas, now, config.idle_timeout);

    bool cold = false;
    auto chosen = select_available_replica(replicas, now, config.idle_timeout);
    if (!chosen) {
      const auto id = static_cast<ReplicaId>(replicas.size() + 1);
      const std::size_t file = acquire_trace(files, result.trace_assignment_log, id, now);
      replicas.push_back(Replica{.id = id,
                                 .trace = ReplicaTrace(files[file]),
                                 .state = ReplicaState::busy,
                                 .available_since = now,
                                 .created_at = now,
                                 .terminated_at = std::nullopt});
      chosen = id;
      cold = true;
    }

    auto& replica = replicas[static_cast<std::size_t>(*chosen - 1)];
    const TraceEntry entry = replica.trace.next_entry();
    replica.state = ReplicaState::busy;

    ResponseRecord record{.request_id = static_cast<RequestId>(i + 1),
                          .arrival = now,
                          .start = now,
                          .duration = entry.duration,
                          .status_code = entry.status_code,
                          .replica_id = replica.id,
                          .cold_start = cold};
    completions.push({record.completion(), replica.id});
    result.records.push_back(record);
  }

  result.replicas_created = replicas.size();
  result.cold_start_count = static_cast<std::size_t>(
      std::count_if(result.records.begin(), result.records.end(),
                    [](const ResponseRecord& r) { return r.cold_start; }));
  return result;
}

SimulationResult run_simulation(const SimulationConfig& config) {
  return run_simulation(config,
                        make_schedule(config.arrival_model, config.n_requests, config.seed));
}

}  // namespace dessim
