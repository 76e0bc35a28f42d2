#include "dessim/trace.hpp"

#include <cmath>
#include <string>

#include "dessim/error.hpp"

namespace dessim {

Duration duration_from_ms(double ms) {
  if (!std::isfinite(ms)) throw ParameterError("duration must be finite");
  return Duration(std::llround(ms * 1000.0));
}

void validate_entry(const TraceEntry& entry) {
  if (entry.duration <= Duration::zero()) {
    throw InputError("trace entry duration must be positive, got " +
                     std::to_string(entry.duration.count()) + " us");
  }
  if (entry.status_code < 100 || entry.status_code > 599) {
    throw InputError("trace entry status code out of range: " + std::to_string(entry.status_code));
  }
}

void validate_trace(const TraceFile& trace) {
  if (trace.entries.size() < 2) {
    throw InputError("trace '" + trace.id + "' needs at least 2 entries (cold start + warm), has " +
                     std::to_string(trace.entries.size()));
  }
  for (const auto& e : trace.entries) validate_entry(e);
}

ReplicaTrace::ReplicaTrace(const TraceFile& file, std::size_t cursor)
    : file_(&file), cursor_(cursor) {
  if (cursor > file.entries.size()) throw ParameterError("replica trace cursor past end of file");
}

TraceEntry ReplicaTrace::next_entry() {
  const auto& entries = file_->entries;
  if (cursor_ >= entries.size()) cursor_ = 1;  // skip the cold-start entry on wrap
  return entries[cursor_++];
}

}  // namespace dessim
