#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dessim/time.hpp"

namespace dessim {

// One measured invocation.
struct TraceEntry {
  Duration duration{0};
  int status_code = 200;

  bool operator==(const TraceEntry&) const = default;
};

// Throws InputError unless duration > 0 and status_code is in [100, 599].
void validate_entry(const TraceEntry& entry);

// An ordered measured trace. entries[0] is the cold-start invocation; the
// rest are warm invocations replayed in order.
struct TraceFile {
  std::string id;
  std::vector<TraceEntry> entries;

  bool operator==(const TraceFile&) const = default;
};

// Throws InputError on fewer than two entries or any invalid entry.
void validate_trace(const TraceFile& trace);

// Per-replica replay position within a shared trace file.
//
// Reads return entries[cursor] and advance. When the cursor has run off the
// end, it wraps to 1 so the cold-start entry is consumed only once per
// replica.
class ReplicaTrace {
 public:
  explicit ReplicaTrace(const TraceFile& file) : file_(&file) {}
  // Resumes at an explicit position; cursor must be <= entries.size().
  ReplicaTrace(const TraceFile& file, std::size_t cursor);

  const TraceFile& file() const { return *file_; }
  std::size_t cursor() const { return cursor_; }

  TraceEntry next_entry();

 private:
  const TraceFile* file_;
  std::size_t cursor_ = 0;
};

}  // namespace dessim
