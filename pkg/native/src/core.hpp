// Internal tracker engine behind the C boundary.
//
// Consumes the same external contracts as the reference toolkit: the
// powercap tree layout (ENERGY_PROBE_ROOT override), the
// cpu:<socket>:<domain>[:<sub>] / gpu:<index> channel id scheme, and the
// frozen CSV schema, so measurements from either side are interchangeable.

#ifndef JOULETRACK_CORE_HPP
#define JOULETRACK_CORE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jtcore {

using u64 = std::uint64_t;

constexpr u64 kGpuCounterRange = ~static_cast<u64>(0);

// Single-wrap modular delta; inputs must already be <= max_range.
u64 corrected_delta(u64 start, u64 end, u64 max_range);

std::string joules_str(u64 microjoules);

struct Channel {
  std::string id;
  std::string name;
  u64 max_range = 0;
  std::filesystem::path zone_dir;  // empty for GPU channels
  bool is_gpu = false;
  unsigned gpu_index = 0;
};

struct Measurement {
  std::string label;
  long long wall_start_ms = 0;
  long long duration_ms = 0;
  std::vector<std::pair<std::string, u64>> energy;  // sorted by channel id
  bool degraded_gpu = false;
};

std::string format_print_block(const Measurement &m);
std::string format_csv_header(const Measurement &m);
std::string format_csv_row(const Measurement &m);

enum class Status { kOk = 0, kLifecycle = 1, kUnsupported = 2, kIo = 3 };

class Tracker {
 public:
  explicit Tracker(std::string label);

  Status start();
  Status stop();
  Status calculate();
  Status print_block();
  Status save_csv(const std::string &path);

  const std::string &error() const { return error_; }

 private:
  bool read_all(std::vector<u64> *out);
  Status fail(Status status, std::string message);

  std::string label_;
  bool supported_ = false;
  std::string support_message_;
  bool degraded_gpu_ = true;
  std::vector<Channel> channels_;  // sorted by id

  bool open_ = false;
  std::vector<u64> open_values_;
  long long open_mono_ns_ = 0;
  std::optional<long long> wall_start_ms_;
  std::vector<std::vector<u64>> closed_deltas_;
  long long closed_ns_ = 0;

  std::optional<Measurement> result_;
  std::string error_;
};

}  // namespace jtcore

#endif  // JOULETRACK_CORE_HPP
