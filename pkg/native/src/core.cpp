#include "core.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>

namespace fs = std::filesystem;

namespace jtcore {
namespace {

const std::regex kZoneDirRe("^(intel-rapl[^:]*):([0-9]+)$");
const std::regex kSubzoneDirRe("^(intel-rapl[^:]*):([0-9]+):([0-9]+)$");
const std::regex kNameRe("^[A-Za-z0-9_.-]+$");

bool fake_clock_enabled(long long *wall_ms) {
  const char *value = std::getenv("ENERGY_FAKE_CLOCK");
  if (value == nullptr || *value == '\0') return false;
  *wall_ms = std::strtoll(value, nullptr, 10);
  return true;
}

long long mono_ns() {
  long long ignored;
  if (fake_clock_enabled(&ignored)) return 0;
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

long long wall_ms() {
  long long fixed;
  if (fake_clock_enabled(&fixed)) return fixed;
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

fs::path powercap_root() {
  const char *env = std::getenv("ENERGY_PROBE_ROOT");
  if (env != nullptr && *env != '\0') return fs::path(env);
  return fs::path("/sys/class/powercap");
}

std::string trim(const std::string &text) {
  std::size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

bool read_text(const fs::path &path, std::string *out, std::string *error) {
  std::ifstream stream(path);
  if (!stream) {
    *error = "cannot read " + path.string();
    return false;
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  *out = buffer.str();
  return true;
}

bool read_u64(const fs::path &path, u64 *out, std::string *error) {
  std::string text;
  if (!read_text(path, &text, error)) return false;
  const std::string body = trim(text);
  if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos) {
    *error = path.string() + ": expected an integer, got '" + body + "'";
    return false;
  }
  errno = 0;
  *out = std::strtoull(body.c_str(), nullptr, 10);
  if (errno != 0) {
    *error = path.string() + ": value out of range";
    return false;
  }
  return true;
}

// GPU total-energy query loaded at runtime; absence means degraded mode.
class GpuBackend {
 public:
  static GpuBackend *try_load() {
    if (std::getenv("ENERGY_DISABLE_GPU") != nullptr) return nullptr;
    void *lib = dlopen("libnvidia-ml.so.1", RTLD_LAZY);
    if (lib == nullptr) lib = dlopen("libnvidia-ml.so", RTLD_LAZY);
    if (lib == nullptr) return nullptr;
    auto backend = new GpuBackend(lib);
    if (!backend->init()) {
      delete backend;
      return nullptr;
    }
    return backend;
  }

  unsigned device_count() {
    unsigned count = 0;
    if (get_count_(&count) != 0) return 0;
    return count;
  }

  bool total_energy_mj(unsigned index, u64 *out) {
    void *handle = nullptr;
    if (get_handle_(index, &handle) != 0) return false;
    unsigned long long energy = 0;
    if (get_energy_(handle, &energy) != 0) return false;
    *out = energy;
    return true;
  }

 private:
  explicit GpuBackend(void *lib) : lib_(lib) {}

  bool init() {
    auto init_fn = reinterpret_cast<int (*)()>(dlsym(lib_, "nvmlInit_v2"));
    get_count_ = reinterpret_cast<int (*)(unsigned *)>(
        dlsym(lib_, "nvmlDeviceGetCount_v2"));
    get_handle_ = reinterpret_cast<int (*)(unsigned, void **)>(
        dlsym(lib_, "nvmlDeviceGetHandleByIndex_v2"));
    get_energy_ = reinterpret_cast<int (*)(void *, unsigned long long *)>(
        dlsym(lib_, "nvmlDeviceGetTotalEnergyConsumption"));
    if (init_fn == nullptr || get_count_ == nullptr || get_handle_ == nullptr ||
        get_energy_ == nullptr) {
      return false;
    }
    return init_fn() == 0;
  }

  void *lib_;
  int (*get_count_)(unsigned *) = nullptr;
  int (*get_handle_)(unsigned, void **) = nullptr;
  int (*get_energy_)(void *, unsigned long long *) = nullptr;
};

GpuBackend *gpu_backend() {
  static GpuBackend *backend = GpuBackend::try_load();
  return backend;
}

struct ScanResult {
  bool supported = false;
  std::string message;
  std::vector<Channel> channels;
};

// Mirrors the reference discovery: zone dirs shortest-prefix first so a
// variant interface mirroring a plain zone under the same id is skipped,
// channels sorted by id at the end.
ScanResult scan_cpu_channels() {
  ScanResult result;
  const fs::path root = powercap_root();
  std::error_code ec;
  std::vector<fs::path> zone_dirs;
  for (const auto &entry : fs::directory_iterator(root, ec)) {
    if (entry.is_directory() &&
        std::regex_match(entry.path().filename().string(), kZoneDirRe)) {
      zone_dirs.push_back(entry.path());
    }
  }
  if (ec || zone_dirs.empty()) {
    result.message = "no intel-rapl zones under " + root.string() +
                     "; host has no usable CPU energy interface";
    return result;
  }
  std::sort(zone_dirs.begin(), zone_dirs.end(),
            [](const fs::path &a, const fs::path &b) {
              const std::string an = a.filename().string();
              const std::string bn = b.filename().string();
              return std::make_pair(an.size(), an) < std::make_pair(bn.size(), bn);
            });

  std::vector<std::string> seen;
  auto emit = [&](const std::string &id, const std::string &name, u64 range,
                  const fs::path &dir) {
    if (std::find(seen.begin(), seen.end(), id) != seen.end()) return;
    seen.push_back(id);
    result.channels.push_back(Channel{id, name, range, dir, false, 0});
  };

  for (const auto &zone_dir : zone_dirs) {
    std::smatch match;
    const std::string dir_name = zone_dir.filename().string();
    std::regex_match(dir_name, match, kZoneDirRe);
    const std::string socket = match[2].str();

    std::string name_text, error;
    if (!read_text(zone_dir / "name", &name_text, &error)) {
      result.message = error;
      return result;
    }
    const std::string name = trim(name_text);
    if (!std::regex_match(name, kNameRe)) {
      result.message = (zone_dir / "name").string() + ": malformed zone name";
      return result;
    }
    u64 range = 0;
    if (!read_u64(zone_dir / "max_energy_range_uj", &range, &error) || range == 0) {
      result.message = error.empty()
                           ? (zone_dir / "max_energy_range_uj").string() +
                                 ": range must be positive"
                           : error;
      return result;
    }
    const std::string zone_id = "cpu:" + socket + ":" + name;
    emit(zone_id, name, range, zone_dir);

    std::vector<fs::path> sub_dirs;
    for (const auto &sub : fs::directory_iterator(zone_dir, ec)) {
      if (sub.is_directory() &&
          std::regex_match(sub.path().filename().string(), kSubzoneDirRe)) {
        sub_dirs.push_back(sub.path());
      }
    }
    std::sort(sub_dirs.begin(), sub_dirs.end());
    for (const auto &sub_dir : sub_dirs) {
      if (!read_text(sub_dir / "name", &name_text, &error)) {
        result.message = error;
        return result;
      }
      const std::string sub_name = trim(name_text);
      if (!std::regex_match(sub_name, kNameRe)) {
        result.message = (sub_dir / "name").string() + ": malformed zone name";
        return result;
      }
      u64 sub_range = 0;
      if (!read_u64(sub_dir / "max_energy_range_uj", &sub_range, &error) ||
          sub_range == 0) {
        result.message = error;
        return result;
      }
      emit(zone_id + ":" + sub_name, sub_name, sub_range, sub_dir);
    }
  }
  std::sort(result.channels.begin(), result.channels.end(),
            [](const Channel &a, const Channel &b) { return a.id < b.id; });
  result.supported = true;
  result.message = "powercap tree at " + root.string();
  return result;
}

}  // namespace

u64 corrected_delta(u64 start, u64 end, u64 max_range) {
  if (end >= start) return end - start;
  return end + (max_range - start);
}

std::string joules_str(u64 microjoules) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%llu.%06llu",
                static_cast<unsigned long long>(microjoules / 1000000ULL),
                static_cast<unsigned long long>(microjoules % 1000000ULL));
  return std::string(buffer);
}

std::string format_print_block(const Measurement &m) {
  std::ostringstream out;
  for (const auto &[id, uj] : m.energy) {
    out << id << " = " << joules_str(uj) << " J\n";
  }
  out << "runtime = " << m.duration_ms << " ms";
  if (m.degraded_gpu) out << "\ngpu: unavailable";
  return out.str();
}

std::string format_csv_header(const Measurement &m) {
  std::string header = "label,wall_start_ms,duration_ms";
  for (const auto &[id, uj] : m.energy) {
    (void)uj;
    header += "," + id + "_J";
  }
  return header;
}

std::string format_csv_row(const Measurement &m) {
  std::ostringstream row;
  row << m.label << "," << m.wall_start_ms << "," << m.duration_ms;
  for (const auto &[id, uj] : m.energy) {
    (void)id;
    row << "," << joules_str(uj);
  }
  return row.str();
}

Tracker::Tracker(std::string label) : label_(std::move(label)) {
  ScanResult scan = scan_cpu_channels();
  supported_ = scan.supported;
  support_message_ = scan.message;
  channels_ = std::move(scan.channels);
  if (GpuBackend *gpu = gpu_backend()) {
    degraded_gpu_ = false;
    const unsigned count = gpu->device_count();
    for (unsigned index = 0; index < count; ++index) {
      channels_.push_back(Channel{"gpu:" + std::to_string(index),
                                  "gpu-" + std::to_string(index),
                                  kGpuCounterRange, fs::path(), true, index});
    }
    std::sort(channels_.begin(), channels_.end(),
              [](const Channel &a, const Channel &b) { return a.id < b.id; });
  }
}

Status Tracker::fail(Status status, std::string message) {
  error_ = std::move(message);
  return status;
}

bool Tracker::read_all(std::vector<u64> *out) {
  out->clear();
  out->reserve(channels_.size());
  for (const auto &channel : channels_) {
    u64 value = 0;
    if (channel.is_gpu) {
      if (!gpu_backend()->total_energy_mj(channel.gpu_index, &value)) {
        error_ = channel.id + ": driver query failed";
        return false;
      }
      value *= 1000;  // millijoules to microjoules, exact
    } else {
      std::string error;
      if (!read_u64(channel.zone_dir / "energy_uj", &value, &error)) {
        error_ = channel.id + ": " + error;
        return false;
      }
      if (value > channel.max_range) {
        error_ = channel.id + ": reading above declared range";
        return false;
      }
    }
    out->push_back(value);
  }
  return true;
}

Status Tracker::start() {
  if (!supported_) return fail(Status::kUnsupported, support_message_);
  if (open_) return fail(Status::kLifecycle, "start() while an interval is open");
  if (!wall_start_ms_.has_value()) wall_start_ms_ = wall_ms();
  const long long mono = mono_ns();
  std::vector<u64> values;
  if (!read_all(&values)) return Status::kIo;
  open_values_ = std::move(values);
  open_mono_ns_ = mono;
  open_ = true;
  return Status::kOk;
}

Status Tracker::stop() {
  if (!supported_) return fail(Status::kUnsupported, support_message_);
  if (!open_) return fail(Status::kLifecycle, "stop() with no open interval");
  std::vector<u64> values;
  if (!read_all(&values)) {
    open_ = false;  // no partial intervals
    return Status::kIo;
  }
  std::vector<u64> deltas(channels_.size());
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    deltas[i] =
        corrected_delta(open_values_[i], values[i], channels_[i].max_range);
  }
  long long duration = mono_ns() - open_mono_ns_;
  if (duration <= 0) duration = 1;
  closed_deltas_.push_back(std::move(deltas));
  closed_ns_ += duration;
  open_ = false;
  return Status::kOk;
}

Status Tracker::calculate() {
  if (!supported_) return fail(Status::kUnsupported, support_message_);
  if (open_) {
    return fail(Status::kLifecycle, "calculate() while an interval is open");
  }
  if (closed_deltas_.empty()) {
    return fail(Status::kLifecycle, "calculate() before any closed interval");
  }
  Measurement m;
  m.label = label_;
  m.wall_start_ms = wall_start_ms_.value();
  long long ms = (closed_ns_ + 500000) / 1000000;
  m.duration_ms = ms < 1 ? 1 : ms;
  m.degraded_gpu = degraded_gpu_;
  m.energy.reserve(channels_.size());
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    u64 total = 0;
    for (const auto &deltas : closed_deltas_) total += deltas[i];
    m.energy.emplace_back(channels_[i].id, total);
  }
  result_ = std::move(m);
  return Status::kOk;
}

Status Tracker::print_block() {
  if (!result_.has_value()) {
    return fail(Status::kLifecycle, "print before calculate");
  }
  std::printf("%s\n", format_print_block(*result_).c_str());
  return Status::kOk;
}

Status Tracker::save_csv(const std::string &path) {
  if (!result_.has_value()) {
    return fail(Status::kLifecycle, "save_csv before calculate");
  }
  const std::string header = format_csv_header(*result_);
  std::error_code ec;
  const bool exists = fs::exists(fs::path(path), ec);
  if (exists) {
    std::ifstream in(path);
    std::string first_line;
    if (!in || !std::getline(in, first_line)) {
      return fail(Status::kIo, "cannot read existing file " + path);
    }
    if (first_line != header) {
      return fail(Status::kIo, path + ": existing header does not match");
    }
    std::ofstream out(path, std::ios::app);
    if (!out) return fail(Status::kIo, "cannot append to " + path);
    out << format_csv_row(*result_) << "\n";
    if (!out) return fail(Status::kIo, "write failed for " + path);
  } else {
    std::ofstream out(path);
    if (!out) return fail(Status::kIo, "cannot write " + path);
    out << header << "\n" << format_csv_row(*result_) << "\n";
    if (!out) return fail(Status::kIo, "write failed for " + path);
  }
  return Status::kOk;
}

}  // namespace jtcore
