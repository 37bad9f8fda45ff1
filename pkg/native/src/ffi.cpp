// Handle registry behind the C boundary.
//
// Handles are opaque ids looked up in a table, never raw pointers, so
// calls on destroyed or garbage handles fail with JT_ERR_BAD_HANDLE
// instead of touching freed memory.

#include "jouletrack/energy_ffi.h"

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "core.hpp"

namespace {

std::mutex g_registry_mutex;
std::unordered_map<std::uintptr_t, std::unique_ptr<jtcore::Tracker>> g_registry;
std::uintptr_t g_next_id = 1;

thread_local std::string t_last_error = "ok";

jt_tracker *register_tracker(std::unique_ptr<jtcore::Tracker> tracker) {
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  const std::uintptr_t id = g_next_id++;
  g_registry.emplace(id, std::move(tracker));
  return reinterpret_cast<jt_tracker *>(id);
}

jtcore::Tracker *lookup(jt_tracker *handle) {
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  auto it = g_registry.find(reinterpret_cast<std::uintptr_t>(handle));
  return it == g_registry.end() ? nullptr : it->second.get();
}

int run(jt_tracker *handle, jtcore::Status (jtcore::Tracker::*method)()) {
  jtcore::Tracker *tracker = lookup(handle);
  if (tracker == nullptr) {
    t_last_error = "invalid tracker handle";
    return JT_ERR_BAD_HANDLE;
  }
  const jtcore::Status status = (tracker->*method)();
  if (status != jtcore::Status::kOk) t_last_error = tracker->error();
  return static_cast<int>(status);
}

}  // namespace

extern "C" {

jt_tracker *jt_create(void) { return jt_create_labeled("measurement"); }

jt_tracker *jt_create_labeled(const char *label) {
  const std::string name = (label == nullptr || *label == '\0')
                               ? std::string("measurement")
                               : std::string(label);
  return register_tracker(std::make_unique<jtcore::Tracker>(name));
}

int jt_start(jt_tracker *handle) { return run(handle, &jtcore::Tracker::start); }

int jt_stop(jt_tracker *handle) { return run(handle, &jtcore::Tracker::stop); }

int jt_calculate(jt_tracker *handle) {
  return run(handle, &jtcore::Tracker::calculate);
}

int jt_print(jt_tracker *handle) {
  return run(handle, &jtcore::Tracker::print_block);
}

int jt_save_csv(jt_tracker *handle, const char *path) {
  jtcore::Tracker *tracker = lookup(handle);
  if (tracker == nullptr) {
    t_last_error = "invalid tracker handle";
    return JT_ERR_BAD_HANDLE;
  }
  if (path == nullptr || *path == '\0') {
    t_last_error = "save_csv: empty path";
    return JT_ERR_IO;
  }
  const jtcore::Status status = tracker->save_csv(path);
  if (status != jtcore::Status::kOk) t_last_error = tracker->error();
  return static_cast<int>(status);
}

int jt_destroy(jt_tracker *handle) {
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  auto it = g_registry.find(reinterpret_cast<std::uintptr_t>(handle));
  if (it == g_registry.end()) {
    t_last_error = "invalid tracker handle";
    return JT_ERR_BAD_HANDLE;
  }
  g_registry.erase(it);
  return JT_OK;
}

const char *jt_last_error(void) { return t_last_error.c_str(); }

}  // extern "C"
