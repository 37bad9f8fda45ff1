// Convenience C++ wrapper over the C boundary.
//
// Mirrors the classic five-call measurement pattern:
//
//     EnergyTracker tracker;
//     tracker.start();
//     // Place your code or function calls here
//     tracker.stop();
//     tracker.calculate_energy();
//     tracker.save_csv("file_name.csv");
//
// Every method returns the boundary status code (JT_OK on success); the
// snippet above compiles and runs as-is, ignoring the codes.

#ifndef JOULETRACK_ENERGY_TRACKER_HPP
#define JOULETRACK_ENERGY_TRACKER_HPP

#include <string>

#include "energy_ffi.h"

class EnergyTracker {
 public:
  EnergyTracker() : handle_(jt_create()) {}
  explicit EnergyTracker(const std::string &label)
      : handle_(jt_create_labeled(label.c_str())) {}

  ~EnergyTracker() {
    if (handle_ != nullptr) jt_destroy(handle_);
  }

  EnergyTracker(const EnergyTracker &) = delete;
  EnergyTracker &operator=(const EnergyTracker &) = delete;

  EnergyTracker(EnergyTracker &&other) noexcept : handle_(other.handle_) {
    other.handle_ = nullptr;
  }
  EnergyTracker &operator=(EnergyTracker &&other) noexcept {
    if (this != &other) {
      if (handle_ != nullptr) jt_destroy(handle_);
      handle_ = other.handle_;
      other.handle_ = nullptr;
    }
    return *this;
  }

  int start() { return jt_start(handle_); }
  int stop() { return jt_stop(handle_); }
  int calculate_energy() { return jt_calculate(handle_); }
  int print_energy() { return jt_print(handle_); }
  int save_csv(const std::string &path) {
    return jt_save_csv(handle_, path.c_str());
  }

  const char *last_error() const { return jt_last_error(); }
  jt_tracker *handle() const { return handle_; }

 private:
  jt_tracker *handle_;
};

#endif  // JOULETRACK_ENERGY_TRACKER_HPP
