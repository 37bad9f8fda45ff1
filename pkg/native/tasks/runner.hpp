// Shared scaffolding for the instrumented example programs.
//
// Usage: <task> [--size N | --steps N] [--out file.csv]
// Prints the task name, measures the workload, prints the energy block and
// appends one CSV row. Exit codes: 0 ok, 1 wrong computational result,
// 2 bad arguments, 3 measurement or I/O failure. ENERGY_PROBE_ROOT is
// honored, so fixture trees work without hardware.

#ifndef JOULETRACK_TASK_RUNNER_HPP
#define JOULETRACK_TASK_RUNNER_HPP

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "jouletrack/energy_tracker.hpp"

namespace tasks {

template <typename Workload>
int run_task(const char *name, long long default_size, int argc, char **argv,
             Workload workload) {
  long long size = default_size;
  std::string out = std::string(name) + ".csv";
  for (int i = 1; i < argc; ++i) {
    const char *arg = argv[i];
    if ((std::strcmp(arg, "--size") == 0 || std::strcmp(arg, "--steps") == 0) &&
        i + 1 < argc) {
      size = std::strtoll(argv[++i], nullptr, 10);
    } else if (std::strcmp(arg, "--out") == 0 && i + 1 < argc) {
      out = argv[++i];
    } else {
      std::fprintf(stderr,
                   "usage: %s [--size N | --steps N] [--out file.csv]\n", name);
      return 2;
    }
  }
  if (size <= 0) {
    std::fprintf(stderr, "%s: size must be positive, got %lld\n", name, size);
    return 2;
  }

  std::printf("%s\n", name);
  EnergyTracker tracker(name);
  int status = tracker.start();
  if (status != JT_OK) {
    std::fprintf(stderr, "%s: cannot start measurement (status %d): %s\n",
                 name, status, tracker.last_error());
    return 3;
  }

  const bool ok = workload(size);

  status = tracker.stop();
  if (status == JT_OK) status = tracker.calculate_energy();
  if (status != JT_OK) {
    std::fprintf(stderr, "%s: measurement failed (status %d): %s\n", name,
                 status, tracker.last_error());
    return 3;
  }
  if (!ok) {
    std::fprintf(stderr,
                 "%s: result verification failed; measurement is void\n",
                 name);
    return 1;
  }
  tracker.print_energy();
  status = tracker.save_csv(out);
  if (status != JT_OK) {
    std::fprintf(stderr, "%s: cannot save %s (status %d): %s\n", name,
                 out.c_str(), status, tracker.last_error());
    return 3;
  }
  return 0;
}

}  // namespace tasks

#endif  // JOULETRACK_TASK_RUNNER_HPP
