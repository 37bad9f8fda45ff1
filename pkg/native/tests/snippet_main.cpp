// The canonical five-call usage pattern, compiled against the embedding
// header exactly as a user would write it. The parity test runs this over
// a fixture root and compares the CSV byte-for-byte against the reference
// toolkit's output.

#include <jouletrack/energy_tracker.hpp>

int main() {
  EnergyTracker tracker;
  tracker.start();
  // Place your code or function calls here
  tracker.stop();
  tracker.calculate_energy();
  tracker.save_csv("file_name.csv");
  return 0;
}
