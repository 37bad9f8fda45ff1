#include "algorithms.hpp"
#include "runner.hpp"

int main(int argc, char **argv) {
  return tasks::run_task("n_body", 60000, argc, argv, [](long long steps) {
    return tasks::n_body(steps);
  });
}
