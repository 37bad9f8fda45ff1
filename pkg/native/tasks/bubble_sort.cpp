#include "algorithms.hpp"
#include "runner.hpp"

int main(int argc, char **argv) {
  return tasks::run_task("bubble_sort", 30000, argc, argv, [](long long n) {
    return tasks::run_sort_task(n, tasks::bubble_sort);
  });
}
