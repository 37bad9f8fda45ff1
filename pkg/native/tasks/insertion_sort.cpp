#include "algorithms.hpp"
#include "runner.hpp"

int main(int argc, char **argv) {
  return tasks::run_task("insertion_sort", 25000, argc, argv, [](long long n) {
    return tasks::run_sort_task(n, tasks::insertion_sort);
  });
}
