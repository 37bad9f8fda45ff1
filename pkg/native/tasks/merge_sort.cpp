#include "algorithms.hpp"
#include "runner.hpp"

int main(int argc, char **argv) {
  return tasks::run_task("merge_sort", 20000000, argc, argv, [](long long n) {
    return tasks::run_sort_task(n, tasks::merge_sort);
  });
}
