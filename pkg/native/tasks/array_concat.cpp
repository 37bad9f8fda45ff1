#include "algorithms.hpp"
#include "runner.hpp"

int main(int argc, char **argv) {
  return tasks::run_task("array_concat", 10000, argc, argv, [](long long n) {
    return tasks::array_concat(n);
  });
}
