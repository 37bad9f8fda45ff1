#include "algorithms.hpp"
#include "runner.hpp"

int main(int argc, char **argv) {
  return tasks::run_task("matrix_mul", 2000, argc, argv, [](long long n) {
    return tasks::matrix_mul(n);
  });
}
