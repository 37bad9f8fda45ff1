// Self-verifying computational workloads for the instrumented examples.
//
// Each workload returns true only when its own result check passes; a
// measurement taken around a wrong computation is void, so the programs
// exit nonzero and skip the CSV row in that case.

#ifndef JOULETRACK_TASK_ALGORITHMS_HPP
#define JOULETRACK_TASK_ALGORITHMS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tasks {

inline std::vector<int> random_ints(std::size_t count, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(0, 1 << 30);
  std::vector<int> values(count);
  for (auto &v : values) v = dist(rng);
  return values;
}

inline bool is_ascending(const std::vector<int> &values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i - 1] > values[i]) return false;
  }
  return true;
}

inline long long checksum(const std::vector<int> &values) {
  long long sum = 0;
  for (int v : values) sum += v;
  return sum;
}

inline void insertion_sort(std::vector<int> &values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    int key = values[i];
    std::size_t j = i;
    while (j > 0 && values[j - 1] > key) {
      values[j] = values[j - 1];
      --j;
    }
    values[j] = key;
  }
}

inline void bubble_sort(std::vector<int> &values) {
  if (values.empty()) return;
  for (std::size_t pass = values.size() - 1; pass > 0; --pass) {
    bool swapped = false;
    for (std::size_t i = 0; i < pass; ++i) {
      if (values[i] > values[i + 1]) {
        std::swap(values[i], values[i + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
}

inline void merge_sort(std::vector<int> &values) {
  std::vector<int> buffer(values.size());
  for (std::size_t width = 1; width < values.size(); width *= 2) {
    for (std::size_t lo = 0; lo < values.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, values.size());
      const std::size_t hi = std::min(lo + 2 * width, values.size());
      std::size_t a = lo, b = mid, out = lo;
      while (a < mid && b < hi) {
        buffer[out++] = values[a] <= values[b] ? values[a++] : values[b++];
      }
      while (a < mid) buffer[out++] = values[a++];
      while (b < hi) buffer[out++] = values[b++];
    }
    values.swap(buffer);
  }
}

// Sorts `count` random ints with `sort`, verifying order and content.
template <typename SortFn>
bool run_sort_task(long long count, SortFn sort) {
  std::vector<int> values = random_ints(static_cast<std::size_t>(count), 42);
  const long long before = checksum(values);
  sort(values);
  return is_ascending(values) && checksum(values) == before;
}

// Repeated pairwise concatenation: `rounds` fresh a+b joins.
inline bool array_concat(long long rounds, std::size_t chunk = 100'000) {
  const std::vector<int> a = random_ints(chunk, 1);
  const std::vector<int> b = random_ints(chunk, 2);
  long long guard = 0;
  for (long long round = 0; round < rounds; ++round) {
    std::vector<int> joined;
    joined.reserve(a.size() + b.size());
    joined.insert(joined.end(), a.begin(), a.end());
    joined.insert(joined.end(), b.begin(), b.end());
    if (joined.size() != a.size() + b.size()) return false;
    if (joined[0] != a[0] || joined[a.size()] != b[0]) return false;
    guard += joined[static_cast<std::size_t>(round) % joined.size()];
  }
  return guard != 0;
}

using Matrix = std::vector<double>;  // row-major n*n

inline Matrix random_matrix(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(n * n);
  for (auto &v : m) v = dist(rng);
  return m;
}

inline Matrix identity_matrix(std::size_t n) {
  Matrix m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return m;
}

inline Matrix matmul(const Matrix &a, const Matrix &b, std::size_t n) {
  Matrix c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      for (std::size_t j = 0; j < n; ++j) {
        c[i * n + j] += aik * b[k * n + j];
      }
    }
  }
  return c;
}

// Freivalds' check: A*(B*r) == C*r for a random vector r, within tolerance.
inline bool verify_product(const Matrix &a, const Matrix &b, const Matrix &c,
                           std::size_t n) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> r(n);
  for (auto &v : r) v = dist(rng);

  std::vector<double> br(n, 0.0), abr(n, 0.0), cr(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) br[i] += b[i * n + j] * r[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      abr[i] += a[i * n + j] * br[j];
      cr[i] += c[i * n + j] * r[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = std::max(1.0, std::abs(abr[i]));
    if (std::abs(abr[i] - cr[i]) > 1e-6 * scale) return false;
  }
  return true;
}

inline bool matrix_mul(long long n) {
  const auto size = static_cast<std::size_t>(n);
  const Matrix a = random_matrix(size, 3);
  const Matrix b = random_matrix(size, 4);
  const Matrix c = matmul(a, b, size);
  return verify_product(a, b, c, size);
}

struct Body {
  double x, y, z;
  double vx, vy, vz;
  double mass;
};

inline std::vector<Body> init_bodies(std::size_t count, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  std::uniform_real_distribution<double> vel(-0.05, 0.05);
  std::vector<Body> bodies(count);
  for (auto &b : bodies) {
    b = Body{pos(rng), pos(rng), pos(rng),
             vel(rng), vel(rng), vel(rng),
             1.0 / static_cast<double>(count)};
  }
  return bodies;
}

constexpr double kSoftening2 = 1e-3;

inline void accelerations(const std::vector<Body> &bodies,
                          std::vector<double> &ax, std::vector<double> &ay,
                          std::vector<double> &az) {
  const std::size_t n = bodies.size();
  std::fill(ax.begin(), ax.end(), 0.0);
  std::fill(ay.begin(), ay.end(), 0.0);
  std::fill(az.begin(), az.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = bodies[j].x - bodies[i].x;
      const double dy = bodies[j].y - bodies[i].y;
      const double dz = bodies[j].z - bodies[i].z;
      const double r2 = dx * dx + dy * dy + dz * dz + kSoftening2;
      const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
      ax[i] += bodies[j].mass * dx * inv_r3;
      ay[i] += bodies[j].mass * dy * inv_r3;
      az[i] += bodies[j].mass * dz * inv_r3;
      ax[j] -= bodies[i].mass * dx * inv_r3;
      ay[j] -= bodies[i].mass * dy * inv_r3;
      az[j] -= bodies[i].mass * dz * inv_r3;
    }
  }
}

inline double total_mechanical_energy(const std::vector<Body> &bodies) {
  const std::size_t n = bodies.size();
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Body &b = bodies[i];
    energy += 0.5 * b.mass * (b.vx * b.vx + b.vy * b.vy + b.vz * b.vz);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = bodies[j].x - b.x;
      const double dy = bodies[j].y - b.y;
      const double dz = bodies[j].z - b.z;
      const double r = std::sqrt(dx * dx + dy * dy + dz * dz + kSoftening2);
      energy -= b.mass * bodies[j].mass / r;
    }
  }
  return energy;
}

// Leapfrog (kick-drift-kick) keeps the energy drift bounded; the limit was
// frozen from reference runs: 2.9e-6 relative drift at the default task
// size (256 bodies, 60000 steps), 3.3e-7 at the unit-test size.
constexpr double kMaxRelativeDrift = 1e-4;

inline bool n_body(long long steps, std::size_t count = 256,
                   double dt = 1e-3) {
  std::vector<Body> bodies = init_bodies(count, 42);
  std::vector<double> ax(count), ay(count), az(count);
  const double initial = total_mechanical_energy(bodies);

  accelerations(bodies, ax, ay, az);
  for (long long step = 0; step < steps; ++step) {
    for (std::size_t i = 0; i < count; ++i) {
      bodies[i].vx += 0.5 * dt * ax[i];
      bodies[i].vy += 0.5 * dt * ay[i];
      bodies[i].vz += 0.5 * dt * az[i];
      bodies[i].x += dt * bodies[i].vx;
      bodies[i].y += dt * bodies[i].vy;
      bodies[i].z += dt * bodies[i].vz;
    }
    accelerations(bodies, ax, ay, az);
    for (std::size_t i = 0; i < count; ++i) {
      bodies[i].vx += 0.5 * dt * ax[i];
      bodies[i].vy += 0.5 * dt * ay[i];
      bodies[i].vz += 0.5 * dt * az[i];
    }
  }

  const double final_energy = total_mechanical_energy(bodies);
  const double drift =
      std::abs(final_energy - initial) / std::max(1e-12, std::abs(initial));
  return drift < kMaxRelativeDrift;
}

}  // namespace tasks

#endif  // JOULETRACK_TASK_ALGORITHMS_HPP
