#ifndef VSCLAB_SRC_UTIL_HPP
#define VSCLAB_SRC_UTIL_HPP

#include <Eigen/Dense>

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

namespace vsclab::detail {

// Deterministic sub-seed derivation (splitmix64 mix).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Eigen::VectorXd unit_vector(std::mt19937_64& rng, int n) {
  Eigen::VectorXd v = gaussian_vector(rng, n);
  double nrm = v.norm();
  while (nrm == 0.0) {
    v = gaussian_vector(rng, n);
    nrm = v.norm();
  }
  return v / nrm;
}

// Worker count: VSC_LAB_THREADS caps parallelism, 0 or unset means auto.
inline int worker_count() {
  const char* env = std::getenv("VSC_LAB_THREADS");
  int cap = 0;
  if (env != nullptr) cap = std::atoi(env);
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int base = hw > 0 ? hw : 1;
  return cap > 0 ? std::min(cap, base) : base;
}

// Deterministic parallel loop: body(i) must write only to slot i of
// preallocated storage.
template <typename Body>
void parallel_for(int count, Body&& body) {
  const int workers = std::min(worker_count(), std::max(count, 1));
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace vsclab::detail

#endif
