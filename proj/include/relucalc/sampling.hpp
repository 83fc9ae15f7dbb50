#pragma once

// Deterministic low-discrepancy sampling and bounded parallel map-reduce.
// RELU_CALC_THREADS caps worker threads (default: hardware concurrency).

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "relucalc/core.hpp"

namespace relucalc {

inline int thread_count() {
  if (const char* env = std::getenv("RELU_CALC_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

inline const std::vector<int>& primes() {
  static const std::vector<int> table = [] {
    std::vector<int> p;
    for (int c = 2; static_cast<int>(p.size()) < 512; ++c) {
      bool prime = true;
      for (int q : p) {
        if (q * q > c) break;
        if (c % q == 0) {
          prime = false;
          break;
        }
      }
      if (prime) p.push_back(c);
    }
    return p;
  }();
  return table;
}

// Radical-inverse of index in the given base.
inline double radical_inverse(uint64_t index, int base) {
  double inv = 1.0 / base, factor = inv, value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % static_cast<uint64_t>(base)) * factor;
    index /= static_cast<uint64_t>(base);
    factor *= inv;
  }
  return value;
}

}  // namespace detail

// i-th Halton point of the seeded stream, mapped into [a,b]^d.
inline void halton_point(uint64_t i, uint64_t seed, int64_t d, double a, double b, double* out) {
  if (d > static_cast<int64_t>(detail::primes().size()))
    throw domain_error("halton_point: dimension exceeds the cached prime bases");
  const uint64_t index = i + 1 + seed * 0x9E3779B9ull;
  for (int64_t j = 0; j < d; ++j)
    out[j] = a + (b - a) * detail::radical_inverse(index, detail::primes()[static_cast<size_t>(j)]);
}

// Deterministic parallel max of fn(i) over i in [0, n): the chunk split is
// fixed by n and the thread count, and max is order-independent.
inline double parallel_max(int64_t n, const std::function<double(int64_t, int64_t)>& chunk_max) {
  const int threads = std::min<int64_t>(thread_count(), std::max<int64_t>(1, n));
  if (threads <= 1) return chunk_max(0, n);
  std::vector<double> partial(static_cast<size_t>(threads), -1e308);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const int64_t lo = n * t / threads, hi = n * (t + 1) / threads;
    pool.emplace_back([&partial, &chunk_max, t, lo, hi] { partial[static_cast<size_t>(t)] = chunk_max(lo, hi); });
  }
  for (std::thread& th : pool) th.join();
  double best = -1e308;
  for (double v : partial) best = std::max(best, v);
  return best;
}

}  // namespace relucalc
