#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace allostery {

// Worker count: ALLOSTERY_THREADS if set and positive, else the hardware
// concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("ALLOSTERY_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) {
        return static_cast<unsigned>(n);
      }
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Counts indices in [0, n) satisfying pred, splitting the range over
// threads. pred must be safe to call concurrently.
template <typename Pred>
std::uint64_t parallel_count(std::uint64_t n, Pred pred) {
  unsigned workers = thread_count();
  if (workers <= 1 || n < 4096) {
    std::uint64_t c = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      c += pred(i) ? 1 : 0;
    }
    return c;
  }
  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  std::uint64_t chunk = (n + workers - 1) / workers;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      std::uint64_t lo = t * chunk;
      std::uint64_t hi = std::min(n, lo + chunk);
      std::uint64_t c = 0;
      for (std::uint64_t i = lo; i < hi; ++i) {
        c += pred(i) ? 1 : 0;
      }
      partial[t] = c;
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  std::uint64_t total = 0;
  for (auto c : partial) {
    total += c;
  }
  return total;
}

}  // namespace allostery
