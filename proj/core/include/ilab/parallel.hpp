#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ilab {

inline int hardware_workers() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static partition of [0, total) across workers.  Results must be written to
// per-index slots so the outcome is independent of scheduling; exceptions are
// collected and the first one rethrown.
inline void parallel_for(std::size_t total, int workers,
                         const std::function<void(std::size_t)>& body) {
  if (workers <= 0) workers = hardware_workers();
  if (workers == 1 || total < 2) {
    for (std::size_t i = 0; i < total; ++i) body(i);
    return;
  }
  const std::size_t w = static_cast<std::size_t>(workers);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(w);
  pool.reserve(w);
  for (std::size_t k = 0; k < w; ++k) {
    pool.emplace_back([&, k] {
      const std::size_t lo = total * k / w;
      const std::size_t hi = total * (k + 1) / w;
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ilab
