#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace dtm {

// Runs fn(i) for i in [0, count). Results must be written to slots indexed
// by i so that the outcome does not depend on the number of threads.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace dtm
