#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace mdca {

template <class F> void parallel_for(std::size_t n, F &&body)
{
  unsigned k = std::min<std::size_t>(thread_budget(), n);
  if (k <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < k; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++)
        body(i);
    });
  for (auto &th : pool)
    th.join();
}

} // namespace mdca
