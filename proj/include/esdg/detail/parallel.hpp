#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace esdg::detail {

/// Runs fn(i) for i in [0,n) over `threads` workers in contiguous blocks.
/// Every index is processed by exactly one worker, so per-index results do
/// not depend on the worker count. If several indices throw, the exception
/// from the lowest block is rethrown.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    const int begin = static_cast<int>(static_cast<long long>(n) * w / threads);
    const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / threads);
    pool.emplace_back([&, w, begin, end] {
      try {
        for (int i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace esdg::detail
