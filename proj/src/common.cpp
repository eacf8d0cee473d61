#include "mcinv/common.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace mcinv {

namespace {
std::atomic<int> g_max_threads{1};
}

void set_max_threads(int threads) { g_max_threads.store(threads < 1 ? 1 : threads); }

int max_threads() { return g_max_threads.load(); }

namespace detail {

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n ? n : 1);
  if (workers <= 1 || n < 2048) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    const std::size_t begin = static_cast<std::size_t>(t) * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

}  // namespace mcinv
