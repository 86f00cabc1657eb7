#include "cornex/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace cornex {
namespace {

std::atomic<int> g_workers{1};

int env_cap() {
  const char* s = std::getenv("CORNEX_MAX_THREADS");
  if (!s) return 0;
  int v = std::atoi(s);
  return v > 0 ? v : 0;
}

}  // namespace

int worker_count() {
  int n = g_workers.load();
  int cap = env_cap();
  if (cap > 0) n = std::min(n, cap);
  return std::max(1, n);
}

void set_worker_count(int n) { g_workers.store(std::max(1, n)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  std::size_t w = static_cast<std::size_t>(worker_count());
  if (w <= 1 || n < 2 * w) {
    if (n) fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + w - 1) / w;
  for (std::size_t b = 0; b < n; b += chunk) {
    std::size_t e = std::min(n, b + chunk);
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cornex
