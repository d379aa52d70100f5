#include "cheb/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace cheb {

int worker_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  int cap = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("CHEB_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      cap = static_cast<int>(std::min<long>(v, 256));
  }
  return std::max(cap, 1);
}

void parallel_chunks(std::int64_t chunks,
                     const std::function<void(std::int64_t)>& fn) {
  if (chunks <= 0) return;
  const std::int64_t workers =
      std::min<std::int64_t>(worker_cap(), chunks);
  if (workers <= 1) {
    for (std::int64_t k = 0; k < chunks; ++k) fn(k);
    return;
  }

  std::atomic<std::int64_t> next(0);
  std::exception_ptr first_error;
  std::mutex error_lock;
  auto drain = [&]() {
    while (true) {
      const std::int64_t k = next.fetch_add(1, std::memory_order_relaxed);
      if (k >= chunks) return;
      try {
        fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> guard(error_lock);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(drain);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cheb
