#include "core/common.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

#include <boost/multiprecision/cpp_int.hpp>

namespace olab {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool pow_budget_exceeded(long long base, int exp, long long budget, std::string& count) {
  if (base <= 1 || exp == 0) {
    const long long v = exp == 0 ? 1 : base;
    count = std::to_string(v);
    return v > budget;
  }
  boost::multiprecision::cpp_int v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    // Once over budget with factors left, the outcome is settled; the exact
    // decimal may be astronomically long, so report the power symbolically.
    if (v > budget && i + 1 < exp) {
      count = std::to_string(base) + "^" + std::to_string(exp);
      return true;
    }
  }
  count = v.str();
  return v > budget;
}

void parallel_chunks(std::int64_t n, std::int64_t chunk_size, int threads,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  if (chunk_size <= 0) chunk_size = n;
  const std::int64_t n_chunks = (n + chunk_size - 1) / chunk_size;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers > n_chunks) workers = static_cast<int>(n_chunks);

  if (workers == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c)
      fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mtx;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        try {
          fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mtx);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace olab
