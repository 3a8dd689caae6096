#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace olab {

// Error taxonomy shared with the C API status codes.
enum class errc { invalid = 1, parse = 2, budget = 3, check = 4, internal = 5 };

struct Error : std::runtime_error {
  errc code;
  Error(errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail_invalid(const std::string& m) { throw Error(errc::invalid, m); }
[[noreturn]] inline void fail_parse(const std::string& m) { throw Error(errc::parse, m); }
[[noreturn]] inline void fail_budget(const std::string& m) { throw Error(errc::budget, m); }
[[noreturn]] inline void fail_check(const std::string& m) { throw Error(errc::check, m); }
[[noreturn]] inline void fail_internal(const std::string& m) { throw Error(errc::internal, m); }

using Vec = std::vector<double>;

// Format with 12 significant digits (the printing contract for computed values).
std::string fmt12(double v);

// True when base^exp > budget; `count` receives the exact decimal value of
// base^exp (used verbatim in budget error messages) unless the power is so far
// over budget that the decimal would be astronomically long, in which case it
// holds the symbolic form "base^exp".
bool pow_budget_exceeded(long long base, int exp, long long budget, std::string& count);

// Run fn(chunk_index, begin, end) over [0,n) split into fixed-size chunks.
// Chunk boundaries depend only on n and chunk_size, never on the thread count,
// so any per-chunk accumulation merged by chunk index is reproducible for any
// value of `threads` (<=0 selects hardware concurrency).
void parallel_chunks(std::int64_t n, std::int64_t chunk_size, int threads,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

}  // namespace olab
