#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bellcc {

/// Default absolute tolerance used by every numeric check in the library.
inline constexpr double kTolerance = 1e-9;

// Error hierarchy. The CLI maps ValidationError to exit code 1 and
// NumericError to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class InvalidBlochVector : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SearchSpaceTooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations)
      : NumericError(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// Thrown when a finite randomness source (bit file, beacon records) runs out.
class RandomnessExhausted : public ValidationError {
 public:
  RandomnessExhausted(const std::string& what, std::size_t rounds_completed)
      : ValidationError(what + " (rounds completed: " + std::to_string(rounds_completed) + ")"),
        rounds_completed_(rounds_completed) {}

  std::size_t rounds_completed() const noexcept { return rounds_completed_; }

 private:
  std::size_t rounds_completed_;
};

/// Thread cap for data-parallel loops. 0 means hardware concurrency.
struct Parallelism {
  unsigned threads = 0;

  unsigned resolved() const {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
  }
};

/// Runs body(begin, end, chunk_index) over contiguous chunks of [0, count).
/// Chunks are fixed by count and chunk count only, so callers that reduce
/// per-chunk results in chunk order get results independent of scheduling.
inline void parallel_chunks(std::size_t count, std::size_t chunks, Parallelism par,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  chunks = std::clamp<std::size_t>(chunks, 1, count);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(par.resolved(), chunks));
  auto bounds = [&](std::size_t c) {
    return std::pair{count * c / chunks, count * (c + 1) / chunks};
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      body(b, e, c);
    }
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) {
          auto [b, e] = bounds(c);
          body(b, e, c);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Number of +-1 assignments of `bits` variables, guarded against overflow.
inline std::uint64_t pow2(unsigned bits) {
  if (bits >= 64) throw SearchSpaceTooLarge("2^" + std::to_string(bits) + " does not fit in 64 bits");
  return std::uint64_t{1} << bits;
}

}  // namespace bellcc
