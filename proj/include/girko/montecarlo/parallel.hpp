#pragma once

// Trial-parallel map. Results land in a buffer keyed by trial index, so the
// output never depends on the worker count or on scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "girko/errors.hpp"

namespace girko::montecarlo {

/// Largest tolerated fraction of trials lost to numerical failures.
inline constexpr double kMaxFailureRate = 1e-3;

template <typename T>
struct TrialResults {
  std::vector<std::optional<T>> values;  // empty slot = trial failed numerically
  std::size_t failures = 0;
};

/// Runs fn(first + t) for t in [0, count). NumericalFailure inside a trial
/// marks the slot empty; any other exception is rethrown after the join.
template <typename T, typename Fn>
TrialResults<T> parallel_trials(std::size_t first, std::size_t count, std::size_t workers, Fn fn) {
  TrialResults<T> out;
  out.values.resize(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= count) return;
      try {
        out.values[t] = fn(first + t);
      } catch (const NumericalFailure&) {
        out.values[t].reset();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  const std::size_t w = std::max<std::size_t>(1, std::min(workers, count));
  if (w == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t i = 0; i < w; ++i) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  for (const auto& v : out.values) out.failures += v ? 0 : 1;
  return out;
}

/// Throws NumericalFailure when failures exceed kMaxFailureRate of trials.
void check_failure_rate(std::size_t failures, std::size_t trials, const char* who);

}  // namespace girko::montecarlo
