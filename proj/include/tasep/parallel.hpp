#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace tasep {

/// Worker count from TASEP_THREADS, else hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, count) across worker threads. Callers write
/// results into per-index slots so the outcome never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Seed of substream `index`: splitmix64 applied to (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// Pairwise summation in a fixed order.
long double pairwise_sum(std::span<const long double> values);

/// Neumaier-compensated running sum.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    const T t = sum_ + v;
    if ((sum_ < 0 ? -sum_ : sum_) >= (v < 0 ? -v : v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

}  // namespace tasep
