#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace lgp {

/// Process-wide worker count used by the parallel helpers (default 1).
void set_thread_count(int threads);
int thread_count();

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/**
 * Calls body(begin, end) over [0, n) split into fixed chunks of `chunk`
 * items. Chunk boundaries depend only on n and chunk, never on the
 * thread count, so per-chunk results are reproducible.
 */
void parallel_for(std::size_t n, std::size_t chunk, const std::function<void(std::size_t, std::size_t)>& body);

/// Sum of partial(begin, end) over fixed chunks, combined in chunk order.
double parallel_sum(std::size_t n, std::size_t chunk, const std::function<double(std::size_t, std::size_t)>& partial);

/// Maximum of partial(begin, end) over fixed chunks.
double parallel_max(std::size_t n, std::size_t chunk, const std::function<double(std::size_t, std::size_t)>& partial);

}  // namespace lgp
