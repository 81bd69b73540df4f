#pragma once

#include <algorithm>

namespace lgp::detail {

// Closed interval with naive (non-directed-rounding) arithmetic; callers pad the result.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Interval operator*(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}
inline Interval operator*(double s, Interval a) { return s >= 0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo}; }

}  // namespace lgp::detail
