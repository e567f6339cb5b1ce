#pragma once
// Stable log-domain accumulation.

#include <cmath>
#include <limits>
#include <span>

namespace icin {

// Streaming log(sum exp(v_i)): single pass, rescales on a new maximum.
class StreamingLogSumExp {
public:
  void add(double v) {
    if (std::isinf(v) && v < 0) return;  // exp(-inf) contributes nothing
    if (v <= max_) {
      sum_ += std::exp(v - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    }
  }
  bool empty() const { return sum_ == 0.0; }
  double value() const {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_);
  }

private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

inline double log_sum_exp(std::span<const double> vals) {
  StreamingLogSumExp acc;
  for (double v : vals) acc.add(v);
  return acc.value();
}

}  // namespace icin
