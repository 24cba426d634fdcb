#pragma once

#include <cmath>

namespace singtrace {

// Neumaier (improved Kahan) accumulator carried in extended precision.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  CompensatedSum(long double sum, long double compensation)
      : sum_(sum), comp_(compensation) {}

  void add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  CompensatedSum& operator+=(long double x) {
    add(x);
    return *this;
  }

  long double value() const { return sum_ + comp_; }
  long double raw_sum() const { return sum_; }
  long double compensation() const { return comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

}  // namespace singtrace
