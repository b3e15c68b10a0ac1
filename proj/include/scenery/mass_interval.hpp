#pragma once

#include <algorithm>
#include <cmath>

namespace scenery {

// Guaranteed enclosure [low, high] of a normalized mass.
struct MassInterval {
  double low = 0.0;
  double high = 0.0;
  int depth_used = 0;

  double mid() const { return 0.5 * (low + high); }
  double width() const { return high - low; }
  bool contains(double v) const { return low <= v && v <= high; }
  bool overlaps(const MassInterval& o) const { return low <= o.high && o.low <= high; }
};

// Neumaier compensated sum; order-insensitive to within an ulp or so.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace scenery
