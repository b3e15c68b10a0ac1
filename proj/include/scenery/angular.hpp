#pragma once

#include <array>
#include <vector>

#include "scenery/measure.hpp"

namespace scenery {

// Planar angular histogram of a ball B(x, r) around its center, used to evaluate
// all cones of an aligned planar net from one descent. Bin b covers directions
// [b eta, (b+1) eta). Cells are grouped by the run of bins their directions may
// occupy; cells whose mass is certain to lie in the ball are kept apart from
// cells that merely might.
class AngularSnapshot {
 public:
  static constexpr int kMaxSpan = 16;

  AngularSnapshot(const Measure& mu, const Point& x, double r, int bins, int depth);

  int bins() const { return bins_; }
  // Unnormalized base-mass enclosure of the ball.
  MassInterval ball() const { return {ball_low_, ball_high_, depth_}; }

  // Per-line evaluation of the numerator low over every theta. Fills `low`
  // (length bins) so that low[j] is the certain mass in X(line i) \ H(theta j).
  void lows_for_line(int line, double alpha, std::vector<double>& low) const;
  // Minimum over theta of the numerator low for line i, and its theta index.
  double min_low_for_line(int line, double alpha, int* theta_index) const;
  // First theta with numerator low <= threshold, or -1.
  int first_low_at_most(int line, double alpha, double threshold) const;
  // Numerator low for a single pair.
  double low(int line, int theta, double alpha) const;
  // Numerator high for a single pair.
  double high(int line, int theta, double alpha) const;

 private:
  struct Arc {
    int start;
    int len;
  };
  struct Wide {
    int start;
    int len;
    double mass;
  };

  // Certain mass of cells whose bin run lies inside `arc`.
  double contained(const std::vector<double>* prefix, Arc arc) const;
  void residual_table(Arc arc, int h_len, std::vector<double>& out) const;
  Arc inner_x(int line, int half, double alpha) const;

  int bins_;
  int depth_;
  double eta_;
  double ball_low_ = 0.0;
  double ball_high_ = 0.0;
  double everywhere_ = 0.0;  // cells touching the center: every cone may hold them
  // sure_[L-1][b]: certain cells spanning L bins from b; any_ counts all cells.
  std::array<std::vector<double>, kMaxSpan> sure_;
  std::array<std::vector<double>, kMaxSpan> any_;
  // Prefix sums over the doubled arrays.
  std::array<std::vector<double>, kMaxSpan> sure_prefix_;
  std::array<std::vector<double>, kMaxSpan> any_prefix_;
  std::vector<Wide> wide_;
  double total_any_ = 0.0;
};

}  // namespace scenery
