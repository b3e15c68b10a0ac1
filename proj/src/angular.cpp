#include "scenery/angular.hpp"

#include <cmath>
#include <numbers>

#include "scenery/kernels.hpp"

namespace scenery {
namespace {

constexpr double kAngleSlack = 1e-12;
constexpr double kArcSlack = 1e-9;

int mod(long v, int n) {
  const long r = v % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace

AngularSnapshot::AngularSnapshot(const Measure& mu, const Point& x, double r, int bins, int depth)
    : bins_(bins), depth_(depth), eta_(2.0 * std::numbers::pi / bins) {
  require(mu.dim() == 2, "angular snapshots are planar");
  require(bins >= 8 && bins % 2 == 0, "bin count must be even and at least 8");
  mu.check_radius(r);
  mu.check_depth(depth);
  for (auto& v : sure_) v.assign(bins_, 0.0);
  for (auto& v : any_) v.assign(bins_, 0.0);

  const double inv = std::exp(-mu.log_scale());
  const Point apex = mu.to_base(x);
  const BallRegion ball(apex, r * inv);
  const double stop = std::ldexp(inv, -depth);
  CompensatedSum low, high, every;

  mu.walk([&](const Cell& cell, Side rs) {
    const Box box = mu.padded(cell.box);
    const Side bs = ball.classify(box);
    if (bs == Side::outside) return false;
    const bool sure = bs == Side::inside && rs == Side::inside;
    const bool at_stop = cell.owner->is_leaf(cell) || cell.box.max_side() <= stop;

    const Point c = box.center() - apex;
    const double dist = std::hypot(c[0], c[1]);
    const double h = box.half_diagonal();
    int start = 0, span = bins_;
    if (dist > h * (1.0 + 1e-12) && dist > 0.0) {
      const double beta = std::asin(std::min(1.0, h / dist)) + kAngleSlack;
      double a = std::atan2(c[1], c[0]);
      if (a < 0.0) a += 2.0 * std::numbers::pi;
      const long lo = static_cast<long>(std::floor((a - beta) / eta_));
      const long hi = static_cast<long>(std::floor((a + beta) / eta_));
      span = static_cast<int>(std::min<long>(hi - lo + 1, bins_));
      start = mod(lo, bins_);
    }
    if (sure && span == 1) {
      sure_[0][start] += cell.mass;
      any_[0][start] += cell.mass;
      low.add(cell.mass);
      high.add(cell.mass);
      return false;
    }
    if (!at_stop) return true;
    high.add(cell.mass);
    if (sure) low.add(cell.mass);
    if (span >= bins_) {
      every.add(cell.mass);
    } else if (span <= kMaxSpan) {
      if (sure) sure_[span - 1][start] += cell.mass;
      any_[span - 1][start] += cell.mass;
    } else {
      wide_.push_back({start, span, cell.mass});
    }
    return false;
  });
  ball_low_ = low.value();
  ball_high_ = high.value();
  everywhere_ = every.value();

  CompensatedSum total;
  for (int L = 0; L < kMaxSpan; ++L) {
    auto& sp = sure_prefix_[L];
    auto& ap = any_prefix_[L];
    sp.assign(2 * bins_ + 1, 0.0);
    ap.assign(2 * bins_ + 1, 0.0);
    for (int i = 0; i < 2 * bins_; ++i) {
      sp[i + 1] = sp[i] + sure_[L][i % bins_];
      ap[i + 1] = ap[i] + any_[L][i % bins_];
    }
    for (double m : any_[L]) total.add(m);
  }
  total_any_ = total.value();
}

double AngularSnapshot::contained(const std::vector<double>* prefix, Arc arc) const {
  if (arc.len <= 0) return 0.0;
  double sum = 0.0;
  const int top = std::min(kMaxSpan, arc.len);
  for (int L = 1; L <= top; ++L) {
    const auto& p = prefix[L - 1];
    sum += p[arc.start + arc.len - L + 1] - p[arc.start];
  }
  return sum;
}

AngularSnapshot::Arc AngularSnapshot::inner_x(int line, int half, double alpha) const {
  const double w = (std::asin(alpha) - kArcSlack) / eta_;
  const int cw = static_cast<int>(std::ceil(w));
  const int center = line + half * (bins_ / 2);
  return {mod(center - cw + 1, bins_), std::max(0, 2 * cw - 2)};
}

namespace {

// Bins meeting the closed arc of half-width gamma around direction index j.
int outer_half(double gamma, double eta) {
  return static_cast<int>(std::floor((gamma + kArcSlack) / eta));
}

// Bins inside the closed arc of half-width gamma around direction index j.
int inner_half(double gamma, double eta) {
  return std::max(0, static_cast<int>(std::floor((gamma - kArcSlack) / eta)));
}

}  // namespace

void AngularSnapshot::residual_table(Arc arc, int h_len, std::vector<double>& out) const {
  out.assign(2 * bins_, 0.0);
  const int w = arc.len;
  if (w <= 0) return;
  std::vector<double> la(w + 1, 0.0), ra(w + 1, 0.0);
  for (int x = 0; x < w; ++x) {
    double add = 0.0;
    for (int L = 1; L <= std::min(kMaxSpan, x + 1); ++L) add += sure_[L - 1][mod(arc.start + x - L + 1, bins_)];
    la[x + 1] = la[x] + add;
  }
  for (int x = w - 1; x >= 0; --x) {
    double add = 0.0;
    for (int L = 1; L <= std::min(kMaxSpan, w - x); ++L) add += sure_[L - 1][mod(arc.start + x, bins_)];
    ra[x] = ra[x + 1] + add;
  }
  for (int h = 0; h < bins_; ++h) {
    double v;
    if (h < w) {
      v = la[h] + ra[std::min(w - 1, h + h_len - 1) + 1];
    } else if (h + h_len - 1 >= bins_) {
      v = ra[std::min(w - 1, h + h_len - 1 - bins_) + 1];
    } else {
      v = la[w];
    }
    out[h] = v;
    out[h + bins_] = v;
  }
}

void AngularSnapshot::lows_for_line(int line, double alpha, std::vector<double>& low) const {
  low.assign(bins_, 0.0);
  const int fh = outer_half(std::acos(alpha), eta_);
  const int h_len = 2 * fh + 2;
  const Arc i1 = inner_x(line, 0, alpha);
  const Arc i2 = inner_x(line, 1, alpha);
  if (i1.len + h_len > bins_) {
    for (int j = 0; j < bins_; ++j) low[j] = this->low(line, j, alpha);
    return;
  }
  std::vector<double> r1, r2;
  residual_table(i1, h_len, r1);
  residual_table(i2, h_len, r2);
  const int o1 = mod(-fh - 1 - i1.start, bins_);
  const int o2 = mod(-fh - 1 - i2.start, bins_);
  for (int j = 0; j < bins_; ++j) low[j] = r1[o1 + j] + r2[o2 + j];
}

double AngularSnapshot::min_low_for_line(int line, double alpha, int* theta_index) const {
  const int fh = outer_half(std::acos(alpha), eta_);
  const int h_len = 2 * fh + 2;
  const Arc i1 = inner_x(line, 0, alpha);
  const Arc i2 = inner_x(line, 1, alpha);
  if (i1.len + h_len > bins_) {
    std::vector<double> low;
    lows_for_line(line, alpha, low);
    std::size_t at = 0;
    const double best = kernels::active().min_pair_sum(low.data(), std::vector<double>(bins_, 0.0).data(),
                                                       bins_, &at);
    if (theta_index) *theta_index = static_cast<int>(at);
    return best;
  }
  std::vector<double> r1, r2;
  residual_table(i1, h_len, r1);
  residual_table(i2, h_len, r2);
  const int o1 = mod(-fh - 1 - i1.start, bins_);
  const int o2 = mod(-fh - 1 - i2.start, bins_);
  std::size_t at = 0;
  const double best = kernels::active().min_pair_sum(r1.data() + o1, r2.data() + o2, bins_, &at);
  if (theta_index) *theta_index = static_cast<int>(at);
  return best;
}

int AngularSnapshot::first_low_at_most(int line, double alpha, double threshold) const {
  const int fh = outer_half(std::acos(alpha), eta_);
  const int h_len = 2 * fh + 2;
  const Arc i1 = inner_x(line, 0, alpha);
  const Arc i2 = inner_x(line, 1, alpha);
  if (i1.len + h_len > bins_) {
    for (int j = 0; j < bins_; ++j) {
      if (low(line, j, alpha) <= threshold) return j;
    }
    return -1;
  }
  std::vector<double> r1, r2;
  residual_table(i1, h_len, r1);
  residual_table(i2, h_len, r2);
  const int o1 = mod(-fh - 1 - i1.start, bins_);
  const int o2 = mod(-fh - 1 - i2.start, bins_);
  const std::size_t j = kernels::active().first_at_most(r1.data() + o1, r2.data() + o2, bins_, threshold);
  return j < static_cast<std::size_t>(bins_) ? static_cast<int>(j) : -1;
}

namespace {

struct ArcPieces {
  int n = 0;
  int start[2] = {0, 0};
  int len[2] = {0, 0};
};

// Intersection of two arcs given by (start in [0,B), length <= B).
ArcPieces intersect(int s1, int l1, int s2, int l2, int bins) {
  ArcPieces out;
  if (l1 <= 0 || l2 <= 0) return out;
  for (int k = -1; k <= 1 && out.n < 2; ++k) {
    const int lo = std::max(s1, s2 + k * bins);
    const int hi = std::min(s1 + l1, s2 + l2 + k * bins);
    if (hi > lo) {
      out.start[out.n] = mod(lo, bins);
      out.len[out.n] = hi - lo;
      ++out.n;
    }
  }
  return out;
}

bool run_inside(int start, int len, int arc_start, int arc_len, int bins) {
  if (arc_len <= 0) return false;
  return mod(start - arc_start, bins) + len <= arc_len;
}

}  // namespace

double AngularSnapshot::low(int line, int theta, double alpha) const {
  const int fh = outer_half(std::acos(alpha), eta_);
  const int h_len = 2 * fh + 2;
  if (h_len >= bins_) return 0.0;
  // Complement of the outer H arc.
  const int c_start = mod(theta + fh + 1, bins_);
  const int c_len = bins_ - h_len;
  double sum = 0.0;
  for (int half = 0; half < 2; ++half) {
    const Arc x = inner_x(line, half, alpha);
    const ArcPieces p = intersect(x.start, x.len, c_start, c_len, bins_);
    for (int i = 0; i < p.n; ++i) sum += contained(sure_prefix_.data(), {p.start[i], p.len[i]});
  }
  return sum;
}

double AngularSnapshot::high(int line, int theta, double alpha) const {
  const int fo = outer_half(std::asin(alpha), eta_);
  const int fi = inner_half(std::acos(alpha), eta_);
  // Gaps between the outer X arcs: no direction there lies in X.
  Arc gaps[2];
  for (int half = 0; half < 2; ++half) {
    const int center = line + half * (bins_ / 2);
    gaps[half] = {mod(center + fo + 1, bins_), bins_ / 2 - 2 * fo - 2};
  }
  const Arc inner_h{mod(theta - fi, bins_), 2 * fi};
  double excluded = contained(any_prefix_.data(), inner_h);
  for (const Arc& g : gaps) {
    if (g.len <= 0) continue;
    excluded += contained(any_prefix_.data(), g);
    const ArcPieces p = intersect(g.start, g.len, inner_h.start, inner_h.len, bins_);
    for (int i = 0; i < p.n; ++i) excluded -= contained(any_prefix_.data(), {p.start[i], p.len[i]});
  }
  double wide = 0.0;
  for (const Wide& c : wide_) {
    bool out = run_inside(c.start, c.len, inner_h.start, inner_h.len, bins_);
    for (const Arc& g : gaps) out = out || run_inside(c.start, c.len, g.start, g.len, bins_);
    if (!out) wide += c.mass;
  }
  return std::max(0.0, everywhere_ + wide + total_any_ - excluded);
}

}  // namespace scenery
