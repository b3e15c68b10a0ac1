#include "scenery/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace scenery {

namespace {

// Relative slack applied before declaring a cell strictly inside or outside.
constexpr double kSlack = 8.0 * std::numeric_limits<double>::epsilon();
constexpr double kAngleSlack = 1e-12;

}  // namespace

double Box::half_diagonal() const {
  const double a = hi[0] - lo[0], b = hi[1] - lo[1], c = hi[2] - lo[2];
  return 0.5 * std::sqrt(a * a + b * b + c * c);
}

bool Box::contains(const Point& p) const {
  for (int i = 0; i < 3; ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

double min_distance(const Box& b, const Point& p) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    double d = 0.0;
    if (p[i] < b.lo[i]) d = b.lo[i] - p[i];
    else if (p[i] > b.hi[i]) d = p[i] - b.hi[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double max_distance(const Box& b, const Point& p) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = std::max(std::abs(p[i] - b.lo[i]), std::abs(b.hi[i] - p[i]));
    s += d * d;
  }
  return std::sqrt(s);
}

Side combine(Side a, Side b) {
  if (a == Side::outside || b == Side::outside) return Side::outside;
  if (a == Side::inside && b == Side::inside) return Side::inside;
  return Side::straddle;
}

Side BallRegion::classify(const Box& cell) const {
  if (min_distance(cell, center_) > radius_ * (1.0 + kSlack)) return Side::outside;
  if (max_distance(cell, center_) < radius_ * (1.0 - kSlack)) return Side::inside;
  return Side::straddle;
}

Side BoxRegion::classify(const Box& cell) const {
  bool inside = true;
  for (int i = 0; i < 3; ++i) {
    if (cell.hi[i] < box_.lo[i] || cell.lo[i] > box_.hi[i]) return Side::outside;
    if (cell.lo[i] < box_.lo[i] || cell.hi[i] > box_.hi[i]) inside = false;
  }
  return inside ? Side::inside : Side::straddle;
}

Side HalfSpaceRegion::classify(const Box& cell) const {
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double a = normal_[i] * cell.lo[i];
    const double b = normal_[i] * cell.hi[i];
    lo += std::min(a, b);
    hi += std::max(a, b);
  }
  const double tol = kSlack * (1.0 + std::abs(offset_) + std::abs(lo) + std::abs(hi));
  if (hi <= offset_ - tol) return Side::inside;
  if (lo > offset_ + tol) return Side::outside;
  return Side::straddle;
}

double Subspace::angle_to(const Point& u) const {
  Point along{0.0, 0.0, 0.0};
  for (const Point& b : basis) along = along + dot(u, b) * b;
  const Point perp = u - along;
  return std::atan2(norm(perp), norm(along));
}

double Subspace::distance(const Point& y) const {
  Point along{0.0, 0.0, 0.0};
  for (const Point& b : basis) along = along + dot(y, b) * b;
  return norm(y - along);
}

ConeRegion::ConeRegion(const Point& apex, double radius, Subspace v, const Point& theta,
                       double alpha)
    : apex_(apex),
      radius_(radius),
      v_(std::move(v)),
      theta_(theta),
      alpha_(alpha),
      gamma_x_(std::asin(std::clamp(alpha, 0.0, 1.0))),
      gamma_h_(std::acos(std::clamp(alpha, 0.0, 1.0))) {}

bool ConeRegion::contains(const Point& y) const {
  const Point rel = y - apex_;
  const double len = norm(rel);
  if (!(len < radius_) || len == 0.0) return false;
  if (!(v_.distance(rel) < alpha_ * len)) return false;
  return dot(rel, theta_) < alpha_ * len;
}

Side ConeRegion::classify(const Box& cell) const {
  const double dmin = min_distance(cell, apex_);
  if (dmin > radius_ * (1.0 + kSlack)) return Side::outside;
  const bool in_ball = max_distance(cell, apex_) < radius_ * (1.0 - kSlack);

  const Point c = cell.center() - apex_;
  const double dist = norm(c);
  const double h = cell.half_diagonal();
  if (dist <= h * (1.0 + kSlack) || dist == 0.0) return Side::straddle;

  const double beta = std::asin(std::min(1.0, h / dist)) + kAngleSlack;
  const Point u = (1.0 / dist) * c;
  const double a_v = v_.angle_to(u);
  const double a_t = std::atan2(norm(u - dot(u, theta_) * theta_), dot(u, theta_));

  if (a_v - beta >= gamma_x_) return Side::outside;
  if (a_t + beta <= gamma_h_) return Side::outside;
  if (in_ball && a_v + beta < gamma_x_ && a_t - beta > gamma_h_) return Side::inside;
  return Side::straddle;
}

Side IntersectionRegion::classify(const Box& cell) const {
  Side s = Side::inside;
  for (const RegionPtr& p : parts_) {
    s = combine(s, p->classify(cell));
    if (s == Side::outside) break;
  }
  return s;
}

namespace {

class MappedRegion final : public Region {
 public:
  MappedRegion(RegionPtr inner, const Point& shift, double scale)
      : inner_(std::move(inner)), shift_(shift), inv_(1.0 / scale) {}

  Side classify(const Box& cell) const override {
    Box b;
    for (int i = 0; i < 3; ++i) {
      const double lo = (cell.lo[i] - shift_[i]) * inv_;
      const double hi = (cell.hi[i] - shift_[i]) * inv_;
      const double pad = 4.0 * kSlack * (std::abs(lo) + std::abs(hi));
      b.lo[i] = lo - pad;
      b.hi[i] = hi + pad;
    }
    return inner_->classify(b);
  }

 private:
  RegionPtr inner_;
  Point shift_;
  double inv_;
};

}  // namespace

RegionPtr affine_image(const RegionPtr& region, const Point& shift, double scale) {
  if (RegionPtr m = region->mapped(shift, scale)) return m;
  return std::make_shared<MappedRegion>(region, shift, scale);
}

RegionPtr BallRegion::mapped(const Point& shift, double scale) const {
  return std::make_shared<BallRegion>(shift + scale * center_, scale * radius_);
}

RegionPtr BoxRegion::mapped(const Point& shift, double scale) const {
  return std::make_shared<BoxRegion>(Box{shift + scale * box_.lo, shift + scale * box_.hi});
}

RegionPtr HalfSpaceRegion::mapped(const Point& shift, double scale) const {
  return std::make_shared<HalfSpaceRegion>(normal_, scale * offset_ + dot(normal_, shift));
}

RegionPtr ConeRegion::mapped(const Point& shift, double scale) const {
  return std::make_shared<ConeRegion>(shift + scale * apex_, scale * radius_, v_, theta_, alpha_);
}

RegionPtr IntersectionRegion::mapped(const Point& shift, double scale) const {
  std::vector<RegionPtr> parts;
  for (const RegionPtr& p : parts_) parts.push_back(affine_image(p, shift, scale));
  return std::make_shared<IntersectionRegion>(std::move(parts));
}

}  // namespace scenery
