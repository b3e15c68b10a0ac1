#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

namespace scenery {

// Points live in R^3; coordinates past the ambient dimension stay zero.
using Point = std::array<double, 3>;

inline constexpr int kMaxTreeDim = 3;

inline double dot(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline Point operator-(const Point& a, const Point& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Point operator+(const Point& a, const Point& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Point operator*(double s, const Point& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

// Closed axis-aligned box. Degenerate extents are allowed (points, planes).
struct Box {
  Point lo{};
  Point hi{};

  Point center() const {
    return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
  }
  double max_side() const {
    return std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
  }
  double half_diagonal() const;
  bool contains(const Point& p) const;
};

// Smallest and largest distance from p to points of the box.
double min_distance(const Box& b, const Point& p);
double max_distance(const Box& b, const Point& p);

enum class Side : std::uint8_t { inside, outside, straddle };

// Conservative cell classifier. `inside` promises the whole closed cell lies in
// the interior-side version of the region, `outside` that the cell misses the
// closure. Anything else is `straddle`. A cell classified inside never has a
// sub-box classified outside.
class Region;
using RegionPtr = std::shared_ptr<const Region>;

class Region {
 public:
  virtual ~Region() = default;
  virtual Side classify(const Box& cell) const = 0;
  // Image under y -> shift + scale * y, or null if the type has no closed form.
  virtual RegionPtr mapped(const Point& shift, double scale) const {
    (void)shift;
    (void)scale;
    return nullptr;
  }
};

// Image of `region` under y -> shift + scale * y (scale > 0). Falls back to a
// wrapper that maps cells back, padded by a few ulps.
RegionPtr affine_image(const RegionPtr& region, const Point& shift, double scale);

class WholeSpace final : public Region {
 public:
  Side classify(const Box&) const override { return Side::inside; }
  RegionPtr mapped(const Point&, double) const override {
    return std::make_shared<WholeSpace>();
  }
};

// Ball B(center, radius). Inside means inside the open ball, outside means
// disjoint from the closed ball, so enclosures bracket both conventions.
class BallRegion final : public Region {
 public:
  BallRegion(const Point& center, double radius) : center_(center), radius_(radius) {}
  Side classify(const Box& cell) const override;
  RegionPtr mapped(const Point& shift, double scale) const override;

  const Point& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Point center_;
  double radius_;
};

class BoxRegion final : public Region {
 public:
  explicit BoxRegion(const Box& box) : box_(box) {}
  Side classify(const Box& cell) const override;
  RegionPtr mapped(const Point& shift, double scale) const override;

 private:
  Box box_;
};

// {y : normal . y <= offset}
class HalfSpaceRegion final : public Region {
 public:
  HalfSpaceRegion(const Point& normal, double offset) : normal_(normal), offset_(offset) {}
  Side classify(const Box& cell) const override;
  RegionPtr mapped(const Point& shift, double scale) const override;

 private:
  Point normal_;
  double offset_;
};

// Orthonormal basis of a linear subspace of R^d (d <= 3).
struct Subspace {
  std::vector<Point> basis;

  // Angle in [0, pi/2] between the unit vector u and the subspace.
  double angle_to(const Point& u) const;
  double distance(const Point& y) const;
};

// X(apex, r, V, alpha) \ H(apex, theta, alpha):
//   X = {y in B(apex, r) : dist(y - apex, V) < alpha |y - apex|}
//   H = {y : (y - apex) . theta >= alpha |y - apex|}
// Classified through the bounding cone of each cell as seen from the apex.
class ConeRegion final : public Region {
 public:
  ConeRegion(const Point& apex, double radius, Subspace v, const Point& theta, double alpha);
  Side classify(const Box& cell) const override;
  RegionPtr mapped(const Point& shift, double scale) const override;

  bool contains(const Point& y) const;

 private:
  Point apex_;
  double radius_;
  Subspace v_;
  Point theta_;
  double alpha_;
  double gamma_x_;  // asin(alpha)
  double gamma_h_;  // acos(alpha)
};

class IntersectionRegion final : public Region {
 public:
  explicit IntersectionRegion(std::vector<RegionPtr> parts) : parts_(std::move(parts)) {}
  Side classify(const Box& cell) const override;
  RegionPtr mapped(const Point& shift, double scale) const override;

 private:
  std::vector<RegionPtr> parts_;
};

Side combine(Side a, Side b);

}  // namespace scenery
