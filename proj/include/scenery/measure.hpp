#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenery/cell_tree.hpp"
#include "scenery/error.hpp"
#include "scenery/geometry.hpp"
#include "scenery/mass_interval.hpp"

namespace scenery {

inline constexpr int kDefaultMaxDepth = 40;

// Restriction to the closed ball B(center, e^{-log_radius}) in base coordinates.
struct BallRestriction {
  Point center{};
  double log_radius = 0.0;

  double radius() const { return std::exp(-log_radius); }
};

// Uniform measure on [-1,1]^k inside the coordinate plane spanned by `axes`
// (all axes for Lebesgue). Lets normalizers of balls be computed in closed form.
struct FlatInfo {
  std::vector<int> axes;
};

// A probability measure at finite resolution: a cell tree in base coordinates,
// seen through a view frame y = (p - center) * e^{log_scale}, restricted to
// some regions and renormalized. All query points and radii are in view
// coordinates.
class Measure {
 public:
  Measure(TreePtr tree, std::string kind, json spec, int max_depth,
          std::optional<FlatInfo> flat = std::nullopt, std::vector<BallRestriction> balls = {});

  int dim() const { return tree_->dim(); }
  const CellTree& tree() const { return *tree_; }
  const TreePtr& tree_ptr() const { return tree_; }
  const std::string& kind() const { return kind_; }
  // Spec of the unviewed measure this one was built from.
  const json& base_spec() const { return spec_; }
  int base_max_depth() const { return max_depth_; }
  // Finest dyadic level representable in view coordinates.
  int max_depth() const;

  const Point& center() const { return center_; }
  double log_scale() const { return log_scale_; }
  double scale() const { return std::exp(log_scale_); }
  const std::vector<BallRestriction>& balls() const { return balls_; }
  const std::vector<RegionPtr>& regions() const { return regions_; }
  // True once translated, magnified or restricted.
  bool is_view() const { return viewed_; }
  // Unnormalized base mass of the restriction set.
  const MassInterval& normalizer() const { return z_; }

  Point to_view(const Point& base) const;
  Point to_base(const Point& view) const;
  Box to_view(const Box& base) const;

  // Throws InvalidRadius / DepthExceeded for radii outside the representable range.
  void check_radius(double r) const;
  void check_depth(int depth) const;
  // Depth used when the caller does not pick one: a fixed number of levels below r.
  int default_depth(double r) const;

  MassInterval mass(const RegionPtr& view_region, int depth) const;
  MassInterval ball_mass(const Point& x, double r, int depth) const;
  MassInterval ball_mass(const Point& x, double r) const { return ball_mass(x, r, default_depth(r)); }

  // Unnormalized enclosure of the base mass in `base_region` and the
  // restrictions, refining until base cells are at most `stop` wide.
  MassInterval base_mass(const Region& base_region, double stop) const;
  MassInterval normalize(const MassInterval& base) const;

  Measure translated(const Point& x) const;
  Measure magnified(double t) const;
  Measure restricted(const RegionPtr& view_region, int depth) const;
  // Rebuilds a serialized view of this (unviewed) measure.
  Measure with_view(const Point& center, double log_scale, std::vector<BallRestriction> balls) const;

  bool in_support(const Point& x) const;
  std::vector<Point> sample(std::size_t n, std::uint64_t seed) const;

  // Side of a base box with respect to all restrictions.
  Side restriction_side(const Box& base_box) const;
  // Base box grown by the rounding slack of inexact trees.
  Box padded(const Box& base_box) const;

  // Depth-first walk over cells not excluded by the restrictions.
  // `visit(cell, restriction_side)` returns true to descend into the children.
  template <class Visit>
  void walk(Visit&& visit) const {
    struct Item {
      Cell cell;
      bool restr_inside;
    };
    std::vector<Item> stack;
    std::vector<Cell> kids;
    stack.push_back({tree_->root(), regions_.empty() && balls_.empty()});
    while (!stack.empty()) {
      Item it = stack.back();
      stack.pop_back();
      Side rs = Side::inside;
      if (!it.restr_inside) {
        rs = restriction_side(padded(it.cell.box));
        if (rs == Side::outside) continue;
      }
      if (!visit(static_cast<const Cell&>(it.cell), rs)) continue;
      const CellTree* owner = it.cell.owner;
      if (owner->is_leaf(it.cell)) continue;
      kids.clear();
      owner->children(it.cell, kids);
      for (auto k = kids.rbegin(); k != kids.rend(); ++k) {
        if (k->mass > 0.0) stack.push_back({*k, rs == Side::inside});
      }
    }
  }

  json to_json() const;

 private:
  MassInterval compute_normalizer(int depth) const;
  std::optional<double> flat_ball_mass(const Point& c, double radius) const;

  TreePtr tree_;
  std::string kind_;
  json spec_;
  int max_depth_;
  std::optional<FlatInfo> flat_;
  Point center_{};
  double log_scale_ = 0.0;
  std::vector<BallRestriction> balls_;
  std::vector<RegionPtr> regions_;
  MassInterval z_{1.0, 1.0, 0};
  bool viewed_ = false;
};

// Extra dyadic levels below the query radius used by default, per dimension.
int refine_levels(int dim);

MassInterval ball_mass(const Measure& mu, const Point& x, double r, int depth);
Measure restrict(const Measure& mu, const RegionPtr& region, int depth);
Measure translate(const Measure& mu, const Point& x);
std::vector<Point> support_sample(const Measure& mu, std::size_t n, std::uint64_t seed);

}  // namespace scenery
