#include "scenery/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "scenery/rng.hpp"

namespace scenery {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double unit_ball_volume(int k) {
  switch (k) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

json point_json(const Point& p, int dim) {
  json j = json::array();
  for (int a = 0; a < dim; ++a) j.push_back(p[a]);
  return j;
}

}  // namespace

int refine_levels(int dim) {
  switch (dim) {
    case 1: return 24;
    case 2: return 10;
    default: return 6;
  }
}

Measure::Measure(TreePtr tree, std::string kind, json spec, int max_depth,
                 std::optional<FlatInfo> flat, std::vector<BallRestriction> balls)
    : tree_(std::move(tree)),
      kind_(std::move(kind)),
      spec_(std::move(spec)),
      max_depth_(max_depth),
      flat_(std::move(flat)),
      balls_(std::move(balls)) {
  require(tree_ != nullptr, "measure needs a cell tree");
  require(max_depth_ >= 1 && max_depth_ <= 60, "max_depth must be in [1,60]");
  z_ = compute_normalizer(std::min(this->max_depth(), refine_levels(dim())));
  if (z_.high <= 0.0) fail(ErrorCode::zero_mass, "measure has no mass in its restriction set");
}

int Measure::max_depth() const {
  return static_cast<int>(std::floor(max_depth_ - log_scale_ / std::numbers::ln2 + 1e-9));
}

Point Measure::to_view(const Point& base) const {
  const double s = scale();
  Point y{};
  for (int a = 0; a < dim(); ++a) y[a] = (base[a] - center_[a]) * s;
  return y;
}

Point Measure::to_base(const Point& view) const {
  const double inv = std::exp(-log_scale_);
  Point p{};
  for (int a = 0; a < dim(); ++a) p[a] = center_[a] + inv * view[a];
  return p;
}

Box Measure::to_view(const Box& base) const { return {to_view(base.lo), to_view(base.hi)}; }

void Measure::check_radius(double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::invalid_radius, "radius must be positive");
  if (r < std::ldexp(1.0, -max_depth())) {
    fail(ErrorCode::depth_exceeded, "radius below the resolution floor");
  }
}

void Measure::check_depth(int depth) const {
  if (depth > max_depth()) fail(ErrorCode::depth_exceeded, "query depth exceeds max_depth");
}

int Measure::default_depth(double r) const {
  check_radius(r);
  const int below = static_cast<int>(std::ceil(std::log2(1.0 / r) - 1e-12));
  return std::min(max_depth(), below + refine_levels(dim()));
}

Box Measure::padded(const Box& b) const {
  if (tree_->exact_boxes()) return b;
  Box p = b;
  for (int a = 0; a < dim(); ++a) {
    const double pad = 64.0 * kEps * std::max(std::fabs(b.lo[a]), std::fabs(b.hi[a]));
    p.lo[a] -= pad;
    p.hi[a] += pad;
  }
  return p;
}

Side Measure::restriction_side(const Box& base_box) const {
  Side s = Side::inside;
  for (const auto& b : balls_) {
    s = combine(s, BallRegion(b.center, b.radius()).classify(base_box));
    if (s == Side::outside) return s;
  }
  for (const auto& r : regions_) {
    s = combine(s, r->classify(base_box));
    if (s == Side::outside) return s;
  }
  return s;
}

MassInterval Measure::base_mass(const Region& base_region, double stop) const {
  CompensatedSum low, high;
  walk([&](const Cell& cell, Side rs) {
    const Side s = combine(rs, base_region.classify(padded(cell.box)));
    if (s == Side::outside) return false;
    if (s == Side::inside) {
      low.add(cell.mass);
      high.add(cell.mass);
      return false;
    }
    if (cell.owner->is_leaf(cell) || cell.box.max_side() <= stop) {
      high.add(cell.mass);
      return false;
    }
    return true;
  });
  return {low.value(), high.value(), 0};
}

MassInterval Measure::normalize(const MassInterval& base) const {
  MassInterval out;
  out.low = std::min(1.0, base.low / z_.high);
  out.high = z_.low > 0.0 ? std::min(1.0, base.high / z_.low) : (base.high > 0.0 ? 1.0 : 0.0);
  out.low = std::min(out.low, out.high);
  out.depth_used = base.depth_used;
  return out;
}

std::optional<double> Measure::flat_ball_mass(const Point& c, double radius) const {
  if (!flat_) return std::nullopt;
  std::vector<bool> in_plane(dim(), false);
  for (int a : flat_->axes) in_plane[a] = true;
  double off = 0.0;
  for (int a = 0; a < dim(); ++a) {
    if (!in_plane[a]) off += c[a] * c[a];
  }
  if (off >= radius * radius) return 0.0;
  const double rho = std::sqrt(radius * radius - off);
  for (int a : flat_->axes) {
    if (std::fabs(c[a]) + rho > 1.0) return std::nullopt;
  }
  const int k = static_cast<int>(flat_->axes.size());
  return unit_ball_volume(k) * std::pow(rho, k) / std::ldexp(1.0, k);
}

MassInterval Measure::compute_normalizer(int depth) const {
  if (balls_.empty() && regions_.empty()) return {1.0, 1.0, depth};
  if (balls_.size() == 1 && regions_.empty()) {
    if (auto z = flat_ball_mass(balls_[0].center, balls_[0].radius())) return {*z, *z, depth};
  }
  MassInterval z = base_mass(WholeSpace(), std::ldexp(std::exp(-log_scale_), -depth));
  z.depth_used = depth;
  return z;
}

MassInterval Measure::mass(const RegionPtr& view_region, int depth) const {
  check_depth(depth);
  const RegionPtr base = affine_image(view_region, center_, std::exp(-log_scale_));
  MassInterval m = base_mass(*base, std::ldexp(std::exp(-log_scale_), -depth));
  m.depth_used = depth;
  return normalize(m);
}

MassInterval Measure::ball_mass(const Point& x, double r, int depth) const {
  check_radius(r);
  return mass(std::make_shared<BallRegion>(x, r), depth);
}

Measure Measure::translated(const Point& x) const {
  Measure m = *this;
  m.viewed_ = true;
  const double inv = std::exp(-log_scale_);
  for (int a = 0; a < dim(); ++a) m.center_[a] = center_[a] + inv * x[a];
  return m;
}

Measure Measure::magnified(double t) const {
  require(t >= 0.0 && std::isfinite(t), "magnification time must be nonnegative");
  Measure m = *this;
  m.viewed_ = true;
  m.log_scale_ = log_scale_ + t;
  const BallRestriction ball{center_, m.log_scale_};
  const double r = ball.radius();
  std::vector<BallRestriction> kept;
  for (const auto& b : balls_) {
    if (b.center == ball.center && b.log_radius <= ball.log_radius) continue;
    if (norm(b.center - ball.center) + r <= b.radius() * (1.0 - 4.0 * kEps)) continue;
    kept.push_back(b);
  }
  kept.push_back(ball);
  m.balls_ = std::move(kept);
  m.z_ = m.compute_normalizer(std::min(m.max_depth(), refine_levels(dim())));
  if (m.z_.high <= 0.0) fail(ErrorCode::zero_mass, "magnified ball carries no mass");
  return m;
}

Measure Measure::restricted(const RegionPtr& view_region, int depth) const {
  check_depth(depth);
  const RegionPtr base = affine_image(view_region, center_, std::exp(-log_scale_));
  MassInterval z = base_mass(*base, std::ldexp(std::exp(-log_scale_), -depth));
  if (z.high <= 0.0) fail(ErrorCode::zero_mass, "restriction region carries no mass");
  if (z.low <= 0.0) fail(ErrorCode::ambiguous_mass, "restriction mass not resolved at this depth");
  Measure m = *this;
  m.viewed_ = true;
  m.regions_.push_back(base);
  z.depth_used = depth;
  m.z_ = z;
  return m;
}

Measure Measure::with_view(const Point& center, double log_scale,
                           std::vector<BallRestriction> balls) const {
  require(!viewed_, "with_view needs an unviewed measure");
  Measure m = *this;
  m.viewed_ = true;
  m.center_ = center;
  m.log_scale_ = log_scale;
  m.balls_ = std::move(balls);
  m.z_ = m.compute_normalizer(std::min(m.max_depth(), refine_levels(dim())));
  if (m.z_.high <= 0.0) fail(ErrorCode::zero_mass, "view carries no mass");
  return m;
}

bool Measure::in_support(const Point& x) const {
  const Point p = to_base(x);
  bool found = false;
  walk([&](const Cell& cell, Side) {
    if (found) return false;
    Box b = padded(cell.box);
    for (int a = 0; a < dim(); ++a) {
      const double slack = 4.0 * kEps * std::max(1.0, std::fabs(p[a]));
      b.lo[a] -= slack;
      b.hi[a] += slack;
    }
    if (!b.contains(p)) return false;
    if (cell.owner->is_leaf(cell)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

std::vector<Point> Measure::sample(std::size_t n, std::uint64_t seed) const {
  // Frontier of cells at view resolution that meet the restrictions; below it,
  // children that miss the restrictions are dropped and the lost share is
  // undone by rejection, which keeps the draw exact.
  std::vector<Cell> frontier;
  std::vector<double> cumulative;
  {
    const bool restricted = !balls_.empty() || !regions_.empty();
    const int levels[] = {0, 10, 6, 4};
    const double stop = restricted ? std::ldexp(std::exp(-log_scale_), -levels[dim()])
                                 : std::numeric_limits<double>::infinity();
    CompensatedSum total;
    walk([&](const Cell& cell, Side side) {
      if (side == Side::outside || cell.mass <= 0.0) return false;
      if (cell.owner->is_leaf(cell) || cell.box.max_side() <= stop) {
        frontier.push_back(cell);
        total.add(cell.mass);
        cumulative.push_back(total.value());
        return false;
      }
      return true;
    });
  }
  if (frontier.empty()) fail(ErrorCode::zero_mass, "measure carries no mass");

  std::vector<Point> out;
  out.reserve(n);
  std::vector<Cell> kids;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(seed, i);
    bool accepted = false;
    for (int attempt = 0; attempt < 1024 && !accepted; ++attempt) {
      const double u0 = rng.uniform() * cumulative.back();
      const auto at = std::upper_bound(cumulative.begin(), cumulative.end(), u0) - cumulative.begin();
      Cell cell = frontier[std::min<std::size_t>(at, frontier.size() - 1)];
      double keep = 1.0;  // product of kept mass shares along the path
      bool dead = false;
      while (!cell.owner->is_leaf(cell)) {
        kids.clear();
        cell.owner->children(cell, kids);
        double total = 0.0, all = 0.0;
        for (auto& k : kids) {
          all += k.mass;
          if (k.mass > 0.0 && restriction_side(padded(k.box)) == Side::outside) k.mass = 0.0;
          total += k.mass;
        }
        if (total <= 0.0) {
          dead = true;
          break;
        }
        keep *= total / all;
        double u = rng.uniform() * total;
        std::size_t pick = kids.size() - 1;
        for (std::size_t j = 0; j < kids.size(); ++j) {
          if (kids[j].mass <= 0.0) continue;
          pick = j;
          if (u < kids[j].mass) break;
          u -= kids[j].mass;
        }
        cell = kids[pick];
      }
      if (dead || rng.uniform() >= keep) continue;
      Point p{};
      for (int a = 0; a < dim(); ++a) p[a] = rng.uniform(cell.box.lo[a], cell.box.hi[a]);
      bool ok = true;
      for (const auto& b : balls_) ok = ok && norm(p - b.center) <= b.radius();
      for (const auto& r : regions_) ok = ok && r->classify(Box{p, p}) != Side::outside;
      if (ok) {
        out.push_back(to_view(p));
        accepted = true;
      }
    }
    if (!accepted) fail(ErrorCode::zero_mass, "could not sample the restricted measure");
  }
  return out;
}

json Measure::to_json() const {
  if (!is_view()) return spec_;
  if (!regions_.empty()) {
    fail(ErrorCode::unsupported_kind, "measures restricted to general regions do not serialize");
  }
  json balls = json::array();
  for (const auto& b : balls_) {
    balls.push_back({{"center", point_json(b.center, dim())}, {"log_radius", b.log_radius}});
  }
  return {{"type", "view"},
          {"base", spec_},
          {"center", point_json(center_, dim())},
          {"log_scale", log_scale_},
          {"balls", balls}};
}

MassInterval ball_mass(const Measure& mu, const Point& x, double r, int depth) {
  return mu.ball_mass(x, r, depth);
}

Measure restrict(const Measure& mu, const RegionPtr& region, int depth) {
  return mu.restricted(region, depth);
}

Measure translate(const Measure& mu, const Point& x) { return mu.translated(x); }

std::vector<Point> support_sample(const Measure& mu, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "sample count must be positive");
  return mu.sample(n, seed);
}

}  // namespace scenery
