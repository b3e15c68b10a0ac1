#include "scenery/cell_tree.hpp"

#include <cmath>
#include <numeric>

#include "scenery/error.hpp"

namespace scenery {
namespace {

bool is_dyadic(double v) {
  const double scaled = std::ldexp(v, 60);
  return std::isfinite(scaled) && scaled == std::floor(scaled);
}

Box unit_box(const Frame& f, int dim) {
  Box b;
  b.lo = f.origin;
  b.hi = f.origin;
  for (int a = 0; a < dim; ++a) b.hi[a] = f.origin[a] + f.size;
  return b;
}

json point_json(const Point& p, int dim) {
  json j = json::array();
  for (int a = 0; a < dim; ++a) j.push_back(p[a]);
  return j;
}

void check_dim(int dim) {
  require(dim >= 1 && dim <= kMaxTreeDim, "ambient dimension must be 1, 2 or 3");
}

}  // namespace

int levels_for_resolution(double size, double ratio, int max_depth) {
  const double need = std::log2(size) + max_depth;
  if (need <= 0.0) return 0;
  return static_cast<int>(std::ceil(need / -std::log2(ratio) - 1e-12));
}

// ---------------------------------------------------------------- rules

SubdivisionRule SubdivisionRule::uniform(int base) {
  SubdivisionRule r;
  r.kind = Kind::uniform;
  r.base = base;
  return r;
}

SubdivisionRule SubdivisionRule::plane(std::vector<int> axes, int base) {
  SubdivisionRule r;
  r.kind = Kind::plane;
  r.base = base;
  r.axes = std::move(axes);
  return r;
}

SubdivisionRule SubdivisionRule::cantor(double alpha) {
  SubdivisionRule r;
  r.kind = Kind::cantor;
  r.alpha = alpha;
  return r;
}

double SubdivisionRule::ratio() const {
  if (kind == Kind::cantor) return (1.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha);
  return 1.0 / base;
}

Stencil SubdivisionRule::stencil(int dim) const {
  check_dim(dim);
  Stencil s;
  s.ratio = ratio();
  std::vector<std::vector<double>> per_axis(dim);
  switch (kind) {
    case Kind::uniform:
    case Kind::plane: {
      require(base >= 2 && base <= 16, "subdivision base must be in [2,16]");
      std::vector<bool> spanned(dim, kind == Kind::uniform);
      for (int a : axes) {
        require(a >= 0 && a < dim, "plane axis out of range");
        spanned[a] = true;
      }
      if (kind == Kind::plane) {
        require(!axes.empty() && static_cast<int>(axes.size()) < dim,
                "plane rule needs 1 <= k < d axes");
      }
      for (int a = 0; a < dim; ++a) {
        if (spanned[a]) {
          for (int i = 0; i < base; ++i) per_axis[a].push_back(static_cast<double>(i) / base);
        } else {
          per_axis[a].push_back(0.0);
        }
      }
      break;
    }
    case Kind::cantor:
      require(alpha > 0.0 && alpha < 0.5, "cantor alpha must be in (0, 1/2)");
      for (int a = 0; a < dim; ++a) per_axis[a] = {0.0, 1.0 - s.ratio};
      break;
  }
  std::size_t count = 1;
  for (const auto& v : per_axis) count *= v.size();
  const double fraction = 1.0 / static_cast<double>(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    Point off{};
    std::size_t rest = idx;
    for (int a = 0; a < dim; ++a) {
      off[a] = per_axis[a][rest % per_axis[a].size()];
      rest /= per_axis[a].size();
    }
    s.offsets.push_back(off);
    s.fractions.push_back(fraction);
  }
  return s;
}

json SubdivisionRule::to_json() const {
  switch (kind) {
    case Kind::uniform: return {{"kind", "uniform"}, {"base", base}};
    case Kind::plane: return {{"kind", "plane"}, {"base", base}, {"axes", axes}};
    case Kind::cantor: return {{"kind", "cantor"}, {"alpha", alpha}};
  }
  return {};
}

SubdivisionRule SubdivisionRule::from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "rule spec needs a kind");
  const std::string k = j.at("kind").get<std::string>();
  if (k == "uniform") return uniform(j.value("base", 2));
  if (k == "plane") return plane(j.at("axes").get<std::vector<int>>(), j.value("base", 2));
  if (k == "cantor") return cantor(j.at("alpha").get<double>());
  fail(ErrorCode::invalid_params, "unknown rule kind '" + k + "'");
}

// ---------------------------------------------------------------- IFS

void IfsSpec::validate() const {
  check_dim(dim);
  require(!maps.empty(), "IFS needs at least one map");
  require(weights.size() == maps.size(), "IFS weights must match maps");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "IFS weights must be nonnegative");
    total += w;
  }
  require(std::fabs(total - 1.0) <= 1e-12, "IFS weights must sum to 1");
  for (const auto& m : maps) {
    require(m.ratio > 0.0 && m.ratio < 1.0, "IFS ratios must lie in (0,1)");
    for (int a = 0; a < dim; ++a) {
      require(m.offset[a] >= 0.0 && m.offset[a] + m.ratio <= 1.0 + 1e-12,
              "IFS images must lie in the unit cell");
    }
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    for (std::size_t j = i + 1; j < maps.size(); ++j) {
      // Cubes are disjoint (up to touching) iff some axis separates them.
      double margin = -1.0;
      for (int a = 0; a < dim; ++a) {
        const double gap_ij = maps[j].offset[a] - (maps[i].offset[a] + maps[i].ratio);
        const double gap_ji = maps[i].offset[a] - (maps[j].offset[a] + maps[j].ratio);
        margin = std::max({margin, gap_ij, gap_ji});
      }
      require(margin >= -1e-12, "IFS images overlap (strong separation fails)");
    }
  }
}

json IfsSpec::to_json() const {
  json jm = json::array();
  for (const auto& m : maps) jm.push_back({{"ratio", m.ratio}, {"offset", point_json(m.offset, dim)}});
  return {{"type", "ifs"}, {"dim", dim}, {"maps", jm}, {"weights", weights}};
}

IfsTree::IfsTree(IfsSpec spec, Frame frame, int max_depth)
    : spec_(std::move(spec)), frame_(frame), max_depth_(max_depth) {
  spec_.validate();
  require(frame_.size > 0.0, "frame size must be positive");
  double rmax = 0.0;
  exact_ = is_dyadic(frame_.size);
  for (int a = 0; a < spec_.dim; ++a) exact_ = exact_ && is_dyadic(frame_.origin[a]);
  for (const auto& m : spec_.maps) {
    rmax = std::max(rmax, m.ratio);
    exact_ = exact_ && is_dyadic(m.ratio);
    for (int a = 0; a < spec_.dim; ++a) exact_ = exact_ && is_dyadic(m.offset[a]);
  }
  levels_ = levels_for_resolution(frame_.size, rmax, max_depth_);
}

Cell IfsTree::root() const { return {unit_box(frame_, spec_.dim), 1.0, 0, this}; }

void IfsTree::children(const Cell& cell, std::vector<Cell>& out) const {
  const double side = cell.box.hi[0] - cell.box.lo[0];
  for (std::size_t i = 0; i < spec_.maps.size(); ++i) {
    const double w = spec_.weights[i];
    if (w <= 0.0) continue;
    const auto& m = spec_.maps[i];
    Cell c;
    c.box.lo = cell.box.lo;
    c.box.hi = cell.box.lo;
    for (int a = 0; a < spec_.dim; ++a) {
      c.box.lo[a] = cell.box.lo[a] + side * m.offset[a];
      c.box.hi[a] = c.box.lo[a] + side * m.ratio;
    }
    c.mass = cell.mass * w;
    c.level = cell.level + 1;
    c.owner = this;
    out.push_back(c);
  }
}

json IfsTree::to_json() const {
  json j = spec_.to_json();
  j["origin"] = point_json(frame_.origin, spec_.dim);
  j["size"] = frame_.size;
  return j;
}

// ---------------------------------------------------------------- level-rule grids

LevelRuleTree::LevelRuleTree(int dim, std::vector<SubdivisionRule> rules,
                             std::vector<std::uint8_t> labels, Frame frame, json spec)
    : dim_(dim), labels_(std::move(labels)), frame_(frame), spec_(std::move(spec)) {
  check_dim(dim_);
  require(!rules.empty(), "grid needs a subdivision rule");
  require(frame_.size > 0.0, "frame size must be positive");
  exact_ = is_dyadic(frame_.size);
  for (int a = 0; a < dim_; ++a) exact_ = exact_ && is_dyadic(frame_.origin[a]);
  for (const auto& r : rules) {
    stencils_.push_back(r.stencil(dim_));
    const Stencil& s = stencils_.back();
    exact_ = exact_ && is_dyadic(s.ratio);
    for (const auto& o : s.offsets) {
      for (int a = 0; a < dim_; ++a) exact_ = exact_ && is_dyadic(o[a]);
    }
  }
  for (auto l : labels_) require(l < stencils_.size(), "grid label out of range");
}

Cell LevelRuleTree::root() const { return {unit_box(frame_, dim_), 1.0, 0, this}; }

void LevelRuleTree::children(const Cell& cell, std::vector<Cell>& out) const {
  const Stencil& s = stencils_[labels_[cell.level]];
  const double side = cell.box.hi[0] - cell.box.lo[0];
  const double child = side * s.ratio;
  for (std::size_t i = 0; i < s.offsets.size(); ++i) {
    Cell c;
    c.box.lo = cell.box.lo;
    c.box.hi = cell.box.lo;
    for (int a = 0; a < dim_; ++a) {
      c.box.lo[a] = cell.box.lo[a] + side * s.offsets[i][a];
      c.box.hi[a] = c.box.lo[a] + child;
    }
    c.mass = cell.mass * s.fractions[i];
    c.level = cell.level + 1;
    c.owner = this;
    out.push_back(c);
  }
}

// ---------------------------------------------------------------- planes

PlaneTree::PlaneTree(int dim, std::vector<int> axes, int max_depth)
    : dim_(dim), axes_(std::move(axes)), max_depth_(max_depth) {
  check_dim(dim_);
  require(!axes_.empty() && static_cast<int>(axes_.size()) < dim_, "plane needs 1 <= k < d");
  for (int a : axes_) require(a >= 0 && a < dim_, "plane axis out of range");
}

Cell PlaneTree::root() const {
  Cell c;
  for (int a : axes_) {
    c.box.lo[a] = -1.0;
    c.box.hi[a] = 1.0;
  }
  c.mass = 1.0;
  c.owner = this;
  return c;
}

void PlaneTree::children(const Cell& cell, std::vector<Cell>& out) const {
  const int k = static_cast<int>(axes_.size());
  const double frac = std::ldexp(1.0, -k);
  for (int idx = 0; idx < (1 << k); ++idx) {
    Cell c = cell;
    for (int i = 0; i < k; ++i) {
      const int a = axes_[i];
      const double mid = 0.5 * (cell.box.lo[a] + cell.box.hi[a]);
      if (idx & (1 << i)) {
        c.box.lo[a] = mid;
      } else {
        c.box.hi[a] = mid;
      }
    }
    c.mass = cell.mass * frac;
    c.level = cell.level + 1;
    out.push_back(c);
  }
}

json PlaneTree::to_json() const { return {{"type", "plane"}, {"dim", dim_}, {"axes", axes_}}; }

// ---------------------------------------------------------------- point

Cell PointTree::root() const { return {{at_, at_}, 1.0, 0, this}; }

json PointTree::to_json() const {
  return {{"type", "point_mass"}, {"dim", dim_}, {"at", point_json(at_, dim_)}};
}

// ---------------------------------------------------------------- products

ProductTree::ProductTree(std::vector<TreePtr> factors) : factors_(std::move(factors)) {
  require(factors_.size() >= 2, "product needs at least two factors");
  levels_ = factors_.front()->levels();
  for (const auto& f : factors_) {
    if (!f->factorizable()) {
      fail(ErrorCode::unsupported_kind, "product factors must support cylinder factorization");
    }
    axis_offset_.push_back(dim_);
    dim_ += f->dim();
    levels_ = std::min(levels_, f->levels());
    exact_ = exact_ && f->exact_boxes();
  }
  require(dim_ <= kMaxTreeDim, "product dimension exceeds 3");
}

Cell ProductTree::root() const {
  Cell c;
  c.mass = 1.0;
  c.owner = this;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Cell r = factors_[i]->root();
    for (int a = 0; a < factors_[i]->dim(); ++a) {
      c.box.lo[axis_offset_[i] + a] = r.box.lo[a];
      c.box.hi[axis_offset_[i] + a] = r.box.hi[a];
    }
  }
  return c;
}

void ProductTree::children(const Cell& cell, std::vector<Cell>& out) const {
  std::vector<std::vector<Cell>> parts(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    Cell slice;
    for (int a = 0; a < factors_[i]->dim(); ++a) {
      slice.box.lo[a] = cell.box.lo[axis_offset_[i] + a];
      slice.box.hi[a] = cell.box.hi[axis_offset_[i] + a];
    }
    slice.mass = 1.0;
    slice.level = cell.level;
    slice.owner = factors_[i].get();
    factors_[i]->children(slice, parts[i]);
    if (parts[i].empty()) return;
  }
  std::vector<std::size_t> idx(parts.size(), 0);
  while (true) {
    Cell c;
    c.mass = cell.mass;
    c.level = cell.level + 1;
    c.owner = this;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const Cell& p = parts[i][idx[i]];
      c.mass *= p.mass;
      for (int a = 0; a < factors_[i]->dim(); ++a) {
        c.box.lo[axis_offset_[i] + a] = p.box.lo[a];
        c.box.hi[axis_offset_[i] + a] = p.box.hi[a];
      }
    }
    if (c.mass > 0.0) out.push_back(c);
    std::size_t i = 0;
    while (i < parts.size() && ++idx[i] == parts[i].size()) idx[i++] = 0;
    if (i == parts.size()) break;
  }
}

json ProductTree::to_json() const {
  json f = json::array();
  for (const auto& t : factors_) f.push_back(t->to_json());
  return {{"type", "product"}, {"factors", f}};
}

// ---------------------------------------------------------------- mixtures

MixtureTree::MixtureTree(std::vector<TreePtr> components, std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  require(!components_.empty(), "mixture needs components");
  require(components_.size() == weights_.size(), "mixture weights must match components");
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  require(std::fabs(total - 1.0) <= 1e-12, "mixture weights must sum to 1");
  const int d = components_.front()->dim();
  bounds_ = components_.front()->root().box;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    require(components_[i]->dim() == d, "mixture components must share dimension");
    require(weights_[i] >= 0.0, "mixture weights must be nonnegative");
    const Box b = components_[i]->root().box;
    for (int a = 0; a < kMaxTreeDim; ++a) {
      bounds_.lo[a] = std::min(bounds_.lo[a], b.lo[a]);
      bounds_.hi[a] = std::max(bounds_.hi[a], b.hi[a]);
    }
    exact_ = exact_ && components_[i]->exact_boxes();
  }
}

Cell MixtureTree::root() const { return {bounds_, 1.0, 0, this}; }

void MixtureTree::children(const Cell& cell, std::vector<Cell>& out) const {
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (weights_[i] <= 0.0) continue;
    Cell c = components_[i]->root();
    c.mass = cell.mass * weights_[i];
    out.push_back(c);
  }
}

json MixtureTree::to_json() const {
  json c = json::array();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    c.push_back({{"weight", weights_[i]}, {"spec", components_[i]->to_json()}});
  }
  return {{"type", "mixture"}, {"components", c}};
}

}  // namespace scenery
