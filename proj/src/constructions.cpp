#include "scenery/constructions.hpp"

#include <cmath>
#include <memory>

#include "scenery/error.hpp"

namespace scenery {
namespace {

json point_json(const Point& p, int dim) {
  json j = json::array();
  for (int a = 0; a < dim; ++a) j.push_back(p[a]);
  return j;
}

std::vector<int> all_axes(int dim) {
  std::vector<int> a(dim);
  for (int i = 0; i < dim; ++i) a[i] = i;
  return a;
}

void check_dim(int dim) { require(dim >= 1 && dim <= 3, "dim must be 1, 2 or 3"); }

json frame_fields(json j, const Frame& f, int dim) {
  j["origin"] = point_json(f.origin, dim);
  j["size"] = f.size;
  return j;
}

}  // namespace

Measure lebesgue_ball(int dim, int max_depth) {
  check_dim(dim);
  const std::vector<std::uint8_t> labels(max_depth + 1, 0);
  Frame frame;
  for (int a = 0; a < dim; ++a) frame.origin[a] = -1.0;
  frame.size = 2.0;
  json spec = {{"type", "lebesgue_ball"}, {"dim", dim}, {"depth", max_depth}};
  auto tree = std::make_shared<LevelRuleTree>(dim, std::vector{SubdivisionRule::uniform(2)},
                                              labels, frame, spec);
  return Measure(tree, "lebesgue_ball", spec, max_depth, FlatInfo{all_axes(dim)},
                 {BallRestriction{{}, 0.0}});
}

Measure point_mass(int dim, const Point& at, int max_depth) {
  check_dim(dim);
  json spec = {{"type", "point_mass"}, {"dim", dim}, {"at", point_json(at, dim)}, {"depth", max_depth}};
  return Measure(std::make_shared<PointTree>(dim, at), "point_mass", spec, max_depth);
}

Measure plane(int dim, std::vector<int> axes, int max_depth) {
  check_dim(dim);
  auto tree = std::make_shared<PlaneTree>(dim, axes, max_depth);
  json spec = {{"type", "plane"}, {"dim", dim}, {"axes", axes}, {"depth", max_depth}};
  return Measure(tree, "plane", spec, max_depth, FlatInfo{axes}, {BallRestriction{{}, 0.0}});
}

Measure ifs_measure(const IfsSpec& spec, const Frame& frame, int max_depth) {
  auto tree = std::make_shared<IfsTree>(spec, frame, max_depth);
  json j = tree->to_json();
  j["depth"] = max_depth;
  return Measure(tree, "ifs", j, max_depth);
}

Measure grid_measure(int dim, const SubdivisionRule& rule, const Frame& frame, int max_depth) {
  check_dim(dim);
  const int levels = levels_for_resolution(frame.size, rule.ratio(), max_depth);
  json spec = frame_fields({{"type", "grid"}, {"dim", dim}, {"rule", rule.to_json()}}, frame, dim);
  spec["depth"] = max_depth;
  auto tree = std::make_shared<LevelRuleTree>(dim, std::vector{rule},
                                              std::vector<std::uint8_t>(levels, 0), frame, spec);
  return Measure(tree, "grid", spec, max_depth);
}

double salli_ratio(double alpha) {
  require(alpha > 0.0 && alpha < 0.5, "alpha must lie in (0, 1/2)");
  return (1.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha);
}

double salli_dimension(double alpha) {
  require(alpha > 0.0 && alpha < 0.5, "alpha must lie in (0, 1/2)");
  return std::log(2.0) / (std::log(2.0 - 2.0 * alpha) - std::log(1.0 - 2.0 * alpha));
}

Measure cantor_salli(double alpha, int max_depth) {
  const double rho = salli_ratio(alpha);
  IfsSpec spec;
  spec.dim = 1;
  spec.maps = {{rho, {0.0, 0.0, 0.0}}, {rho, {1.0 - rho, 0.0, 0.0}}};
  spec.weights = {0.5, 0.5};
  auto tree = std::make_shared<IfsTree>(spec, Frame{}, max_depth);
  json j = {{"type", "ifs"}, {"dim", 1}, {"salli_alpha", alpha}, {"depth", max_depth}};
  return Measure(tree, "ifs", j, max_depth);
}

Measure quarter_cantor(int max_depth) {
  IfsSpec spec;
  spec.dim = 1;
  spec.maps = {{0.25, {0.0, 0.0, 0.0}}, {0.25, {0.75, 0.0, 0.0}}};
  spec.weights = {0.5, 0.5};
  return ifs_measure(spec, Frame{}, max_depth);
}

Measure product_measure(const Measure& a, const Measure& b) {
  if (a.is_view() || b.is_view() || !a.balls().empty() || !b.balls().empty() ||
      !a.tree().factorizable() || !b.tree().factorizable()) {
    fail(ErrorCode::unsupported_kind, "product factors must be ifs or grid measures");
  }
  require(a.dim() + b.dim() <= 3, "product dimension exceeds 3");
  auto tree = std::make_shared<ProductTree>(std::vector<TreePtr>{a.tree_ptr(), b.tree_ptr()});
  const int depth = std::min(a.base_max_depth(), b.base_max_depth());
  json spec = {{"type", "product"}, {"factors", {a.base_spec(), b.base_spec()}}, {"depth", depth}};
  return Measure(tree, "product", spec, depth);
}

Measure mixture(const std::vector<Measure>& components, const std::vector<double>& weights) {
  require(!components.empty(), "mixture needs components");
  std::vector<TreePtr> trees;
  json parts = json::array();
  int depth = components.front().base_max_depth();
  for (std::size_t i = 0; i < components.size(); ++i) {
    const Measure& m = components[i];
    if (m.is_view() || !m.balls().empty()) {
      fail(ErrorCode::unsupported_kind, "mixture components must be unrestricted tree measures");
    }
    trees.push_back(m.tree_ptr());
    parts.push_back({{"weight", i < weights.size() ? weights[i] : 0.0}, {"spec", m.base_spec()}});
    depth = std::min(depth, m.base_max_depth());
  }
  auto tree = std::make_shared<MixtureTree>(trees, weights);
  json spec = {{"type", "mixture"}, {"components", parts}, {"depth", depth}};
  return Measure(tree, "mixture", spec, depth);
}

// ---------------------------------------------------------------- splice

int SpliceSchedule::block_length_at(int n) const {
  if (growth == Growth::constant) return block_length;
  int start = 0;
  for (int i = 1;; ++i) {
    const int len = first_block * i;
    if (n < start + len) return len;
    start += len;
  }
}

std::vector<std::uint8_t> SpliceSchedule::labels() const {
  require(q >= 0.0 && q <= 1.0, "splice frequency must lie in [0,1]");
  require(depth >= 0, "splice depth must be nonnegative");
  require(growth == Growth::constant ? block_length >= 1 : first_block >= 1,
          "splice blocks must have positive length");
  std::vector<std::uint8_t> out;
  out.reserve(depth);
  long b_count = 0;
  for (int i = 1; static_cast<int>(out.size()) < depth; ++i) {
    const int len = growth == Growth::constant ? block_length : first_block * i;
    const double n = static_cast<double>(out.size() + len);
    const double as_a = std::fabs(b_count / n - q);
    const double as_b = std::fabs((b_count + len) / n - q);
    const std::uint8_t label = as_b < as_a ? 1 : 0;
    if (label) b_count += len;
    for (int k = 0; k < len && static_cast<int>(out.size()) < depth; ++k) out.push_back(label);
  }
  return out;
}

json SpliceSchedule::to_json() const {
  json j = {{"q", q}, {"depth", depth}};
  if (growth == Growth::linear) {
    j["growth"] = "linear";
    j["first_block"] = first_block;
  } else {
    j["growth"] = "constant";
    j["L"] = block_length;
  }
  return j;
}

SpliceSchedule SpliceSchedule::from_json(const json& j) {
  SpliceSchedule s;
  s.q = j.value("q", 0.5);
  const std::string g = j.value("growth", std::string("linear"));
  if (g == "linear") {
    s.growth = Growth::linear;
    s.first_block = j.value("first_block", 1);
  } else if (g == "constant") {
    s.growth = Growth::constant;
    s.block_length = j.value("L", 1);
  } else {
    fail(ErrorCode::invalid_params, "unknown block growth '" + g + "'");
  }
  s.depth = j.value("depth", 0);
  return s;
}

int splice_levels(const SubdivisionRule& a, const SubdivisionRule& b, double size, int max_depth) {
  return levels_for_resolution(size, std::max(a.ratio(), b.ratio()), max_depth);
}

Measure splice(int dim, const SubdivisionRule& rule_a, const SubdivisionRule& rule_b,
               const SpliceSchedule& schedule, const Frame& frame, int max_depth) {
  check_dim(dim);
  SpliceSchedule s = schedule;
  if (s.depth <= 0) s.depth = splice_levels(rule_a, rule_b, frame.size, max_depth);
  json spec = frame_fields({{"type", "splice"},
                            {"dim", dim},
                            {"rule_a", rule_a.to_json()},
                            {"rule_b", rule_b.to_json()},
                            {"schedule", s.to_json()}},
                           frame, dim);
  spec["depth"] = max_depth;
  auto tree = std::make_shared<LevelRuleTree>(dim, std::vector{rule_a, rule_b}, s.labels(), frame, spec);
  return Measure(tree, "splice", spec, max_depth);
}

}  // namespace scenery
