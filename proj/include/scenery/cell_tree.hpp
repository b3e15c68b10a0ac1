#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenery/geometry.hpp"

namespace scenery {

using json = nlohmann::json;

class CellTree;

// One node of a measure's refinement tree. `level` is local to `owner`.
struct Cell {
  Box box;
  double mass = 0.0;
  int level = 0;
  const CellTree* owner = nullptr;
};

// Finite-resolution measure as a refinement tree: every cell's box contains the
// support of the mass it carries, and children masses sum to the parent mass.
class CellTree {
 public:
  virtual ~CellTree() = default;

  virtual int dim() const = 0;
  // Level of the leaves.
  virtual int levels() const = 0;
  virtual Cell root() const = 0;
  // Appends the positive-mass children of `cell`; `cell.owner` must be this tree
  // unless the tree composes others (product, mixture).
  virtual void children(const Cell& cell, std::vector<Cell>& out) const = 0;
  // False when boxes carry rounding error (non-dyadic ratios); descent then pads them.
  virtual bool exact_boxes() const { return true; }
  // Children depend only on (box, level): the tree can act as a product factor.
  virtual bool factorizable() const { return true; }
  virtual json to_json() const = 0;

  bool is_leaf(const Cell& c) const { return c.level >= levels(); }
};

using TreePtr = std::shared_ptr<const CellTree>;

// Placement of a tree's unit cell [0,1]^d in space.
struct Frame {
  Point origin{};
  double size = 1.0;
};

// Scale-invariant refinement stencil: every child is the parent scaled by
// `ratio` and shifted by `offset` (in units of the parent side).
struct Stencil {
  double ratio = 0.5;
  std::vector<Point> offsets;
  std::vector<double> fractions;
};

struct SubdivisionRule {
  enum class Kind { uniform, plane, cantor };

  Kind kind = Kind::uniform;
  int base = 2;            // uniform / plane: per-axis branching
  std::vector<int> axes;   // plane: axes spanned by the plane through the lower face
  double alpha = 0.25;     // cantor: porosity parameter, ratio (1-2a)/(2-2a)

  static SubdivisionRule uniform(int base = 2);
  static SubdivisionRule plane(std::vector<int> axes, int base = 2);
  static SubdivisionRule cantor(double alpha);

  Stencil stencil(int dim) const;
  double ratio() const;
  json to_json() const;
  static SubdivisionRule from_json(const json& j);
};

struct IfsMap {
  double ratio = 0.5;
  Point offset{};
};

struct IfsSpec {
  int dim = 1;
  std::vector<IfsMap> maps;
  std::vector<double> weights;

  // Throws InvalidParams unless weights are a probability vector, every image
  // of the unit cell lies in it, and the images are pairwise disjoint (touching
  // allowed).
  void validate() const;
  json to_json() const;
};

// Self-similar measure of a homothetic IFS with strong separation.
class IfsTree final : public CellTree {
 public:
  IfsTree(IfsSpec spec, Frame frame, int max_depth);

  int dim() const override { return spec_.dim; }
  int levels() const override { return levels_; }
  Cell root() const override;
  void children(const Cell& cell, std::vector<Cell>& out) const override;
  bool exact_boxes() const override { return exact_; }
  json to_json() const override;

  const IfsSpec& spec() const { return spec_; }

 private:
  IfsSpec spec_;
  Frame frame_;
  int max_depth_;
  int levels_;
  bool exact_;
};

// Dyadic-style grid measure: level n of the tree refines with rules[labels[n]].
class LevelRuleTree final : public CellTree {
 public:
  LevelRuleTree(int dim, std::vector<SubdivisionRule> rules, std::vector<std::uint8_t> labels,
                Frame frame, json spec);

  int dim() const override { return dim_; }
  int levels() const override { return static_cast<int>(labels_.size()); }
  Cell root() const override;
  void children(const Cell& cell, std::vector<Cell>& out) const override;
  bool exact_boxes() const override { return exact_; }
  json to_json() const override { return spec_; }

  const std::vector<std::uint8_t>& labels() const { return labels_; }

 private:
  int dim_;
  std::vector<Stencil> stencils_;
  std::vector<std::uint8_t> labels_;
  Frame frame_;
  json spec_;
  bool exact_;
};

// Normalized k-dimensional measure on the cube [-1,1]^k inside the coordinate
// plane spanned by `axes`.
class PlaneTree final : public CellTree {
 public:
  PlaneTree(int dim, std::vector<int> axes, int max_depth);

  int dim() const override { return dim_; }
  int levels() const override { return max_depth_ + 1; }
  Cell root() const override;
  void children(const Cell& cell, std::vector<Cell>& out) const override;
  json to_json() const override;

 private:
  int dim_;
  std::vector<int> axes_;
  int max_depth_;
};

class PointTree final : public CellTree {
 public:
  PointTree(int dim, const Point& at) : dim_(dim), at_(at) {}

  int dim() const override { return dim_; }
  int levels() const override { return 0; }
  Cell root() const override;
  void children(const Cell&, std::vector<Cell>&) const override {}
  bool factorizable() const override { return false; }
  json to_json() const override;

 private:
  int dim_;
  Point at_;
};

class ProductTree final : public CellTree {
 public:
  explicit ProductTree(std::vector<TreePtr> factors);

  int dim() const override { return dim_; }
  int levels() const override { return levels_; }
  Cell root() const override;
  void children(const Cell& cell, std::vector<Cell>& out) const override;
  bool exact_boxes() const override { return exact_; }
  json to_json() const override;

 private:
  std::vector<TreePtr> factors_;
  std::vector<int> axis_offset_;
  int dim_ = 0;
  int levels_ = 0;
  bool exact_ = true;
};

// Weighted combination of trees with disjoint placements.
class MixtureTree final : public CellTree {
 public:
  MixtureTree(std::vector<TreePtr> components, std::vector<double> weights);

  int dim() const override { return components_.front()->dim(); }
  int levels() const override { return 1; }
  Cell root() const override;
  void children(const Cell& cell, std::vector<Cell>& out) const override;
  bool exact_boxes() const override { return exact_; }
  bool factorizable() const override { return false; }
  json to_json() const override;

 private:
  std::vector<TreePtr> components_;
  std::vector<double> weights_;
  Box bounds_;
  bool exact_ = true;
};

// Number of levels needed before a cell of side `size` contracting by `ratio`
// per level is at most 2^-max_depth.
int levels_for_resolution(double size, double ratio, int max_depth);

}  // namespace scenery
