#pragma once

#include <cstdint>
#include <vector>

#include "scenery/cell_tree.hpp"
#include "scenery/measure.hpp"

namespace scenery {

Measure lebesgue_ball(int dim, int max_depth = kDefaultMaxDepth);
Measure point_mass(int dim, const Point& at = {}, int max_depth = kDefaultMaxDepth);
// Normalized k-dimensional measure on the coordinate plane spanned by `axes`
// intersected with the unit ball.
Measure plane(int dim, std::vector<int> axes, int max_depth = kDefaultMaxDepth);

Measure ifs_measure(const IfsSpec& spec, const Frame& frame = {}, int max_depth = kDefaultMaxDepth);
// Uniform grid measure refined by the same rule at every level.
Measure grid_measure(int dim, const SubdivisionRule& rule, const Frame& frame = {},
                     int max_depth = kDefaultMaxDepth);

double salli_ratio(double alpha);
double salli_dimension(double alpha);
Measure cantor_salli(double alpha, int max_depth = kDefaultMaxDepth);
// Two maps of ratio 1/4 at offsets 0 and 3/4 with equal weights.
Measure quarter_cantor(int max_depth = kDefaultMaxDepth);

Measure product_measure(const Measure& a, const Measure& b);
Measure mixture(const std::vector<Measure>& components, const std::vector<double>& weights);

struct SpliceSchedule {
  enum class Growth { linear, constant };

  double q = 0.5;  // target frequency of B levels
  Growth growth = Growth::linear;
  int first_block = 1;  // linear: block i has length first_block * i
  int block_length = 1;  // constant growth
  int depth = 0;

  // Labels for levels 0..depth-1: 0 for A, 1 for B. Each block takes the label
  // that keeps the running B frequency closest to q; ties go to A.
  std::vector<std::uint8_t> labels() const;
  // Length of the block containing level n (0-based).
  int block_length_at(int n) const;
  json to_json() const;
  static SpliceSchedule from_json(const json& j);
};

Measure splice(int dim, const SubdivisionRule& rule_a, const SubdivisionRule& rule_b,
               const SpliceSchedule& schedule, const Frame& frame = {},
               int max_depth = kDefaultMaxDepth);

// Levels needed for a splice of the given rules to resolve 2^-max_depth.
int splice_levels(const SubdivisionRule& a, const SubdivisionRule& b, double size, int max_depth);

}  // namespace scenery
