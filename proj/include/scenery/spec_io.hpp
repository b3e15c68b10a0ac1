#pragma once

#include "scenery/measure.hpp"

namespace scenery {

// Builds a measure from a JSON spec. Types: lebesgue_ball, point_mass, plane,
// ifs, grid, splice, product, mixture, and view (a serialized scenery view of
// any of these). Malformed specs raise ConfigError.
Measure measure_from_json(const json& spec);

// Spec that measure_from_json turns back into an equivalent measure.
json measure_to_json(const Measure& mu);

}  // namespace scenery
