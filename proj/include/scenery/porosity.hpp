#pragma once

#include "scenery/measure.hpp"
#include "scenery/scenery.hpp"

namespace scenery {

struct PoreWitness {
  bool found = false;
  Point y{};
  double alpha_hat = 0.0;  // relative hole radius
  double eps = 0.0;
  double r = 0.0;
  // Hole mass over ball mass: high end of the enclosure.
  double hole_ratio_high = 0.0;
};

struct PoreOptions {
  int grid_res = 32;
  int depth = -1;        // -1: measure default for the radius
  bool refine = true;    // local refinement around the best grid cell
};

// Largest alpha with some grid center y such that B(y, alpha r) lies in the
// closed ball B(x, r) and carries at most eps times its mass.
PoreWitness pore_search(const Measure& mu, const Point& x, double r, double eps,
                        const PoreOptions& opt = {});

struct AnnularSpec {
  double rho = 1.0;

  double c() const { return 1.0 / (1.0 + rho); }
};

// Same with y restricted to the annulus cr <= |x - y| <= r and hole radius
// alpha * rho * |x - y|, alpha in [0, 1].
PoreWitness annular_pore_search(const Measure& mu, const Point& x, double r,
                                const AnnularSpec& spec, double eps, const PoreOptions& opt = {});

// True if some grid center carries a pore of relative radius alpha.
bool has_pore(const Measure& mu, const Point& x, double r, double alpha, double eps,
              const PoreOptions& opt = {});

struct PorosityScan {
  ScaleScan scan;  // hit = pore of relative radius >= alpha at that scale
  double fraction = 0.0;
};

PorosityScan porosity_scale_fraction(const Measure& mu, const Point& x, double T, double alpha,
                                     double eps, double dt = kDefaultDt,
                                     const PoreOptions& opt = {});

}  // namespace scenery
