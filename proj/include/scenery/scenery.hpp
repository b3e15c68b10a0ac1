#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <numbers>
#include <vector>

#include "scenery/measure.hpp"

namespace scenery {

inline constexpr double kDefaultDt = std::numbers::ln2 / 8.0;

// S_t: magnification by e^t about the origin, restricted to the closed unit ball
// and renormalized.
Measure magnify(const Measure& mu, double t);
// mu_{x,t} = S_t(T_x mu).
Measure scenery_at(const Measure& mu, const Point& x, double t);

using Observable = std::function<MassInterval(const Measure&)>;
// Evaluated on the conservative side: should fire only when certain.
using Predicate = std::function<bool(const Measure&)>;

struct ScaleSample {
  double t = 0.0;
  MassInterval f;
  bool hit = false;
};

struct ScaleScan {
  std::vector<ScaleSample> samples;
  double T = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;  // J = round(T / dt)
  double mean = 0.0;
  double hit_fraction = 0.0;
  bool truncated = false;  // orbit stopped at a zero-mass view
};

// Number of grid times t_j = j dt, j = 0..J-1, with J = round(T/dt).
std::size_t time_steps(double T, double dt);

// Riemann-sum Cesaro statistics along the orbit t -> mu_{x,t}. Observables whose
// enclosure is wider than `width_tol` raise PrecisionLoss.
ScaleScan scenery_statistics(const Measure& mu, const Point& x, double T, double dt,
                             const Observable& f, const Predicate& pred,
                             double width_tol = std::numeric_limits<double>::infinity());

// Fills mean / hit_fraction from the samples.
void summarize(ScaleScan& scan);

// CSV rows x_id,t,f_low,f_mid,f_high,pred_hit (header when `header`).
void write_scan_csv(std::ostream& os, std::size_t x_id, const ScaleScan& scan, bool header);

}  // namespace scenery
