#include "scenery/scenery.hpp"

#include <cmath>
#include <ostream>

namespace scenery {

Measure magnify(const Measure& mu, double t) {
  require(t >= 0.0 && std::isfinite(t), "magnification time must be nonnegative");
  if (!mu.in_support(Point{})) {
    fail(ErrorCode::origin_not_in_support, "origin is not in the support of the measure");
  }
  mu.check_radius(std::exp(-t));
  return mu.magnified(t);
}

Measure scenery_at(const Measure& mu, const Point& x, double t) {
  return magnify(mu.translated(x), t);
}

std::size_t time_steps(double T, double dt) {
  require(T > 0.0 && dt > 0.0, "scan needs T > 0 and dt > 0");
  const double j = std::round(T / dt);
  require(j >= 1.0 && j <= 1e6, "T/dt must lie in [1, 1e6]");
  return static_cast<std::size_t>(j);
}

void summarize(ScaleScan& scan) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (const auto& s : scan.samples) {
    sum += s.f.mid();
    hits += s.hit ? 1 : 0;
  }
  const double n = scan.samples.empty() ? 1.0 : static_cast<double>(scan.samples.size());
  scan.mean = sum / n;
  scan.hit_fraction = static_cast<double>(hits) / n;
}

ScaleScan scenery_statistics(const Measure& mu, const Point& x, double T, double dt,
                             const Observable& f, const Predicate& pred, double width_tol) {
  ScaleScan scan;
  scan.T = T;
  scan.dt = dt;
  scan.steps = time_steps(T, dt);
  for (std::size_t j = 0; j < scan.steps; ++j) {
    const double t = static_cast<double>(j) * dt;
    ScaleSample s;
    s.t = t;
    try {
      const Measure view = scenery_at(mu, x, t);
      if (f) s.f = f(view);
      if (pred) s.hit = pred(view);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::zero_mass) throw;
      scan.truncated = true;
      break;
    }
    if (s.f.width() > width_tol) {
      fail(ErrorCode::precision_loss, "observable enclosure wider than tolerance");
    }
    scan.samples.push_back(s);
  }
  summarize(scan);
  return scan;
}

void write_scan_csv(std::ostream& os, std::size_t x_id, const ScaleScan& scan, bool header) {
  if (header) os << "x_id,t,f_low,f_mid,f_high,pred_hit\n";
  const auto old = os.precision(17);
  for (const auto& s : scan.samples) {
    os << x_id << ',' << s.t << ',' << s.f.low << ',' << s.f.mid() << ',' << s.f.high << ','
       << (s.hit ? 1 : 0) << '\n';
  }
  os.precision(old);
}

}  // namespace scenery
