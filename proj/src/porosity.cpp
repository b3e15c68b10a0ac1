#include "scenery/porosity.hpp"

#include <cmath>
#include <limits>

namespace scenery {
namespace {

constexpr double kAlphaTol = 0x1.0p-10;
constexpr int kRefineSteps = 8;

struct Context {
  const Measure& mu;
  Point apex;        // base coordinates
  double radius;     // base coordinates
  double stop;
  double threshold;  // allowed hole base mass
  double ball_low;
};

Context make_context(const Measure& mu, const Point& x, double r, double eps, const PoreOptions& opt) {
  require(eps >= 0.0, "eps must be nonnegative");
  require(opt.grid_res >= 8, "grid_res must be at least 8");
  mu.check_radius(r);
  const int depth = opt.depth >= 0 ? opt.depth : mu.default_depth(r);
  mu.check_depth(depth);
  const double inv = std::exp(-mu.log_scale());
  Context c{mu, mu.to_base(x), r * inv, std::ldexp(inv, -depth), 0.0, 0.0};
  const MassInterval ball = mu.base_mass(BallRegion(c.apex, c.radius), c.stop);
  if (ball.high <= 0.0) fail(ErrorCode::zero_mass, "ball carries no mass");
  c.ball_low = ball.low;
  c.threshold = eps * ball.low;
  return c;
}

// Upper enclosure of the base mass of the closed ball B(y, rad), giving up
// as soon as it exceeds `limit`. Returns +inf when it did.
double hole_high(const Context& c, const Point& y, double rad, double limit) {
  const BallRegion hole(y, rad);
  CompensatedSum high;
  bool over = false;
  c.mu.walk([&](const Cell& cell, Side) {
    if (over) return false;
    const Side s = hole.classify(c.mu.padded(cell.box));
    if (s == Side::outside) return false;
    if (s == Side::inside || cell.owner->is_leaf(cell) || cell.box.max_side() <= c.stop) {
      high.add(cell.mass);
      if (high.value() > limit) over = true;
      return false;
    }
    return true;
  });
  return over ? std::numeric_limits<double>::infinity() : high.value();
}

bool is_pore(const Context& c, const Point& y, double rad) {
  return hole_high(c, y, rad, c.threshold) <= c.threshold;
}

// Largest alpha in [lo, hi] with is_pore(y, alpha * unit), assuming lo works
// (or lo == 0). Returns -1 when even a hole just above lo fails.
double search_alpha(const Context& c, const Point& y, double unit, double lo, double hi) {
  if (hi <= lo) return -1.0;
  if (is_pore(c, y, hi * unit)) return hi;
  // below the cap, answers live on the fixed grid kAlphaTol * k, so the result
  // does not depend on the order offsets are visited
  long k_lo = static_cast<long>(std::floor(lo / kAlphaTol)) + 1;
  long k_hi = static_cast<long>(std::ceil(hi / kAlphaTol)) - 1;
  if (k_hi < k_lo || !is_pore(c, y, k_lo * kAlphaTol * unit)) return -1.0;
  while (k_lo < k_hi) {
    const long mid = (k_lo + k_hi + 1) / 2;
    if (is_pore(c, y, mid * kAlphaTol * unit)) k_lo = mid;
    else k_hi = mid - 1;
  }
  return k_lo * kAlphaTol;
}

// Grid offsets (in units of `step`) of every lattice point within `reach` of 0.
std::vector<Point> lattice(int dim, double step, double reach) {
  const int n = static_cast<int>(std::floor(reach / step + 1e-9));
  std::vector<Point> out;
  const int span = 2 * n + 1;
  long total = 1;
  for (int a = 0; a < dim; ++a) total *= span;
  for (long idx = 0; idx < total; ++idx) {
    Point p{};
    long rest = idx;
    for (int a = 0; a < dim; ++a) {
      p[a] = static_cast<double>(rest % span - n) * step;
      rest /= span;
    }
    if (norm(p) <= reach * (1.0 + 1e-12)) out.push_back(p);
  }
  return out;
}

// Max feasible alpha for the candidate offset, given the constraint kind.
struct Geometry {
  bool annular = false;
  double rho = 1.0;
  double c = 0.5;

  // Relative (to r) hole radius per unit alpha, and the alpha cap; cap < 0 rejects y.
  std::pair<double, double> limits(double offset_norm_rel) const {
    if (annular) {
      if (offset_norm_rel < c * (1.0 - 1e-12) || offset_norm_rel > 1.0 + 1e-12) return {0.0, -1.0};
      return {rho * offset_norm_rel, 1.0};
    }
    return {1.0, std::min(0.5, 1.0 - offset_norm_rel)};
  }
};

PoreWitness search(const Measure& mu, const Point& x, double r, double eps, const PoreOptions& opt,
                   const Geometry& g) {
  const Context c = make_context(mu, x, r, eps, opt);
  PoreWitness best;
  best.eps = eps;
  best.r = r;
  const int dim = mu.dim();
  Point best_off{};

  auto consider = [&](const Point& off_rel) {
    const double dist = norm(off_rel);
    const auto [unit_rel, cap] = g.limits(dist);
    if (cap <= best.alpha_hat || unit_rel <= 0.0) return;
    Point y = c.apex;
    for (int a = 0; a < dim; ++a) y[a] += off_rel[a] * c.radius;
    const double alpha = search_alpha(c, y, unit_rel * c.radius, best.alpha_hat, cap);
    if (alpha > best.alpha_hat || (alpha >= 0.0 && !best.found)) {
      best.found = alpha > 0.0;
      best.alpha_hat = std::max(alpha, 0.0);
      best_off = off_rel;
    }
  };

  const double step = 1.0 / opt.grid_res;
  for (const Point& off : lattice(dim, step, 1.0)) consider(off);
  if (opt.refine && best.found) {
    const Point center = best_off;
    const double fine = step / kRefineSteps;
    for (const Point& d : lattice(dim, fine, step)) consider(center + d);
  }
  if (best.found) {
    for (int a = 0; a < dim; ++a) best.y[a] = x[a] + best_off[a] * r;
    const double unit_rel = g.limits(norm(best_off)).first;
    Point yb = c.apex;
    for (int a = 0; a < dim; ++a) yb[a] += best_off[a] * c.radius;
    const double h = hole_high(c, yb, best.alpha_hat * unit_rel * c.radius,
                               std::numeric_limits<double>::infinity());
    best.hole_ratio_high = c.ball_low > 0.0 ? h / c.ball_low : 0.0;
  } else {
    best.y = x;
  }
  return best;
}

}  // namespace

PoreWitness pore_search(const Measure& mu, const Point& x, double r, double eps,
                        const PoreOptions& opt) {
  return search(mu, x, r, eps, opt, Geometry{});
}

PoreWitness annular_pore_search(const Measure& mu, const Point& x, double r,
                                const AnnularSpec& spec, double eps, const PoreOptions& opt) {
  require(spec.rho > 0.0 && spec.rho <= 1.0, "rho must lie in (0,1]");
  return search(mu, x, r, eps, opt, Geometry{true, spec.rho, spec.c()});
}

bool has_pore(const Measure& mu, const Point& x, double r, double alpha, double eps,
              const PoreOptions& opt) {
  require(alpha > 0.0 && alpha <= 0.5, "alpha must lie in (0, 1/2]");
  const Context c = make_context(mu, x, r, eps, opt);
  const double step = 1.0 / opt.grid_res;
  for (const Point& off : lattice(mu.dim(), step, 1.0 - alpha)) {
    Point y = c.apex;
    for (int a = 0; a < mu.dim(); ++a) y[a] += off[a] * c.radius;
    if (is_pore(c, y, alpha * c.radius)) return true;
  }
  return false;
}

PorosityScan porosity_scale_fraction(const Measure& mu, const Point& x, double T, double alpha,
                                     double eps, double dt, const PoreOptions& opt) {
  PorosityScan out;
  out.scan.T = T;
  out.scan.dt = dt;
  out.scan.steps = time_steps(T, dt);
  for (std::size_t j = 0; j < out.scan.steps; ++j) {
    ScaleSample s;
    s.t = static_cast<double>(j) * dt;
    try {
      s.hit = has_pore(mu, x, std::exp(-s.t), alpha, eps, opt);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::zero_mass) throw;
      out.scan.truncated = true;
      break;
    }
    s.f = {s.hit ? 1.0 : 0.0, s.hit ? 1.0 : 0.0, 0};
    out.scan.samples.push_back(s);
  }
  summarize(out.scan);
  out.fraction = out.scan.hit_fraction;
  return out;
}

}  // namespace scenery
