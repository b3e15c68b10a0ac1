// Desk-scale acceptance checks. One PASS/FAIL line per criterion; exit status is
// the number of failing criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "oracles.hpp"
#include "properties.hpp"
#include "scenery/cones.hpp"
#include "scenery/constructions.hpp"
#include "scenery/dimension.hpp"
#include "scenery/porosity.hpp"
#include "scenery/scenery.hpp"

using namespace scenery;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

struct Line {
  bool ok = true;
  std::string detail;
  void need(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? "" : " [x]");
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void run(int id, const char* title, const std::function<void(Line&)>& body) {
  Line line;
  Timer t;
  try {
    body(line);
  } catch (const std::exception& e) {
    line.need(false, std::string("threw: ") + e.what());
  }
  if (!line.ok) ++failures;
  std::printf("%s %2d %s: %s (%.1f s)\n", line.ok ? "PASS" : "FAIL", id, title, line.detail.c_str(),
              t.seconds());
  std::fflush(stdout);
}

void c1(Line& l) {
  const double truth = oracle::planar_cone_fraction(0.5);
  Timer t;
  const ConeConstant c = cone_constant(2, 1, 0.5, 1000000, 1);
  const double secs = t.seconds();
  l.need(std::fabs(c.value - truth) <= 0.002, fmt("eps(2,1,0.5) = %.5f vs oracle %.5f", c.value, truth));
  l.need(secs < 5.0, fmt("%.2f s < 5 s", secs));
  for (int d : {2, 3, 4}) {
    const ConeConstant a = cone_constant(d, 1, 0.5, 200000, 10 + d);
    const ConeConstant b = cone_constant_rotated(d, 1, 0.5, 200000, 20 + d, random_rotation(d, 30 + d));
    const double z = std::fabs(a.value - b.value) / std::hypot(a.std_error, b.std_error);
    l.need(z <= 3.0, fmt("rotation d=%d %.2f SE", d, z));
  }
}

void c2(Line& l) {
  for (double alpha : {0.25, 0.1, 0.4}) {
    Timer t;
    const double box = box_dimension(cantor_salli(alpha), 1, 12).value;
    const double secs = t.seconds();
    const double truth = salli_dimension(alpha);
    l.need(std::fabs(box - truth) <= 0.02 && secs < 10.0,
           fmt("alpha %.2f box %.5f vs %.5f in %.2f s", alpha, box, truth, secs));
  }
}

Measure line_plane_splice() {
  SpliceSchedule s;
  s.q = 0.5;
  s.first_block = 18;
  return splice(2, SubdivisionRule::uniform(2), SubdivisionRule::plane({0}, 2), s, Frame{}, 48);
}

void c3(Line& l) {
  Timer t;
  const Measure mu = line_plane_splice();
  const DirectionNet net = planar_net(360);
  const auto pts = mu.sample(20, 3);
  const double T = 36 * std::numbers::ln2;
  for (double eps : {0.01, 0.25}) {
    double sum = 0.0;
    for (const Point& x : pts) sum += cone_scale_fraction(mu, x, T, 0.5, 1, eps, net).fraction;
    const double mean = sum / pts.size();
    if (eps < 0.1) l.need(mean >= 0.4 && mean <= 0.6, fmt("eps 0.01 fraction %.3f in [0.4,0.6]", mean));
    else l.need(mean < 0.1, fmt("eps 0.25 fraction %.3f < 0.1", mean));
  }
  l.need(t.seconds() < 120.0, fmt("%.1f s < 120 s", t.seconds()));
}

void c4(Line& l) {
  Timer t;
  const Measure c = cantor_salli(0.25);
  double worst = 1.0;
  int pairs = 0;
  for (const Point& x : c.sample(10, 4)) {
    for (int k = 1; k <= 10; ++k, ++pairs) {
      worst = std::min(worst, pore_search(c, x, std::ldexp(1.0, -k), 1e-6).alpha_hat);
    }
  }
  l.need(worst >= 0.23, fmt("min alpha over %d pairs %.4f >= 0.23", pairs, worst));
  double leb = 0.0;
  const Measure m = lebesgue_ball(2);
  for (double r : {0.5, 0.125, 1.0 / 64}) leb = std::max(leb, pore_search(m, {0.1, -0.2, 0}, r, 0.0).alpha_hat);
  l.need(leb == 0.0, fmt("Lebesgue alpha %.4f", leb));
  l.need(t.seconds() < 60.0, fmt("%.1f s < 60 s", t.seconds()));
}

void c5(Line& l) {
  Timer t;
  SpliceSchedule s;
  s.q = 0.6;
  s.first_block = 14;
  const Measure mu = splice(1, SubdivisionRule::uniform(3), SubdivisionRule::cantor(0.25), s, Frame{}, 48);
  // one full A/B cycle of the first blocks: 14/0.6 ternary levels
  const double T = 36.98 * std::numbers::ln2;
  double pore = 0.0, fd = 0.0;
  const auto pts = mu.sample(10, 5);
  for (const Point& x : pts) {
    pore += porosity_scale_fraction(mu, x, T, 0.22, 1e-6).fraction;
    fd += fd_dimension(mu, x, T).value;
  }
  pore /= pts.size();
  fd /= pts.size();
  const double bound = 0.6 * salli_dimension(0.25) + 0.4;
  l.need(std::fabs(pore - 0.6) <= 0.1, fmt("pore fraction %.3f = 0.6 +- 0.1", pore));
  l.need(std::fabs(fd - bound) <= 0.1, fmt("fd %.4f vs 0.6*0.631+0.4 = %.4f", fd, bound));
  l.need(std::fabs(fd - 0.8486) <= 0.1, fmt("vs printed 0.8486: diff %.4f", std::fabs(fd - 0.8486)));
  l.need(t.seconds() < 120.0, fmt("%.1f s < 120 s", t.seconds()));
}

void c6(Line& l) {
  const double p = fd_dimension(point_mass(2), {}, 3.0).value;
  l.need(p == 0.0, fmt("fd(point) = %g", p));
  for (int d = 1; d <= 3; ++d) {
    const double v = fd_dimension(lebesgue_ball(d), {}, 3.0).value;
    l.need(std::fabs(v - d) <= 0.02, fmt("fd(Leb %d) = %.5f", d, v));
  }
  const double f = dim_functional_F(lebesgue_ball(1)).value;
  l.need(std::fabs(f - 1.0) <= 1e-3, fmt("F(uniform) = %.6f", f));
  const double f0 = dim_functional_F(point_mass(1)).value;
  l.need(f0 == 0.0, fmt("F(point) = %g", f0));
}

void c7(Line& l) {
  Timer t;
  Rng rng(7, 0);
  const Point w{std::cos(1.1), std::sin(1.1), 0};
  const Point perp{-w[1], w[0], 0};
  std::vector<Point> line;
  for (int i = 0; i < 500; ++i) line.push_back(rng.uniform(-1, 1) * w);
  l.need(rectifiability_criterion(line, 2, Subspace{{perp}}, perp, 0.5, 1.0).holds, "collinear passes");
  const Measure prod = product_measure(quarter_cantor(), quarter_cantor());
  const auto pts = prod.sample(500, 7);
  const DirectionNet net = planar_net(360);
  const NetRectifiability scan = rectifiability_net_scan(pts, net, 0.5, 1.0);
  bool witnessed = scan.results.size() == net.size();
  for (const auto& r : scan.results) witnessed = witnessed && !r.holds && r.x_index != r.y_index;
  l.need(scan.passing == 0 && witnessed,
         fmt("product fails on %zu/%zu pairs with witnesses", scan.pairs - scan.passing, scan.pairs));
  l.need(t.seconds() < 5.0, fmt("%.2f s < 5 s", t.seconds()));
}

void c8(Line& l) {
  const Measure mu = grid_measure(2, SubdivisionRule::uniform(2), Frame{{-1, -1, 0}, 2});
  Rng rng(8, 1);
  int same = 0;
  for (int i = 0; i < 100; ++i) {
    const Point x{rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9), 0};
    const double t = rng.uniform(0, 6), tp = rng.uniform(0, 6);
    same += props::same_cells(scenery_at(mu, x, t + tp), magnify(scenery_at(mu, x, tp), t), 12) ? 1 : 0;
  }
  l.need(same == 100, fmt("semigroup %d/100", same));
  const Measure c = cantor_salli(0.25);
  const Measure v = scenery_at(c, {}, std::log(3.0));
  int checks = 0, agree = 0;
  for (int depth = 1; depth <= v.max_depth() - 2; ++depth) {
    for (int i = 0; i < 8; ++i, ++checks) {
      const double y = rng.uniform(0, 1);
      const double r = std::max(std::ldexp(1.0, -depth + 1), std::ldexp(rng.uniform(0.5, 1), -depth / 2));
      agree += v.ball_mass({y, 0, 0}, r, depth).overlaps(c.ball_mass({y, 0, 0}, r, depth)) ? 1 : 0;
    }
  }
  l.need(agree == checks, fmt("Cantor periodicity %d/%d up to depth %d", agree, checks, v.max_depth() - 2));
}

void c9(Line& l) {
  const AnnularSpec spec{1.0};
  const Point x{0.1, 0, 0};
  const PoreWitness w = annular_pore_search(plane(2, {0}), x, 0.25, spec, 1e-6);
  const double dist = norm(w.y - x);
  l.need(w.found && w.alpha_hat >= 0.95, fmt("line alpha %.4f", w.alpha_hat));
  l.need(dist >= spec.c() * 0.25 - 1e-12 && dist <= 0.25 + 1e-12, fmt("witness at |y-x| = %.4f", dist));
  const PoreWitness z = annular_pore_search(lebesgue_ball(2), x, 0.25, spec, 0.0);
  l.need(z.alpha_hat == 0.0, fmt("Lebesgue alpha %.4f", z.alpha_hat));
}

void c10(Line& l) {
  for (const auto& k : props::measure_kinds()) {
    props::Outcome out;
    props::nesting(k.mu, 10000, 101, out);
    props::conservation(k.mu, 10000, 102, out);
    l.need(out.failures == 0, fmt("%s %ld checks", k.name.c_str(), static_cast<long>(out.checks)));
  }
}

}  // namespace

int main() {
  run(1, "cone constant", c1);
  run(2, "Salli dimension", c2);
  run(3, "conical density splice", c3);
  run(4, "Cantor porosity", c4);
  run(5, "mean porosity splice", c5);
  run(6, "dimension anchors", c6);
  run(7, "rectifiability criterion", c7);
  run(8, "flow semigroup", c8);
  run(9, "annular porosity", c9);
  run(10, "enclosure properties", c10);
  return failures;
}
