#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "properties.hpp"
#include "scenery/constructions.hpp"
#include "scenery/scenery.hpp"
#include "scenery/spec_io.hpp"

using namespace scenery;

namespace {

void check_contains(const MassInterval& m, double truth, double max_width) {
  CHECK(m.low <= truth + 1e-12);
  CHECK(m.high >= truth - 1e-12);
  CHECK(m.width() <= max_width);
}

}  // namespace

TEST_CASE("Lebesgue ball masses match the lens-area oracle") {
  const Measure mu = lebesgue_ball(2);
  Rng rng(5, 0);
  for (int i = 0; i < 60; ++i) {
    const Point c{rng.uniform(-1, 1), rng.uniform(-1, 1), 0};
    const double r = rng.uniform(0.05, 1.0);
    const double truth = oracle::lens_area(norm(c), r) / std::numbers::pi;
    check_contains(mu.ball_mass(c, r), truth, 0.02 * r);
  }
  CHECK(mu.ball_mass({}, 0.5).mid() == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("one- and three-dimensional Lebesgue balls") {
  const Measure l1 = lebesgue_ball(1);
  check_contains(l1.ball_mass({0.75, 0, 0}, 0.5), 0.25 / 2.0 + 0.25, 1e-6);
  const Measure l3 = lebesgue_ball(3);
  const MassInterval m = l3.ball_mass({}, 0.5);
  check_contains(m, 0.125, 0.02);
}

TEST_CASE("Cantor masses bracket the cylinder recursion") {
  const Measure mu = cantor_salli(0.25);
  Rng rng(6, 0);
  for (int i = 0; i < 200; ++i) {
    const double c = rng.uniform(-0.2, 1.2);
    const double r = std::ldexp(rng.uniform(0.5, 1.0), -static_cast<int>(rng.below(10)));
    const auto o = oracle::cantor_interval_mass(c - r, c + r, 1.0 / 3.0, 30);
    const MassInterval m = mu.ball_mass({c, 0, 0}, r);
    CHECK(m.low <= o.high + 1e-12);
    CHECK(m.high >= o.low - 1e-12);
  }
}

TEST_CASE("line measure is arc length") {
  const Measure mu = plane(2, {0});
  // chord of B((0.2, 0.3), 0.5) on the x-axis has half-length 0.4
  check_contains(mu.ball_mass({0.2, 0.3, 0}, 0.5), 0.4, 1e-3);
  check_contains(mu.ball_mass({0.2, 0.6, 0}, 0.5), 0.0, 1e-12);
}

TEST_CASE("point mass is all or nothing") {
  const Measure mu = point_mass(2, {0.25, 0.25, 0});
  check_contains(mu.ball_mass({0.25, 0.3, 0}, 0.1), 1.0, 0.0);
  check_contains(mu.ball_mass({0.5, 0.5, 0}, 0.1), 0.0, 0.0);
}

TEST_CASE("magnified Lebesgue is Lebesgue") {
  const Measure mu = lebesgue_ball(2);
  for (double t : {0.3, 1.0, 5.0}) {
    const Measure v = scenery_at(mu, {0.1, -0.2, 0}, t);
    CHECK(v.ball_mass({}, 0.5).mid() == doctest::Approx(0.25).epsilon(2e-3));
    CHECK(v.is_view());
  }
  CHECK_FALSE(mu.is_view());
}

TEST_CASE("flow semigroup holds cell-exactly on grid measures") {
  const Measure mu = grid_measure(2, SubdivisionRule::uniform(2), Frame{{-1, -1, 0}, 2});
  Rng rng(8, 0);
  for (int i = 0; i < 20; ++i) {
    const Point x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 0};
    const double t = rng.uniform(0, 4), tp = rng.uniform(0, 4);
    const Measure a = scenery_at(mu, x, t + tp);
    const Measure b = magnify(scenery_at(mu, x, tp), t);
    CHECK(props::same_cells(a, b, 14));
  }
}

TEST_CASE("Cantor measure is periodic under magnification by 3") {
  const Measure c = cantor_salli(0.25);
  const Measure v = scenery_at(c, {}, std::log(3.0));
  Rng rng(9, 0);
  for (int i = 0; i < 100; ++i) {
    const int depth = 1 + static_cast<int>(rng.below(v.max_depth() - 2));
    const double y = rng.uniform(0, 1);
    const double r = std::max(std::ldexp(1.0, -depth + 1), rng.uniform(0, 0.5));
    const MassInterval a = v.ball_mass({y, 0, 0}, r, depth);
    const MassInterval b = c.ball_mass({y, 0, 0}, r, depth);
    CHECK(a.overlaps(b));
  }
}

TEST_CASE("restriction to a half-plane renormalizes") {
  const Measure mu = lebesgue_ball(2);
  const Measure half = restrict(mu, std::make_shared<HalfSpaceRegion>(Point{1, 0, 0}, 0.0), 12);
  // normalizers are base masses: the tree lives on the square [-1,1]^2
  CHECK(half.normalizer().mid() == doctest::Approx(std::numbers::pi / 8).epsilon(1e-3));
  CHECK(half.ball_mass({}, 0.5).mid() == doctest::Approx(0.25).epsilon(5e-3));
  CHECK(half.ball_mass({0.5, 0, 0}, 0.2).high <= 1e-12);
}

TEST_CASE("errors are raised for unrepresentable queries") {
  const Measure mu = cantor_salli(0.25, 20);
  CHECK_THROWS_AS(mu.ball_mass({}, 0.0), Error);
  try {
    mu.ball_mass({}, 1e-9);
    FAIL("expected DepthExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::depth_exceeded);
  }
  try {
    magnify(mu.translated({0.5, 0, 0}), 1.0);
    FAIL("expected OriginNotInSupport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::origin_not_in_support);
  }
  try {
    restrict(mu, std::make_shared<BallRegion>(Point{0.5, 0, 0}, 0.1), 10);
    FAIL("expected ZeroMass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_mass);
  }
}

TEST_CASE("samples lie in the support and follow the measure") {
  const Measure c = cantor_salli(0.25);
  for (const Point& p : c.sample(200, 3)) CHECK(c.in_support(p));
  const Measure l = lebesgue_ball(2);
  const auto pts = l.sample(4000, 4);
  int inside = 0;
  for (const Point& p : pts) {
    CHECK(norm(p) <= 1.0 + 1e-12);
    inside += norm(p) < 0.5 ? 1 : 0;
  }
  const double frac = inside / 4000.0;
  CHECK(std::fabs(frac - 0.25) <= 4.0 * std::sqrt(0.25 * 0.75 / 4000.0));
  CHECK(c.sample(50, 9) == c.sample(50, 9));
}

TEST_CASE("mixture masses combine componentwise") {
  const Measure m = mixture({cantor_salli(0.25), grid_measure(1, SubdivisionRule::uniform(2), Frame{{2, 0, 0}, 1})},
                            {0.5, 0.5});
  check_contains(m.ball_mass({2.5, 0, 0}, 0.25), 0.25, 1e-6);
  check_contains(m.ball_mass({0.5, 0, 0}, 0.6), 0.5, 1e-6);
}

TEST_CASE("product of quarter Cantor sets") {
  const Measure p = product_measure(quarter_cantor(), quarter_cantor());
  CHECK(p.dim() == 2);
  // the four first-level squares each carry 1/4
  check_contains(p.ball_mass({0.125, 0.125, 0}, 0.2), 0.25, 1e-9);
}

TEST_CASE("specs round-trip with identical cells") {
  for (const auto& k : props::measure_kinds()) {
    CAPTURE(k.name);
    const json j = measure_to_json(k.mu);
    const Measure back = measure_from_json(j);
    CHECK(measure_to_json(back) == j);
    CHECK(props::same_cells(k.mu, back, 8));
  }
}

TEST_CASE("malformed specs are config errors") {
  const json bad = {{"type", "ifs"},
                    {"dim", 1},
                    {"maps", {{{"ratio", 0.25}, {"offset", {0.0}}}, {{"ratio", 0.25}, {"offset", {0.75}}}}},
                    {"weights", {0.5, 0.6}}};
  try {
    measure_from_json(bad);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_error);
  }
  CHECK_THROWS_AS(measure_from_json(json{{"type", "torus"}}), Error);
  CHECK_THROWS_AS(measure_from_json(json{{"type", "lebesgue_ball"}}), Error);
}

TEST_CASE("enclosure properties on randomized queries") {
  for (const auto& k : props::measure_kinds()) {
    CAPTURE(k.name);
    props::Outcome out;
    props::nesting(k.mu, 150, 17, out);
    props::conservation(k.mu, 150, 18, out);
    CAPTURE(out.first_failure);
    CHECK(out.failures == 0);
    CHECK(out.checks > 300);
  }
}

TEST_CASE("translation identity") {
  for (const auto& k : props::measure_kinds()) {
    CAPTURE(k.name);
    Rng rng(31, 0);
    for (int i = 0; i < 40; ++i) {
      const Point x = props::random_center(rng, k.mu);
      const double r = rng.uniform(0.05, 0.8);
      const int depth = 1 + static_cast<int>(rng.below(8));
      const MassInterval a = k.mu.translated(x).ball_mass({}, r, depth);
      const MassInterval b = k.mu.ball_mass(x, r, depth);
      CHECK(a.low <= b.high + props::kSumSlack);
      CHECK(b.low <= a.high + props::kSumSlack);
    }
  }
}

namespace {

// Pearson statistic of sample counts against the level-n cylinder masses.
double chi_square(const Measure& mu, const std::vector<Point>& pts, int level) {
  std::vector<Cell> cyl;
  mu.walk([&](const Cell& c, Side) {
    if (c.level == level) {
      if (c.mass > 0.0) cyl.push_back(c);
      return false;
    }
    return true;
  });
  REQUIRE(cyl.size() == 16);
  std::vector<double> count(cyl.size(), 0.0);
  for (const Point& p : pts) {
    for (std::size_t i = 0; i < cyl.size(); ++i) {
      if (cyl[i].box.contains(p)) {
        count[i] += 1.0;
        break;
      }
    }
  }
  double stat = 0.0, placed = 0.0;
  for (double c : count) placed += c;
  CHECK(placed == pts.size());
  for (std::size_t i = 0; i < cyl.size(); ++i) {
    const double expect = cyl[i].mass * pts.size();
    stat += (count[i] - expect) * (count[i] - expect) / expect;
  }
  return stat;
}

}  // namespace

TEST_CASE("sampled cylinder frequencies pass a chi-square test") {
  IfsSpec skew;
  skew.maps = {{1.0 / 3, {0, 0, 0}}, {1.0 / 3, {2.0 / 3, 0, 0}}};
  skew.weights = {0.3, 0.7};
  // 16 cylinders (15 degrees of freedom): the 1e-3 critical value is 37.70
  CHECK(chi_square(cantor_salli(0.25), cantor_salli(0.25).sample(100000, 41), 4) < 37.70);
  const Measure m = ifs_measure(skew);
  CHECK(chi_square(m, m.sample(100000, 42), 4) < 37.70);
  const Measure p = product_measure(quarter_cantor(), quarter_cantor());
  // 16 cells at level 2
  CHECK(chi_square(p, p.sample(100000, 43), 2) < 37.70);
}
