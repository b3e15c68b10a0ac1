#include <cmath>
#include <memory>
#include <numbers>

#include "doctest.h"
#include "scenery/geometry.hpp"
#include "scenery/rng.hpp"

using namespace scenery;

namespace {

Box random_box(Rng& rng, int dim, double max_side) {
  Box b;
  for (int a = 0; a < dim; ++a) {
    const double lo = rng.uniform() * 2.0 - 1.0;
    const double side = rng.uniform() * max_side;
    b.lo[a] = lo;
    b.hi[a] = lo + side;
  }
  return b;
}

Point point_in(Rng& rng, const Box& b, int dim) {
  Point p{};
  for (int a = 0; a < dim; ++a) p[a] = b.lo[a] + rng.uniform() * (b.hi[a] - b.lo[a]);
  return p;
}

// Samples the box (and its corners) and checks the classification against a
// pointwise membership test for the open and closed versions of the region.
template <class OpenFn, class ClosedFn>
void check_sound(const Region& region, int dim, std::uint64_t seed, OpenFn open, ClosedFn closed) {
  Rng rng(seed, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Box b = random_box(rng, dim, trial % 2 ? 0.5 : 0.05);
    const Side s = region.classify(b);
    if (s == Side::straddle) continue;
    for (int k = 0; k < 64; ++k) {
      Point p = point_in(rng, b, dim);
      if (k < (1 << dim)) {
        for (int a = 0; a < dim; ++a) p[a] = (k >> a) & 1 ? b.hi[a] : b.lo[a];
      }
      if (s == Side::inside) REQUIRE(open(p));
      else REQUIRE_FALSE(closed(p));
    }
  }
}

}  // namespace

TEST_CASE("box distances bracket the distances of its points") {
  Rng rng(3, 0);
  for (int i = 0; i < 500; ++i) {
    const Box b = random_box(rng, 3, 1.0);
    const Point c{rng.uniform(), rng.uniform(), rng.uniform()};
    const double lo = min_distance(b, c), hi = max_distance(b, c);
    for (int k = 0; k < 20; ++k) {
      const double d = norm(point_in(rng, b, 3) - c);
      CHECK(d >= lo - 1e-15);
      CHECK(d <= hi + 1e-15);
    }
  }
}

TEST_CASE("ball classification is one-sided") {
  const BallRegion ball({0.1, -0.2, 0.3}, 0.6);
  for (int dim = 1; dim <= 3; ++dim) {
    Point c{};
    for (int a = 0; a < dim; ++a) c[a] = ball.center()[a];
    const BallRegion bd(c, 0.6);
    check_sound(bd, dim, 10 + dim, [&](const Point& p) { return norm(p - c) < 0.6; },
                [&](const Point& p) { return norm(p - c) <= 0.6; });
  }
}

TEST_CASE("half-space and box classification is one-sided") {
  const Point n{0.6, 0.8, 0.0};
  const HalfSpaceRegion h(n, 0.1);
  check_sound(h, 2, 21, [&](const Point& p) { return dot(n, p) <= 0.1; },
              [&](const Point& p) { return dot(n, p) <= 0.1; });
  const BoxRegion box(Box{{-0.3, -0.2, 0}, {0.4, 0.5, 0}});
  check_sound(box, 2, 22,
              [](const Point& p) { return p[0] >= -0.3 && p[0] <= 0.4 && p[1] >= -0.2 && p[1] <= 0.5; },
              [](const Point& p) { return p[0] >= -0.3 && p[0] <= 0.4 && p[1] >= -0.2 && p[1] <= 0.5; });
}

TEST_CASE("cone classification is one-sided") {
  Subspace v{{Point{1.0, 0.0, 0.0}}};
  const Point theta{std::cos(0.3), std::sin(0.3), 0.0};
  const ConeRegion cone({0.05, 0.02, 0}, 0.9, v, theta, 0.5);
  auto member = [&](const Point& p) { return cone.contains(p); };
  Rng rng(31, 0);
  int fired = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const Box b = random_box(rng, 2, 0.1);
    const Side s = cone.classify(b);
    if (s == Side::straddle) continue;
    ++fired;
    for (int k = 0; k < 64; ++k) {
      const Point p = point_in(rng, b, 2);
      CHECK(member(p) == (s == Side::inside));
    }
  }
  CHECK(fired > 1000);
}

TEST_CASE("mapped regions agree with the maps they represent") {
  const Point shift{0.25, -0.5, 0.0};
  const double scale = 3.0;
  const std::vector<RegionPtr> regions = {
      std::make_shared<BallRegion>(Point{0.1, 0.2, 0}, 0.4),
      std::make_shared<BoxRegion>(Box{{-0.5, -0.1, 0}, {0.2, 0.3, 0}}),
      std::make_shared<HalfSpaceRegion>(Point{0, 1, 0}, 0.05),
      std::make_shared<ConeRegion>(Point{}, 0.8, Subspace{{Point{0, 1, 0}}}, Point{1, 0, 0}, 0.4),
  };
  Rng rng(41, 0);
  for (const auto& r : regions) {
    const RegionPtr img = affine_image(r, shift, scale);
    REQUIRE(img);
    for (int i = 0; i < 2000; ++i) {
      const Box b = random_box(rng, 2, 0.2);
      Box mapped;
      for (int a = 0; a < 3; ++a) {
        mapped.lo[a] = shift[a] + scale * b.lo[a];
        mapped.hi[a] = shift[a] + scale * b.hi[a];
      }
      const Side s0 = r->classify(b);
      const Side s1 = img->classify(mapped);
      // Rounding may turn a decided side into straddle, never into the opposite side.
      if (s0 != Side::straddle && s1 != Side::straddle) CHECK(s0 == s1);
    }
  }
}

TEST_CASE("intersection combines sides") {
  CHECK(combine(Side::inside, Side::inside) == Side::inside);
  CHECK(combine(Side::inside, Side::outside) == Side::outside);
  CHECK(combine(Side::straddle, Side::outside) == Side::outside);
  CHECK(combine(Side::straddle, Side::inside) == Side::straddle);
}

TEST_CASE("subspace angles") {
  Subspace v{{Point{1, 0, 0}}};
  CHECK(v.angle_to({1, 0, 0}) == doctest::Approx(0.0));
  CHECK(v.angle_to({0, 1, 0}) == doctest::Approx(std::numbers::pi / 2));
  CHECK(v.distance({3, 4, 0}) == doctest::Approx(4.0));
}
