#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "scenery/constructions.hpp"
#include "scenery/dimension.hpp"

using namespace scenery;

namespace {

const double kCantorDim = std::log(2.0) / std::log(3.0);

}  // namespace

TEST_CASE("line fit and quantiles") {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.rms == doctest::Approx(0.0));
  CHECK(quantile({3, 1, 2, 4, 5}, 0.5) == 3.0);
  CHECK(quantile({0, 10}, 0.25) == doctest::Approx(2.5));
}

TEST_CASE("Salli formula") {
  CHECK(salli_dimension(0.25) == doctest::Approx(kCantorDim));
  CHECK(salli_ratio(0.49) == doctest::Approx(0.02 / 1.02));
  CHECK(salli_dimension(0.49) < 0.2);
  double prev = 2.0;
  for (int i = 1; i <= 100; ++i) {
    const double a = 0.4999 * i / 100.0;
    const double d = salli_dimension(a);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("local dimensions") {
  const LocalDimension l = local_dimension(lebesgue_ball(2), {0.1, 0.2, 0});
  CHECK(l.central.value == doctest::Approx(2.0).epsilon(0.005));
  const LocalDimension p = local_dimension(point_mass(1), {});
  CHECK(std::fabs(p.central.value) <= 0.01);
  const Measure c = cantor_salli(0.25);
  for (const Point& x : c.sample(5, 3)) {
    const LocalDimension d = local_dimension(c, x);
    CHECK(std::fabs(d.central.value - kCantorDim) <= 0.02);
    CHECK(d.lower.value <= d.central.value);
    CHECK(d.upper.value >= d.central.value);
  }
  ScaleRange bad;
  bad.n_scales = 4;
  CHECK_THROWS_AS(local_dimension(c, {}, bad), Error);
}

TEST_CASE("dimension spectrum") {
  const Measure c = cantor_salli(0.25);
  const DimensionSpectrum s = dimension_spectrum(c, 200, 5);
  for (const auto* e : {&s.hausdorff_lower, &s.hausdorff_upper, &s.packing_lower, &s.packing_upper}) {
    CHECK(std::fabs(e->value - kCantorDim) <= 0.03);
  }
  const Measure mix = mixture({c, grid_measure(1, SubdivisionRule::uniform(2), Frame{{2, 0, 0}, 1})}, {0.5, 0.5});
  const DimensionSpectrum m = dimension_spectrum(mix, 200, 6);
  CHECK(std::fabs(m.hausdorff_lower.value - kCantorDim) <= 0.03);
  CHECK(std::fabs(m.packing_upper.value - 1.0) <= 0.03);
  const DimensionSpectrum p = dimension_spectrum(point_mass(2), 100, 7);
  CHECK(p.hausdorff_lower.value == 0.0);
  CHECK(p.packing_upper.value == 0.0);
}

TEST_CASE("fd dimension anchors") {
  CHECK(fd_dimension(point_mass(2), {}, 3.0).value == 0.0);
  for (int d = 1; d <= 3; ++d) {
    CHECK(std::fabs(fd_dimension(lebesgue_ball(d), {}, 2.0).value - d) <= 0.02);
  }
  const DimensionEstimate c = fd_dimension(cantor_salli(0.25), {}, 20 * std::log(3.0));
  CHECK(std::fabs(c.value - kCantorDim) <= 0.05);
}

TEST_CASE("fd dimension of splices is convex in q") {
  for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CAPTURE(q);
    SpliceSchedule s;
    s.q = q;
    s.growth = SpliceSchedule::Growth::constant;
    s.block_length = 8;
    const Measure mu = splice(1, SubdivisionRule::uniform(3), SubdivisionRule::cantor(0.25), s, Frame{}, 60);
    double sum = 0.0;
    const auto pts = mu.sample(4, 9);
    for (const Point& x : pts) sum += fd_dimension(mu, x, 36 * std::log(2.0)).value;
    CHECK(std::fabs(sum / pts.size() - (q * kCantorDim + (1 - q))) <= 0.1);
  }
}

TEST_CASE("fd dimension of the line/plane splice") {
  SpliceSchedule s;
  s.q = 0.5;
  s.growth = SpliceSchedule::Growth::constant;
  s.block_length = 6;
  const Measure mu = splice(2, SubdivisionRule::uniform(2), SubdivisionRule::plane({0}, 2), s, Frame{}, 48);
  const Point x = mu.sample(1, 4)[0];
  CHECK(std::fabs(fd_dimension(mu, x, 24 * std::log(2.0)).value - 1.5) <= 0.1);
}

TEST_CASE("continuity functional F") {
  const DimensionEstimate u = dim_functional_F(lebesgue_ball(1));
  CHECK(std::fabs(u.value - 1.0) <= 1e-3);
  CHECK(dim_functional_F(point_mass(1)).value == 0.0);
  for (int d = 1; d <= 3; ++d) {
    const double f = dim_functional_F(lebesgue_ball(d), 64).value;
    CHECK(f >= 0.0);
    CHECK(f <= d + 1e-3);
  }
  CHECK(dim_functional_F(plane(2, {0}), 64).value <= 1.0 + 1e-3);
}

TEST_CASE("F of the Cantor measure matches the cylinder quadrature") {
  const DimensionEstimate c = dim_functional_F(cantor_salli(0.25));
  // same midpoint rule, with masses from the cylinder recursion
  double sum = 0.0;
  const int n = 256;
  for (int i = 0; i < n; ++i) {
    const double r = std::min((i + 0.5) / n, 1.0 - 1.0 / 32);
    const auto o = oracle::cantor_interval_mass(-r, r, 1.0 / 3.0, 40);
    sum += std::log(0.5 * (o.low + o.high)) / std::log(r);
  }
  CHECK(c.value >= 0.0);
  CHECK(std::fabs(c.value - sum / n) <= 1e-3);
  CHECK(c.residual < 0.05);
}

TEST_CASE("density scans") {
  const DensityBounds line = density_scan(plane(2, {0}), {0.1, 0, 0}, 1.0);
  CHECK(line.lower == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(line.upper == doctest::Approx(1.0).epsilon(1e-3));
  ScaleRange range;
  range.r_min = 0x1.0p-20;
  const DensityBounds leb = density_scan(lebesgue_ball(2), {}, 1.0, range);
  CHECK(leb.lower < 1e-5);
  const Measure prod = product_measure(quarter_cantor(), quarter_cantor());
  ScaleRange thirty;
  thirty.n_scales = 30;
  const DensityBounds p = density_scan(prod, prod.sample(1, 5)[0], 1.0, thirty);
  CHECK(p.lower > 0.1);
  CHECK(p.upper < 10.0);
  CHECK(p.ratios.size() == 30);
}

TEST_CASE("box dimensions") {
  CHECK(std::fabs(box_dimension(cantor_salli(0.25), 1, 12).value - kCantorDim) <= 0.02);
  CHECK(box_dimension(grid_measure(2, SubdivisionRule::uniform(2)), 1, 8).value == doctest::Approx(2.0));
  CHECK(box_dimension(plane(2, {0}), 1, 12).value == doctest::Approx(1.0).epsilon(1e-3));
  const Measure c = cantor_salli(0.25);
  CHECK(std::fabs(box_dimension(c.sample(20000, 1), 1, 1, 14).value - kCantorDim) <= 0.05);
}

TEST_CASE("dimension estimators agree on self-similar measures") {
  const Measure c = cantor_salli(0.25);
  const double box = box_dimension(c, 1, 12).value;
  const double local = local_dimension(c, c.sample(1, 2)[0]).central.value;
  const double fd = fd_dimension(c, {}, 20 * std::log(3.0)).value;
  for (double v : {box, local, fd}) CHECK(std::fabs(v - salli_dimension(0.25)) <= 0.05);
}
