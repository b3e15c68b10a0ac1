#include "scenery/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "scenery/parallel.hpp"

namespace scenery {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

double quantile(std::vector<double> v, double q) {
  require(!v.empty(), "quantile of an empty sample");
  require(q >= 0.0 && q <= 1.0, "quantile level must lie in [0,1]");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return v[lo] + w * (v[hi] - v[lo]);
}

namespace {

std::vector<double> radii(const ScaleRange& range) {
  require(range.n_scales >= 8, "need at least 8 scales");
  require(range.r_min > 0.0 && range.r_min < range.r_max && range.r_max <= 1.0,
          "scale range must satisfy 0 < r_min < r_max <= 1");
  std::vector<double> out(range.n_scales);
  const double lmin = std::log(range.r_min), lmax = std::log(range.r_max);
  for (int i = 0; i < range.n_scales; ++i) {
    out[i] = std::exp(lmax + (lmin - lmax) * i / (range.n_scales - 1));
  }
  return out;
}

double ball_mid(const Measure& mu, const Point& x, double r) {
  const MassInterval m = mu.ball_mass(x, r);
  if (m.high <= 0.0) fail(ErrorCode::zero_mass, "ball carries no mass");
  if (m.width() > m.mid()) fail(ErrorCode::precision_loss, "ball mass enclosure too wide");
  return m.mid();
}

DimensionEstimate make(double value, double residual, double r_min, double r_max, const char* method) {
  return {value, residual, r_min, r_max, method};
}

}  // namespace

LocalDimension local_dimension(const Measure& mu, const Point& x, const ScaleRange& range) {
  const std::vector<double> rs = radii(range);
  std::vector<double> lx(rs.size()), ly(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    lx[i] = std::log(rs[i]);
    ly[i] = std::log(ball_mid(mu, x, rs[i]));
  }
  LocalDimension out;
  const LineFit all = fit_line(lx, ly);
  out.central = make(all.slope, all.rms, range.r_min, range.r_max, "regression");

  const std::size_t w = std::max<std::size_t>(8, (3 * rs.size()) / 4);
  double lo = all.slope, hi = all.slope;
  double lo_res = all.rms, hi_res = all.rms;
  std::pair<double, double> lo_range{range.r_min, range.r_max}, hi_range = lo_range;
  for (std::size_t s = 0; s + w <= rs.size(); ++s) {
    const std::vector<double> wx(lx.begin() + s, lx.begin() + s + w);
    const std::vector<double> wy(ly.begin() + s, ly.begin() + s + w);
    const LineFit f = fit_line(wx, wy);
    const std::pair<double, double> span{rs[s + w - 1], rs[s]};
    if (f.slope < lo) {
      lo = f.slope;
      lo_res = f.rms;
      lo_range = span;
    }
    if (f.slope > hi) {
      hi = f.slope;
      hi_res = f.rms;
      hi_range = span;
    }
  }
  out.lower = make(lo, lo_res, lo_range.first, lo_range.second, "regression");
  out.upper = make(hi, hi_res, hi_range.first, hi_range.second, "regression");
  return out;
}

DimensionSpectrum dimension_spectrum(const Measure& mu, std::size_t n_points, std::uint64_t seed,
                                     const ScaleRange& range) {
  require(n_points >= 100, "dimension spectrum needs at least 100 points");
  const std::vector<Point> pts = mu.sample(n_points, seed);
  std::vector<LocalDimension> dims(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { dims[i] = local_dimension(mu, pts[i], range); });
  std::vector<double> lower, upper;
  double res = 0.0;
  for (const auto& d : dims) {
    lower.push_back(d.lower.value);
    upper.push_back(d.upper.value);
    res = std::max(res, d.central.residual);
  }
  DimensionSpectrum out;
  out.samples = pts.size();
  out.hausdorff_lower = make(quantile(lower, 0.01), res, range.r_min, range.r_max, "quantile");
  out.hausdorff_upper = make(quantile(lower, 0.99), res, range.r_min, range.r_max, "quantile");
  out.packing_lower = make(quantile(upper, 0.01), res, range.r_min, range.r_max, "quantile");
  out.packing_upper = make(quantile(upper, 0.99), res, range.r_min, range.r_max, "quantile");
  return out;
}

DimensionEstimate fd_dimension(const Measure& mu, const Point& x, double T, double r, double dt) {
  require(r > 0.0 && r < 1.0, "fd_dimension radius must lie in (0,1)");
  const double lr = std::log(r);
  const Observable f = [&](const Measure& view) {
    const double m = ball_mid(view, Point{}, r);
    const double g = std::log(m) / lr;
    return MassInterval{g, g, 0};
  };
  const ScaleScan scan = scenery_statistics(mu, x, T, dt, f, nullptr);
  if (scan.samples.empty()) fail(ErrorCode::zero_mass, "scenery orbit is empty");
  double sq = 0.0;
  for (const auto& s : scan.samples) sq += (s.f.low - scan.mean) * (s.f.low - scan.mean);
  const double n = static_cast<double>(scan.samples.size());
  return make(scan.mean + 0.0, std::sqrt(sq / n / n), r, r, "scenery_average");
}

DimensionEstimate dim_functional_F(const Measure& nu, int n_quad) {
  require(n_quad >= 4 && n_quad % 2 == 0, "n_quad must be even and at least 4");
  constexpr double kTop = 1.0 - 1.0 / 32.0;
  auto integrand = [&](double r) {
    const double rr = std::min(r, kTop);
    return std::log(ball_mid(nu, Point{}, rr)) / std::log(rr);
  };
  auto rule = [&](int n) {
    CompensatedSum s;
    for (int i = 0; i < n; ++i) s.add(integrand((i + 0.5) / n));
    return s.value() / n;
  };
  const double fine = rule(n_quad);
  const double coarse = rule(n_quad / 2);
  return make(fine + 0.0, std::abs(fine - coarse), 0.5 / n_quad, 1.0, "quadrature");
}

DensityBounds density_scan(const Measure& mu, const Point& x, double s, const ScaleRange& range) {
  require(s >= 0.0, "density exponent must be nonnegative");
  DensityBounds out;
  out.radii = radii(range);
  for (double r : out.radii) out.ratios.push_back(ball_mid(mu, x, r) / std::pow(r, s));
  out.lower = *std::min_element(out.ratios.begin(), out.ratios.end());
  out.upper = *std::max_element(out.ratios.begin(), out.ratios.end());
  return out;
}

DimensionEstimate box_dimension(const Measure& mu, int min_level, int max_level) {
  require(min_level >= 0 && max_level > min_level, "box dimension needs a level range");
  require(max_level <= mu.base_max_depth() && max_level < mu.tree().levels(),
          "level range exceeds the tree depth");
  constexpr std::size_t kCap = std::size_t{1} << 22;
  std::vector<Cell> level{mu.tree().root()}, next;
  std::vector<double> lx, ly;
  for (int n = 0; n <= max_level && !level.empty(); ++n) {
    if (n >= min_level) {
      double side = 0.0;
      for (const Cell& c : level) side = std::max(side, c.box.max_side());
      lx.push_back(-std::log(side));
      ly.push_back(std::log(static_cast<double>(level.size())));
    }
    if (n == max_level) break;
    next.clear();
    std::vector<Cell> kids;
    for (const Cell& c : level) {
      if (c.owner->is_leaf(c)) continue;
      kids.clear();
      c.owner->children(c, kids);
      for (const Cell& k : kids) {
        if (k.mass > 0.0 && mu.restriction_side(mu.padded(k.box)) != Side::outside) next.push_back(k);
      }
    }
    if (next.size() > kCap) break;
    level.swap(next);
  }
  require(lx.size() >= 2, "box dimension needs at least two levels");
  const LineFit f = fit_line(lx, ly);
  return make(f.slope, f.rms, std::exp(-lx.back()), std::exp(-lx.front()), "regression");
}

DimensionEstimate box_dimension(const std::vector<Point>& points, int dim, int min_level,
                                int max_level) {
  require(!points.empty(), "box dimension of an empty point set");
  require(dim >= 1 && dim <= kMaxTreeDim, "dimension out of range");
  require(min_level >= 0 && max_level > min_level && max_level <= 20, "box levels must lie in [0,20]");
  struct Hash {
    std::size_t operator()(const std::array<std::int64_t, 3>& k) const {
      std::size_t h = 1469598103934665603ull;
      for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
      return h;
    }
  };
  std::vector<double> lx, ly;
  for (int n = min_level; n <= max_level; ++n) {
    std::unordered_set<std::array<std::int64_t, 3>, Hash> boxes;
    const double scale = std::ldexp(1.0, n);
    for (const Point& p : points) {
      std::array<std::int64_t, 3> k{0, 0, 0};
      for (int a = 0; a < dim; ++a) k[a] = static_cast<std::int64_t>(std::floor(p[a] * scale));
      boxes.insert(k);
    }
    lx.push_back(n * std::log(2.0));
    ly.push_back(std::log(static_cast<double>(boxes.size())));
  }
  const LineFit f = fit_line(lx, ly);
  return make(f.slope, f.rms, std::ldexp(1.0, -max_level), std::ldexp(1.0, -min_level), "regression");
}

}  // namespace scenery
