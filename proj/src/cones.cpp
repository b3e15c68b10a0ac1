#include "scenery/cones.hpp"

#include <cmath>
#include <numbers>

#include "scenery/angular.hpp"
#include "scenery/kernels.hpp"
#include "scenery/parallel.hpp"
#include "scenery/rng.hpp"

namespace scenery {
namespace {

constexpr std::size_t kBatch = 1 << 15;
// Levels below the query radius resolved by cone descents.
constexpr int kConeRefine = 6;

Point unit(const Point& p) { return (1.0 / norm(p)) * p; }

// Orthonormal completion of a unit vector n in R^3.
std::pair<Point, Point> complete_basis(const Point& n) {
  const Point helper = std::fabs(n[0]) < 0.9 ? Point{1.0, 0.0, 0.0} : Point{0.0, 1.0, 0.0};
  const Point a = unit(helper - dot(helper, n) * n);
  const Point b{n[1] * a[2] - n[2] * a[1], n[2] * a[0] - n[0] * a[2], n[0] * a[1] - n[1] * a[0]};
  return {a, b};
}

std::vector<Point> fibonacci_sphere(std::size_t n, bool hemisphere) {
  std::vector<Point> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = hemisphere ? 1.0 - (i + 0.5) / n : 1.0 - 2.0 * (i + 0.5) / n;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    out.push_back({rad * std::cos(phi), rad * std::sin(phi), z});
  }
  return out;
}

ConeConstant estimate(int d, int k, double alpha, std::size_t n, std::uint64_t seed,
                      const std::vector<double>* rotation) {
  require(d >= 2 && d <= 16, "cone_constant needs 2 <= d <= 16");
  require(k >= 1 && k <= d - 1, "cone_constant needs 1 <= k <= d-1");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0,1]");
  require(n >= 1, "sample count must be positive");
  const int m = d - k;
  // Rows of `basis` span V; theta is the first of them.
  std::vector<double> basis(static_cast<std::size_t>(m) * d, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < d; ++a) {
      basis[i * d + a] = rotation ? (*rotation)[a * d + i] : (a == i ? 1.0 : 0.0);
    }
  }
  std::vector<double> theta(basis.begin(), basis.begin() + d);

  const std::size_t batches = (n + kBatch - 1) / kBatch;
  std::vector<std::size_t> counts(batches, 0);
  const auto& kern = kernels::active();
  parallel_for(batches, [&](std::size_t b) {
    const std::size_t len = std::min(kBatch, n - b * kBatch);
    Rng rng(seed, b);
    std::vector<std::vector<double>> coords(d, std::vector<double>(len));
    std::vector<double> g(d);
    for (std::size_t i = 0; i < len; ++i) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) {
        g[a] = rng.normal();
        s += g[a] * g[a];
      }
      const double radius = std::pow(rng.uniform(), 1.0 / d) / std::sqrt(s);
      for (int a = 0; a < d; ++a) coords[a][i] = g[a] * radius;
    }
    std::vector<const double*> ptrs(d);
    for (int a = 0; a < d; ++a) ptrs[a] = coords[a].data();
    counts[b] = kern.count_cone({ptrs.data(), d, len}, basis.data(), m, theta.data(), alpha);
  });
  std::size_t hits = 0;
  for (std::size_t c : counts) hits += c;
  ConeConstant out;
  out.samples = n;
  out.value = static_cast<double>(hits) / static_cast<double>(n);
  out.std_error = std::sqrt(out.value * (1.0 - out.value) / static_cast<double>(n));
  return out;
}

}  // namespace

void ConeSpec::validate(int dim) const {
  require(k >= 1 && k <= dim - 1, "cone needs 1 <= k <= d-1");
  require(static_cast<int>(v.basis.size()) == dim - k, "V must have dimension d-k");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0,1]");
  require(std::fabs(norm(theta) - 1.0) <= 1e-12, "theta must be a unit vector");
  for (std::size_t i = 0; i < v.basis.size(); ++i) {
    for (std::size_t j = 0; j < v.basis.size(); ++j) {
      const double want = i == j ? 1.0 : 0.0;
      require(std::fabs(dot(v.basis[i], v.basis[j]) - want) <= 1e-12, "V basis must be orthonormal");
    }
  }
}

ConeConstant cone_constant(int d, int k, double alpha, std::size_t n_samples, std::uint64_t seed) {
  return estimate(d, k, alpha, n_samples, seed, nullptr);
}

ConeConstant cone_constant_rotated(int d, int k, double alpha, std::size_t n_samples,
                                   std::uint64_t seed, const std::vector<double>& rotation) {
  require(rotation.size() == static_cast<std::size_t>(d) * d, "rotation must be d x d");
  return estimate(d, k, alpha, n_samples, seed, &rotation);
}

std::vector<double> random_rotation(int d, std::uint64_t seed) {
  Rng rng(seed, 0x726f74);
  std::vector<double> q(static_cast<std::size_t>(d) * d);
  for (auto& v : q) v = rng.normal();
  // Modified Gram-Schmidt on columns.
  for (int c = 0; c < d; ++c) {
    for (int p = 0; p < c; ++p) {
      double s = 0.0;
      for (int r = 0; r < d; ++r) s += q[r * d + c] * q[r * d + p];
      for (int r = 0; r < d; ++r) q[r * d + c] -= s * q[r * d + p];
    }
    double nrm = 0.0;
    for (int r = 0; r < d; ++r) nrm += q[r * d + c] * q[r * d + c];
    nrm = std::sqrt(nrm);
    for (int r = 0; r < d; ++r) q[r * d + c] /= nrm;
  }
  return q;
}

// ---------------------------------------------------------------- nets

std::size_t DirectionNet::size() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < planes.size(); ++i) n += theta_count(i);
  return n;
}

std::size_t DirectionNet::theta_count(std::size_t i) const {
  return theta_in_v ? thetas_in_plane[i].size() : thetas.size();
}

const Point& DirectionNet::theta(std::size_t i, std::size_t j) const {
  return theta_in_v ? thetas_in_plane[i][j] : thetas[j];
}

DirectionNet planar_net(int n_lines, bool theta_in_v) {
  require(n_lines >= 4, "planar net needs at least 4 lines");
  DirectionNet net;
  net.dim = 2;
  net.k = 1;
  net.planar_bins = 2 * n_lines;
  net.eta = std::numbers::pi / n_lines;
  net.theta_in_v = theta_in_v;
  for (int j = 0; j < net.planar_bins; ++j) {
    const double a = j * net.eta;
    net.thetas.push_back({std::cos(a), std::sin(a), 0.0});
  }
  for (int i = 0; i < n_lines; ++i) {
    net.planes.push_back(Subspace{{net.thetas[i]}});
    if (theta_in_v) net.thetas_in_plane.push_back({net.thetas[i], net.thetas[i + n_lines]});
  }
  return net;
}

DirectionNet sphere_net(int k, std::size_t max_pairs, bool theta_in_v) {
  require(k == 1 || k == 2, "3D nets need k = 1 or 2");
  require(max_pairs >= 16, "net needs at least 16 pairs");
  DirectionNet net;
  net.dim = 3;
  net.k = k;
  net.theta_in_v = theta_in_v;
  const std::size_t n_planes = std::max<std::size_t>(4, static_cast<std::size_t>(std::sqrt(max_pairs / 4.0)));
  const std::size_t n_thetas = std::max<std::size_t>(4, max_pairs / n_planes);
  for (const Point& n : fibonacci_sphere(n_planes, true)) {
    if (k == 1) {
      const auto [a, b] = complete_basis(n);
      net.planes.push_back(Subspace{{a, b}});
    } else {
      net.planes.push_back(Subspace{{n}});
    }
  }
  net.thetas = fibonacci_sphere(n_thetas, false);
  if (theta_in_v) {
    for (const Subspace& v : net.planes) {
      std::vector<Point> in;
      if (v.basis.size() == 1) {
        in = {v.basis[0], -1.0 * v.basis[0]};
      } else {
        const std::size_t m = std::max<std::size_t>(8, n_thetas / 8);
        for (std::size_t j = 0; j < m; ++j) {
          const double a = 2.0 * std::numbers::pi * j / m;
          in.push_back(std::cos(a) * v.basis[0] + std::sin(a) * v.basis[1]);
        }
      }
      net.thetas_in_plane.push_back(in);
    }
  }
  net.eta = std::sqrt(4.0 * std::numbers::pi / static_cast<double>(n_thetas));
  return net;
}

DirectionNet default_net(int dim, int k, bool theta_in_v) {
  if (dim == 2) return planar_net(360, theta_in_v);
  require(dim == 3, "cone nets exist for d = 2, 3");
  return sphere_net(k, 10000, theta_in_v);
}

// ---------------------------------------------------------------- ratios

int cone_depth(const Measure& mu, double r) {
  mu.check_radius(r);
  const int below = static_cast<int>(std::ceil(std::log2(1.0 / r) - 1e-12));
  return std::min(mu.max_depth(), below + kConeRefine);
}

namespace {

MassInterval ratio(const MassInterval& num, const MassInterval& den, int depth) {
  MassInterval out;
  out.low = den.high > 0.0 ? std::min(1.0, num.low / den.high) : 0.0;
  out.high = den.low > 0.0 ? std::min(1.0, num.high / den.low) : 1.0;
  out.low = std::min(out.low, out.high);
  out.depth_used = depth;
  return out;
}

struct BaseQuery {
  Point apex;
  double radius;
  double stop;
};

BaseQuery to_base(const Measure& mu, const Point& x, double r, int depth) {
  mu.check_radius(r);
  mu.check_depth(depth);
  const double inv = std::exp(-mu.log_scale());
  return {mu.to_base(x), r * inv, std::ldexp(inv, -depth)};
}

MassInterval ball_enclosure(const Measure& mu, const BaseQuery& q) {
  const MassInterval den = mu.base_mass(BallRegion(q.apex, q.radius), q.stop);
  if (den.high <= 0.0) fail(ErrorCode::zero_mass, "ball carries no mass");
  return den;
}

bool fast_path_ok(const Measure& mu, const DirectionNet& net, int k) {
  return mu.dim() == 2 && k == 1 && net.dim == 2 && net.planar_bins > 0;
}

}  // namespace

MassInterval cone_mass_ratio(const Measure& mu, const Point& x, double r, const ConeSpec& cone,
                             int depth) {
  cone.validate(mu.dim());
  const BaseQuery q = to_base(mu, x, r, depth);
  const MassInterval den = ball_enclosure(mu, q);
  const MassInterval num =
      mu.base_mass(ConeRegion(q.apex, q.radius, cone.v, cone.theta, cone.alpha), q.stop);
  return ratio(num, den, depth);
}

ConeMinimum min_cone_mass_ratio_generic(const Measure& mu, const Point& x, double r, double alpha,
                                        int k, const DirectionNet& net, int depth) {
  require(net.dim == mu.dim() && net.k == k, "net does not match the measure");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0,1]");
  const BaseQuery q = to_base(mu, x, r, depth);
  const MassInterval den = ball_enclosure(mu, q);
  ConeMinimum best;
  best.ratio = {2.0, 2.0, depth};
  double best_high = 2.0;
  for (std::size_t i = 0; i < net.planes.size(); ++i) {
    for (std::size_t j = 0; j < net.theta_count(i); ++j) {
      const MassInterval num =
          mu.base_mass(ConeRegion(q.apex, q.radius, net.planes[i], net.theta(i, j), alpha), q.stop);
      const MassInterval rt = ratio(num, den, depth);
      if (rt.low < best.ratio.low) {
        best.ratio.low = rt.low;
        best.plane = i;
        best.theta = j;
      }
      best_high = std::min(best_high, rt.high);
    }
  }
  best.ratio.high = best_high;
  return best;
}

ConeMinimum min_cone_mass_ratio(const Measure& mu, const Point& x, double r, double alpha, int k,
                                const DirectionNet& net, int depth) {
  if (!fast_path_ok(mu, net, k)) return min_cone_mass_ratio_generic(mu, x, r, alpha, k, net, depth);
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0,1]");
  const AngularSnapshot snap(mu, x, r, net.planar_bins, depth);
  const MassInterval den = snap.ball();
  if (den.high <= 0.0) fail(ErrorCode::zero_mass, "ball carries no mass");
  const int lines = net.planar_bins / 2;
  ConeMinimum best;
  best.fast_path = true;
  double best_low = 2.0, best_high = 2.0;
  for (int i = 0; i < lines; ++i) {
    if (net.theta_in_v) {
      for (int s = 0; s < 2; ++s) {
        const int j = i + s * lines;
        const double lo = snap.low(i, j, alpha);
        if (lo < best_low) {
          best_low = lo;
          best.plane = i;
          best.theta = s;
        }
        best_high = std::min(best_high, snap.high(i, j, alpha));
      }
      continue;
    }
    int j = 0;
    const double lo = snap.min_low_for_line(i, alpha, &j);
    if (lo < best_low) {
      best_low = lo;
      best.plane = i;
      best.theta = j;
    }
    for (int jj = 0; jj < net.planar_bins; ++jj) best_high = std::min(best_high, snap.high(i, jj, alpha));
  }
  best.ratio = ratio({best_low, best_high, depth}, den, depth);
  return best;
}

bool min_cone_ratio_exceeds(const Measure& mu, const Point& x, double r, double alpha, int k,
                            const DirectionNet& net, int depth, double eps) {
  if (!fast_path_ok(mu, net, k) || net.theta_in_v) {
    return min_cone_mass_ratio(mu, x, r, alpha, k, net, depth).ratio.low > eps;
  }
  const AngularSnapshot snap(mu, x, r, net.planar_bins, depth);
  const MassInterval den = snap.ball();
  if (den.high <= 0.0) fail(ErrorCode::zero_mass, "ball carries no mass");
  // ratio low = num_low / den_high must exceed eps for every pair.
  const double threshold = eps * den.high;
  const int lines = net.planar_bins / 2;
  for (int i = 0; i < lines; ++i) {
    if (snap.first_low_at_most(i, alpha, threshold) >= 0) return false;
  }
  return true;
}

ConeScan cone_scale_fraction(const Measure& mu, const Point& x, double T, double alpha, int k,
                             double eps, const DirectionNet& net, double dt, bool record_ratio) {
  require(eps >= 0.0, "eps must be nonnegative");
  ConeScan out;
  out.scan.T = T;
  out.scan.dt = dt;
  out.scan.steps = time_steps(T, dt);
  for (std::size_t j = 0; j < out.scan.steps; ++j) {
    ScaleSample s;
    s.t = static_cast<double>(j) * dt;
    const double r = std::exp(-s.t);
    try {
      const int depth = cone_depth(mu, r);
      if (record_ratio) {
        s.f = min_cone_mass_ratio(mu, x, r, alpha, k, net, depth).ratio;
        s.hit = s.f.low > eps;
      } else {
        s.hit = min_cone_ratio_exceeds(mu, x, r, alpha, k, net, depth, eps);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::zero_mass) throw;
      out.scan.truncated = true;
      break;
    }
    out.scan.samples.push_back(s);
  }
  summarize(out.scan);
  out.fraction = out.scan.hit_fraction;
  return out;
}

// ---------------------------------------------------------------- rectifiability

namespace {

struct SoA {
  std::vector<std::vector<double>> coords;
  std::vector<const double*> ptrs;

  SoA(const std::vector<Point>& pts, int dim) : coords(dim), ptrs(dim) {
    for (int a = 0; a < dim; ++a) {
      coords[a].resize(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) coords[a][i] = pts[i][a];
      ptrs[a] = coords[a].data();
    }
  }
};

RectifiabilityResult scan_pairs(const SoA& soa, const std::vector<Point>& pts, int dim,
                                const Subspace& v, const Point& theta, double alpha, double r) {
  std::vector<double> basis;
  for (const Point& b : v.basis) {
    for (int a = 0; a < dim; ++a) basis.push_back(b[a]);
  }
  const int m = static_cast<int>(v.basis.size());
  const kernels::PointsSoA view{soa.ptrs.data(), dim, pts.size()};
  const auto& kern = kernels::active();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t j = kern.cone_first_hit(view, 0, i, pts[i].data(), basis.data(), m,
                                              theta.data(), alpha, r);
    if (j < pts.size()) return {false, i, j};
  }
  return {};
}

}  // namespace

RectifiabilityResult rectifiability_criterion(const std::vector<Point>& points, int dim,
                                              const Subspace& v, const Point& theta, double alpha,
                                              double r) {
  require(dim >= 1 && dim <= 3, "points must live in R^1..R^3");
  require(points.size() <= 100000, "at most 1e5 points");
  require(alpha > 0.0 && alpha <= 1.0 && r > 0.0, "need alpha in (0,1] and r > 0");
  const SoA soa(points, dim);
  return scan_pairs(soa, points, dim, v, theta, alpha, r);
}

NetRectifiability rectifiability_net_scan(const std::vector<Point>& points, const DirectionNet& net,
                                          double alpha, double r) {
  require(points.size() <= 100000, "at most 1e5 points");
  const SoA soa(points, net.dim);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < net.planes.size(); ++i) {
    for (std::size_t j = 0; j < net.theta_count(i); ++j) pairs.emplace_back(i, j);
  }
  NetRectifiability out;
  out.pairs = pairs.size();
  out.results.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    out.results[p] = scan_pairs(soa, points, net.dim, net.planes[i], net.theta(i, j), alpha, r);
  });
  for (const auto& res : out.results) out.passing += res.holds ? 1 : 0;
  return out;
}

double doubling_scan(const Measure& mu, const Point& x, const std::vector<double>& scales) {
  require(!scales.empty(), "doubling scan needs scales");
  double worst = 0.0;
  for (double r : scales) {
    const MassInterval small = mu.ball_mass(x, r);
    const MassInterval big = mu.ball_mass(x, 2.0 * r);
    if (small.high <= 0.0) fail(ErrorCode::zero_mass, "ball carries no mass");
    worst = std::max(worst, big.mid() / small.mid());
  }
  return worst;
}

}  // namespace scenery
