#pragma once

#include <cstdint>
#include <vector>

#include "scenery/measure.hpp"
#include "scenery/scenery.hpp"

namespace scenery {

// X(x, r, V, alpha) \ H(x, theta, alpha) with dim V = d - k.
struct ConeSpec {
  int k = 1;
  Subspace v;
  Point theta{1.0, 0.0, 0.0};
  double alpha = 0.5;

  // Throws InvalidParams unless V is orthonormal of dimension d - k, |theta| = 1
  // and alpha in (0, 1].
  void validate(int dim) const;
};

struct ConeConstant {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Monte Carlo estimate of L(X(0,1,V,alpha) \ H(0,theta,alpha)) / L(B(0,1)) with
// V = span(e_1..e_{d-k}) and theta = e_1. Any d >= 2 is accepted.
ConeConstant cone_constant(int d, int k, double alpha, std::size_t n_samples, std::uint64_t seed);
// Same with V and theta moved by the orthogonal d x d matrix `rotation` (row-major).
ConeConstant cone_constant_rotated(int d, int k, double alpha, std::size_t n_samples,
                                   std::uint64_t seed, const std::vector<double>& rotation);
// Haar-random orthogonal matrix (row-major) via Gram-Schmidt on Gaussian columns.
std::vector<double> random_rotation(int d, std::uint64_t seed);

// Finite family of (V, theta) pairs standing in for G(d, d-k) x S^{d-1}.
struct DirectionNet {
  int dim = 2;
  int k = 1;
  std::vector<Subspace> planes;
  std::vector<Point> thetas;
  // When set, only theta in V is used: thetas_in_plane[i] lists those for planes[i].
  bool theta_in_v = false;
  std::vector<std::vector<Point>> thetas_in_plane;
  // d = 2 aligned net: line i at angle i*eta, theta j at angle j*eta, eta = 2 pi / bins.
  int planar_bins = 0;
  double eta = 0.0;

  std::size_t size() const;
  // The j-th theta usable with plane i.
  const Point& theta(std::size_t i, std::size_t j) const;
  std::size_t theta_count(std::size_t i) const;
};

// d = 2, k = 1: n_lines lines through the origin and 2 n_lines directions.
DirectionNet planar_net(int n_lines = 360, bool theta_in_v = false);
// d = 3: Fibonacci-sphere planes (k = 1) or lines (k = 2) and directions, at most
// max_pairs pairs.
DirectionNet sphere_net(int k, std::size_t max_pairs = 10000, bool theta_in_v = false);
DirectionNet default_net(int dim, int k, bool theta_in_v = false);

// Enclosure of mu(X \ H) / mu(B(x, r)).
MassInterval cone_mass_ratio(const Measure& mu, const Point& x, double r, const ConeSpec& cone,
                             int depth);

struct ConeMinimum {
  MassInterval ratio;
  std::size_t plane = 0;  // witness indices into the net
  std::size_t theta = 0;
  bool fast_path = false;
};

// Minimum of cone_mass_ratio over the net: low is the minimum of lows, high the
// minimum of highs.
ConeMinimum min_cone_mass_ratio(const Measure& mu, const Point& x, double r, double alpha, int k,
                                const DirectionNet& net, int depth);
// Same minimum computed pair by pair with the generic region descent.
ConeMinimum min_cone_mass_ratio_generic(const Measure& mu, const Point& x, double r, double alpha,
                                        int k, const DirectionNet& net, int depth);
// True iff the minimum's low exceeds eps; may stop early.
bool min_cone_ratio_exceeds(const Measure& mu, const Point& x, double r, double alpha, int k,
                            const DirectionNet& net, int depth, double eps);

// Depth used for cone queries at radius r: a fixed number of levels below r.
int cone_depth(const Measure& mu, double r);

// Fraction of grid times whose minimal cone ratio low exceeds eps.
struct ConeScan {
  ScaleScan scan;  // f = minimal cone ratio, hit = predicate
  double fraction = 0.0;
};
ConeScan cone_scale_fraction(const Measure& mu, const Point& x, double T, double alpha, int k,
                             double eps, const DirectionNet& net, double dt = kDefaultDt,
                             bool record_ratio = false);

struct RectifiabilityResult {
  bool holds = true;
  std::size_t x_index = 0;  // witness pair when !holds
  std::size_t y_index = 0;
};

RectifiabilityResult rectifiability_criterion(const std::vector<Point>& points, int dim,
                                              const Subspace& v, const Point& theta, double alpha,
                                              double r);

struct NetRectifiability {
  std::size_t pairs = 0;
  std::size_t passing = 0;  // pairs for which the criterion holds
  std::vector<RectifiabilityResult> results;
};
NetRectifiability rectifiability_net_scan(const std::vector<Point>& points, const DirectionNet& net,
                                          double alpha, double r);

// Maximum over scales of mid(mu(B(x, 2r))) / mid(mu(B(x, r))).
double doubling_scan(const Measure& mu, const Point& x, const std::vector<double>& scales);

}  // namespace scenery
