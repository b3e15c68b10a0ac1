#pragma once

#include <string>
#include <vector>

#include "scenery/measure.hpp"
#include "scenery/scenery.hpp"

namespace scenery {

struct DimensionEstimate {
  double value = 0.0;
  double residual = 0.0;  // fit residual, quadrature error or standard error
  double r_min = 0.0;
  double r_max = 0.0;
  std::string method;
};

struct ScaleRange {
  double r_min = 0x1.0p-28;
  double r_max = 0x1.0p-4;
  int n_scales = 24;
};

struct LocalDimension {
  DimensionEstimate central;  // slope over the full range
  DimensionEstimate lower;    // smallest windowed slope
  DimensionEstimate upper;    // largest windowed slope
};

// Log-log regression of mu(B(x, r)) on r over log-spaced radii.
LocalDimension local_dimension(const Measure& mu, const Point& x, const ScaleRange& range = {});

struct DimensionSpectrum {
  DimensionEstimate hausdorff_lower;
  DimensionEstimate hausdorff_upper;
  DimensionEstimate packing_lower;
  DimensionEstimate packing_upper;
  std::size_t samples = 0;
};

// Quantile summary (1% / 99%) of local dimensions at points sampled from mu.
DimensionSpectrum dimension_spectrum(const Measure& mu, std::size_t n_points, std::uint64_t seed,
                                     const ScaleRange& range = {});

// Cesaro average of log nu(B(0, r)) / log r along the scenery of mu at x.
DimensionEstimate fd_dimension(const Measure& mu, const Point& x, double T, double r = 0.5,
                               double dt = kDefaultDt);

// F(nu) = integral over (0,1) of log nu(B(0,r)) / log r dr, midpoint rule.
// The residual is |F_n - F_{n/2}|.
DimensionEstimate dim_functional_F(const Measure& nu, int n_quad = 256);

struct DensityBounds {
  double lower = 0.0;  // inf over scales of mu(B(x,r)) / r^s
  double upper = 0.0;  // sup
  std::vector<double> radii;
  std::vector<double> ratios;
};

DensityBounds density_scan(const Measure& mu, const Point& x, double s, const ScaleRange& range = {});

// Box-counting dimension from the cell tree: positive-mass cells per level.
DimensionEstimate box_dimension(const Measure& mu, int min_level, int max_level);
// Box-counting dimension of a finite point cloud on dyadic grids of sides 2^-k.
DimensionEstimate box_dimension(const std::vector<Point>& points, int dim, int min_level,
                                int max_level);

// Least-squares line through (x_i, y_i): slope and RMS residual.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Linear-interpolated quantile of `v` (copied and sorted), q in [0, 1].
double quantile(std::vector<double> v, double q);

}  // namespace scenery
