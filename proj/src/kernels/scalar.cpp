#include "kernels_impl.hpp"

namespace scenery::kernels {
namespace {

inline double sq(double v) { return v * v; }

// Squared norms and projections are accumulated in axis order so the vector
// kernels can reproduce them bit for bit.
inline bool in_cone(const double* y, int dim, const double* basis, int m, const double* theta,
                    double alpha) {
  double len2 = 0.0;
  for (int a = 0; a < dim; ++a) len2 += sq(y[a]);
  double proj2 = 0.0;
  for (int i = 0; i < m; ++i) {
    double p = 0.0;
    for (int a = 0; a < dim; ++a) p += y[a] * basis[i * dim + a];
    proj2 += sq(p);
  }
  const double a2 = alpha * alpha * len2;
  if (!(len2 - proj2 < a2)) return false;
  double t = 0.0;
  for (int a = 0; a < dim; ++a) t += y[a] * theta[a];
  return t < 0.0 || sq(t) < a2;
}

std::size_t count_cone(const PointsSoA& pts, const double* basis, int m, const double* theta,
                       double alpha) {
  std::size_t count = 0;
  double y[kMaxKernelDim];
  for (std::size_t i = 0; i < pts.n; ++i) {
    for (int a = 0; a < pts.dim; ++a) y[a] = pts.coords[a][i];
    count += in_cone(y, pts.dim, basis, m, theta, alpha) ? 1 : 0;
  }
  return count;
}

std::size_t cone_first_hit(const PointsSoA& pts, std::size_t begin, std::size_t skip,
                           const double* apex, const double* basis, int m, const double* theta,
                           double alpha, double r) {
  double y[kMaxKernelDim];
  const double r2 = r * r;
  for (std::size_t j = begin; j < pts.n; ++j) {
    if (j == skip) continue;
    double len2 = 0.0;
    for (int a = 0; a < pts.dim; ++a) {
      y[a] = pts.coords[a][j] - apex[a];
      len2 += sq(y[a]);
    }
    if (!(len2 < r2) || len2 == 0.0) continue;
    if (in_cone(y, pts.dim, basis, m, theta, alpha)) return j;
  }
  return pts.n;
}

double min_pair_sum(const double* a, const double* b, std::size_t n, std::size_t* argmin) {
  double best = a[0] + b[0];
  std::size_t at = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double v = a[i] + b[i];
    if (v < best) {
      best = v;
      at = i;
    }
  }
  if (argmin) *argmin = at;
  return best;
}

std::size_t first_at_most(const double* a, const double* b, std::size_t n, double threshold) {
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] + b[i] <= threshold) return i;
  }
  return n;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", count_cone, cone_first_hit, min_pair_sum,
                                 first_at_most};
  return table;
}

}  // namespace scenery::kernels
