#pragma once

#include <cstddef>
#include <cstdint>

namespace scenery::kernels {

// Points in structure-of-arrays layout: coords[a][i] is coordinate a of point i.
struct PointsSoA {
  const double* const* coords;
  int dim;
  std::size_t n;
};

// Number of points y with dist(y, V) < alpha |y| and y . theta < alpha |y|,
// where V is spanned by the m orthonormal rows of `basis` (row-major, m x dim).
using CountConeFn = std::size_t (*)(const PointsSoA& pts, const double* basis, int m,
                                    const double* theta, double alpha);

// First index j >= begin (j != skip) whose point lies in X(apex, r, V, alpha) \ H(apex, theta,
// alpha); returns pts.n if none.
using ConeFirstHitFn = std::size_t (*)(const PointsSoA& pts, std::size_t begin, std::size_t skip,
                                       const double* apex, const double* basis, int m,
                                       const double* theta, double alpha, double r);

// Minimum of a[i] + b[i] over i < n, and the first index attaining it.
using MinPairSumFn = double (*)(const double* a, const double* b, std::size_t n,
                                std::size_t* argmin);

// First index i with a[i] + b[i] <= threshold, or n.
using FirstAtMostFn = std::size_t (*)(const double* a, const double* b, std::size_t n,
                                      double threshold);

struct KernelTable {
  const char* name;
  CountConeFn count_cone;
  ConeFirstHitFn cone_first_hit;
  MinPairSumFn min_pair_sum;
  FirstAtMostFn first_at_most;
};

const KernelTable& scalar_table();
// Null when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_table();
// Selected once: AVX2 when available unless SCENERY_FORCE_SCALAR is set.
const KernelTable& active();

}  // namespace scenery::kernels
