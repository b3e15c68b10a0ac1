#include <immintrin.h>

#include "kernels_impl.hpp"

namespace scenery::kernels {
namespace {

inline double sq(double v) { return v * v; }

bool in_cone_tail(const double* y, int dim, const double* basis, int m, const double* theta,
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

// Lane mask of points inside the cone; y[a] holds coordinate a of four points.
inline __m256d cone_mask(const __m256d* y, int dim, const double* basis, int m,
                         const double* theta, double alpha, __m256d* len2_out) {
  __m256d len2 = _mm256_setzero_pd();
  for (int a = 0; a < dim; ++a) len2 = _mm256_add_pd(len2, _mm256_mul_pd(y[a], y[a]));
  __m256d proj2 = _mm256_setzero_pd();
  for (int i = 0; i < m; ++i) {
    __m256d p = _mm256_setzero_pd();
    for (int a = 0; a < dim; ++a) {
      p = _mm256_add_pd(p, _mm256_mul_pd(y[a], _mm256_set1_pd(basis[i * dim + a])));
    }
    proj2 = _mm256_add_pd(proj2, _mm256_mul_pd(p, p));
  }
  const __m256d a2 = _mm256_mul_pd(_mm256_set1_pd(alpha * alpha), len2);
  const __m256d in_x = _mm256_cmp_pd(_mm256_sub_pd(len2, proj2), a2, _CMP_LT_OQ);
  __m256d t = _mm256_setzero_pd();
  for (int a = 0; a < dim; ++a) t = _mm256_add_pd(t, _mm256_mul_pd(y[a], _mm256_set1_pd(theta[a])));
  const __m256d neg = _mm256_cmp_pd(t, _mm256_setzero_pd(), _CMP_LT_OQ);
  const __m256d small = _mm256_cmp_pd(_mm256_mul_pd(t, t), a2, _CMP_LT_OQ);
  if (len2_out) *len2_out = len2;
  return _mm256_and_pd(in_x, _mm256_or_pd(neg, small));
}

std::size_t count_cone(const PointsSoA& pts, const double* basis, int m, const double* theta,
                       double alpha) {
  std::size_t count = 0;
  std::size_t i = 0;
  __m256d y[kMaxKernelDim];
  for (; i + 4 <= pts.n; i += 4) {
    for (int a = 0; a < pts.dim; ++a) y[a] = _mm256_loadu_pd(pts.coords[a] + i);
    const int bits = _mm256_movemask_pd(cone_mask(y, pts.dim, basis, m, theta, alpha, nullptr));
    count += static_cast<std::size_t>(__builtin_popcount(bits));
  }
  double s[kMaxKernelDim];
  for (; i < pts.n; ++i) {
    for (int a = 0; a < pts.dim; ++a) s[a] = pts.coords[a][i];
    count += in_cone_tail(s, pts.dim, basis, m, theta, alpha) ? 1 : 0;
  }
  return count;
}

std::size_t cone_first_hit(const PointsSoA& pts, std::size_t begin, std::size_t skip,
                           const double* apex, const double* basis, int m, const double* theta,
                           double alpha, double r) {
  const double r2 = r * r;
  const __m256d vr2 = _mm256_set1_pd(r2);
  const __m256d zero = _mm256_setzero_pd();
  __m256d y[kMaxKernelDim];
  std::size_t j = begin;
  for (; j + 4 <= pts.n; j += 4) {
    for (int a = 0; a < pts.dim; ++a) {
      y[a] = _mm256_sub_pd(_mm256_loadu_pd(pts.coords[a] + j), _mm256_set1_pd(apex[a]));
    }
    __m256d len2;
    __m256d mask = cone_mask(y, pts.dim, basis, m, theta, alpha, &len2);
    mask = _mm256_and_pd(mask, _mm256_cmp_pd(len2, vr2, _CMP_LT_OQ));
    mask = _mm256_and_pd(mask, _mm256_cmp_pd(len2, zero, _CMP_NEQ_OQ));
    int bits = _mm256_movemask_pd(mask);
    if (skip >= j && skip < j + 4) bits &= ~(1 << (skip - j));
    if (bits) return j + static_cast<std::size_t>(__builtin_ctz(bits));
  }
  double s[kMaxKernelDim];
  for (; j < pts.n; ++j) {
    if (j == skip) continue;
    double len2 = 0.0;
    for (int a = 0; a < pts.dim; ++a) {
      s[a] = pts.coords[a][j] - apex[a];
      len2 += sq(s[a]);
    }
    if (!(len2 < r2) || len2 == 0.0) continue;
    if (in_cone_tail(s, pts.dim, basis, m, theta, alpha)) return j;
  }
  return pts.n;
}

double min_pair_sum(const double* a, const double* b, std::size_t n, std::size_t* argmin) {
  double best = a[0] + b[0];
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vmin = _mm256_add_pd(_mm256_loadu_pd(a), _mm256_loadu_pd(b));
    for (i = 4; i + 4 <= n; i += 4) {
      vmin = _mm256_min_pd(vmin, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vmin);
    for (double v : lanes) best = v < best ? v : best;
  } else {
    i = 1;
  }
  for (; i < n; ++i) {
    const double v = a[i] + b[i];
    if (v < best) best = v;
  }
  if (argmin) {
    std::size_t at = 0;
    while (a[at] + b[at] != best) ++at;
    *argmin = at;
  }
  return best;
}

std::size_t first_at_most(const double* a, const double* b, std::size_t n, double threshold) {
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(v, thr, _CMP_LE_OQ));
    if (bits) return i + static_cast<std::size_t>(__builtin_ctz(bits));
  }
  for (; i < n; ++i) {
    if (a[i] + b[i] <= threshold) return i;
  }
  return n;
}

}  // namespace

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{"avx2", count_cone, cone_first_hit, min_pair_sum, first_at_most};
  return table;
}

}  // namespace scenery::kernels
