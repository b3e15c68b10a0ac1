#pragma once

// Reference values computed without the library's cell trees.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

// Fraction of directions phi in the plane with |sin phi| < a (inside the
// double cone around the x-axis) and not cos phi > a (outside the half cone
// around +x). Both sets are unions of rays, so this is also the area fraction of
// the unit disk. Midpoint rule over n angles.
inline double planar_cone_fraction(double a, int n = 2000000) {
  long hits = 0;
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * std::numbers::pi * (i + 0.5) / n;
    const bool in_x = std::fabs(std::sin(phi)) < a;
    const bool in_h = std::cos(phi) > a;
    if (in_x && !in_h) ++hits;
  }
  return static_cast<double>(hits) / n;
}

// Area of the intersection of the disks B(0,1) and B(c,r) with |c| = d.
inline double lens_area(double d, double r) {
  const double pi = std::numbers::pi;
  if (d >= 1.0 + r) return 0.0;
  if (d + r <= 1.0) return pi * r * r;
  if (d + 1.0 <= r) return pi;
  const double a = std::acos((d * d + r * r - 1.0) / (2.0 * d * r));
  const double b = std::acos((d * d + 1.0 - r * r) / (2.0 * d));
  return r * r * a + b - 0.5 * std::sqrt((-d + r + 1) * (d + r - 1) * (d - r + 1) * (d + r + 1));
}

// Mass of [lo, hi] under the two-map Cantor measure with ratio rho on [0,1],
// bracketed by recursing `depth` levels through the cylinders.
struct Bracket {
  double low = 0.0;
  double high = 0.0;
};

inline void cantor_bracket(double lo, double hi, double a, double side, double rho, double mass,
                           int depth, Bracket& out) {
  const double b = a + side;
  if (b < lo || a > hi) return;
  if (a >= lo && b <= hi) {
    out.low += mass;
    out.high += mass;
    return;
  }
  if (depth == 0) {
    out.high += mass;
    return;
  }
  cantor_bracket(lo, hi, a, side * rho, rho, mass * 0.5, depth - 1, out);
  cantor_bracket(lo, hi, b - side * rho, side * rho, rho, mass * 0.5, depth - 1, out);
}

inline Bracket cantor_interval_mass(double lo, double hi, double rho, int depth) {
  Bracket out;
  cantor_bracket(lo, hi, 0.0, 1.0, rho, 1.0, depth, out);
  return out;
}

// Greedy block labels written out directly: block i (1-based) has length
// first * i; it is B when that leaves the running B-share strictly closer to q.
inline std::vector<int> greedy_labels(double q, int first, int depth) {
  std::vector<int> labels;
  long b_levels = 0;
  for (int i = 1; static_cast<int>(labels.size()) < depth; ++i) {
    const long len = static_cast<long>(first) * i;
    const double total = static_cast<double>(labels.size() + len);
    const double as_a = std::fabs(b_levels / total - q);
    const double as_b = std::fabs((b_levels + len) / total - q);
    const int label = as_b < as_a ? 1 : 0;
    if (label) b_levels += len;
    for (long k = 0; k < len && static_cast<int>(labels.size()) < depth; ++k) labels.push_back(label);
  }
  return labels;
}

// Closed-form cone constant in the plane: X takes 4 asin(a) of angle, H takes
// 2 acos(a), and their overlap is 2 min(asin a, acos a).
inline double planar_cone_closed_form(double a) {
  const double x = 4.0 * std::asin(a);
  const double overlap = 2.0 * std::min(std::asin(a), std::acos(a));
  return (x - overlap) / (2.0 * std::numbers::pi);
}

}  // namespace oracle
