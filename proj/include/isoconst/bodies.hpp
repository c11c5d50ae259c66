#pragma once

// Constructors for the reference bodies used throughout: cubes, simplices,
// cross-polytopes, Minkowski sums of segments, prisms and pyramids.

#include <cmath>
#include <vector>

#include "isoconst/geometry.hpp"

namespace isoconst::bodies {

/// [-half, half]^n
inline Polytope cube(int n, double half = 1.0) {
  std::vector<Vector> pts;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = (mask >> i & 1) ? half : -half;
    pts.push_back(v);
  }
  return convex_hull(pts, n);
}

/// conv{0, e_1, ..., e_n}
inline Polytope standard_simplex(int n) {
  std::vector<Vector> pts{Vector::Zero(n)};
  for (int i = 0; i < n; ++i) pts.push_back(Vector::Unit(n, i));
  return convex_hull(pts, n);
}

/// Vertices of the regular simplex centred at 0 with the given circumradius.
inline std::vector<Vector> regular_simplex_vertices(int n, double circumradius) {
  // e_1..e_{n+1} in R^{n+1} projected onto the hyperplane Σx = 0
  const Matrix chart = orthogonal_complement(Vector::Ones(n + 1));
  const Vector centroid = Vector::Constant(n + 1, 1.0 / (n + 1));
  std::vector<Vector> pts;
  for (int i = 0; i <= n; ++i) {
    Vector v = chart.transpose() * (Vector::Unit(n + 1, i) - centroid);
    pts.push_back(v * (circumradius / v.norm()));
  }
  return pts;
}

inline Polytope regular_simplex(int n, double circumradius = 1.0) {
  return convex_hull(regular_simplex_vertices(n, circumradius), n);
}

/// conv{±a·e_i}
inline Polytope cross_polytope(int n, double a = 1.0) {
  std::vector<Vector> pts;
  for (int i = 0; i < n; ++i) {
    pts.push_back(a * Vector::Unit(n, i));
    pts.push_back(-a * Vector::Unit(n, i));
  }
  return convex_hull(pts, n);
}

/// All 2^m points center + Σ ε_i z_i, ε ∈ {−1, 1}^m.
inline std::vector<Vector> segment_sum_points(const Vector& center, const std::vector<Vector>& generators) {
  const auto m = generators.size();
  std::vector<Vector> pts;
  pts.reserve(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Vector p = center;
    for (std::size_t i = 0; i < m; ++i) p += ((mask >> i) & 1U) ? generators[i] : Vector(-generators[i]);
    pts.push_back(std::move(p));
  }
  return pts;
}

/// Q_n = C_n + [−(e_1+…+e_n), e_1+…+e_n]
inline Polytope q_body(int n) {
  std::vector<Vector> gens;
  for (int i = 0; i < n; ++i) gens.push_back(Vector::Unit(n, i));
  gens.push_back(Vector::Ones(n));
  return convex_hull(segment_sum_points(Vector::Zero(n), gens), n);
}

/// base × [−h, h] in one more dimension.
inline Polytope prism(const Polytope& base, double half_height) {
  const int n = base.dim() + 1;
  std::vector<Vector> pts;
  for (const auto& v : base.vertices())
    for (double s : {-half_height, half_height}) {
      Vector p(n);
      p << v, s;
      pts.push_back(p);
    }
  return convex_hull(pts, n);
}

/// conv(base × {0} ∪ {apex}).
inline Polytope pyramid(const std::vector<Vector>& base, const Vector& apex) {
  const auto n = apex.size();
  std::vector<Vector> pts;
  for (const auto& b : base) {
    Vector p(n);
    p << b, 0.0;
    pts.push_back(p);
  }
  pts.push_back(apex);
  return convex_hull(pts, static_cast<int>(n));
}

}  // namespace isoconst::bodies
