#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "isoconst/bodies.hpp"
#include "isoconst/isotropy.hpp"

namespace isoconst {

/// center + Σ [−z_i, z_i]
struct Zonotope {
  int dim = 0;
  Vector center;
  std::vector<Vector> generators;
};

namespace detail {

inline bool parallel(const Vector& a, const Vector& b) {
  return std::abs(std::abs(a.dot(b)) - a.norm() * b.norm()) <= 1e-12 * a.norm() * b.norm() + 1e-14;
}

}  // namespace detail

/// Drops zero generators and merges parallel ones into a single segment.
inline Zonotope canonicalize(const Zonotope& z) {
  Zonotope out{z.dim, z.center, {}};
  const double scale = 1.0 + std::accumulate(z.generators.begin(), z.generators.end(), 0.0,
                                             [](double m, const Vector& g) { return std::max(m, g.cwiseAbs().maxCoeff()); });
  for (const auto& g : z.generators) {
    if (g.norm() <= 1e-12 * scale) continue;
    bool merged = false;
    for (auto& h : out.generators) {
      if (detail::parallel(g, h)) {
        h += (g.dot(h) >= 0.0 ? 1.0 : -1.0) * g;
        merged = true;
        break;
      }
    }
    if (!merged) out.generators.push_back(g);
  }
  return out;
}

inline constexpr int kMaxGenerators = 20;

/// V-representation: hull of all center + Σ ε_i z_i.
inline Polytope to_polytope(const Zonotope& z) {
  const Zonotope c = canonicalize(z);
  if (static_cast<int>(c.generators.size()) > kMaxGenerators)
    throw std::invalid_argument("more than 20 irredundant generators");
  Matrix g(z.dim, static_cast<Eigen::Index>(c.generators.size()));
  for (std::size_t k = 0; k < c.generators.size(); ++k) g.col(static_cast<Eigen::Index>(k)) = c.generators[k];
  if (c.generators.empty() || Eigen::FullPivLU<Matrix>(g).rank() < z.dim)
    throw GeometryError(ErrorKind::SpanDeficient, "generators do not span R^" + std::to_string(z.dim));
  return convex_hull(bodies::segment_sum_points(c.center, c.generators), z.dim);
}

/// The facets having a given generator as a Minkowski summand. For every member
/// facet, the number of its vertices and of generators parallel to it are kept
/// so the zone can be classified on its own.
struct Zone {
  int dim = 0;
  int generator_id = 0;  // index into canonicalize(z).generators
  std::vector<int> face_ids;
  std::vector<int> face_vertex_counts;
  std::vector<int> face_summand_counts;
};

/// A facet with outward normal u is c_F + Σ_{<u,z_j> = 0} [−z_j, z_j] + (fixed
/// vertex offsets), so generator i is a summand of F iff it is parallel to F.
inline std::vector<Zone> zones(const Zonotope& z, const Polytope& p) {
  const Zonotope c = canonicalize(z);
  std::vector<Zone> out;
  for (int gi = 0; gi < static_cast<int>(c.generators.size()); ++gi) {
    Zone zone;
    zone.dim = p.dim();
    zone.generator_id = gi;
    const Vector& g = c.generators[static_cast<std::size_t>(gi)];
    for (int f = 0; f < p.num_facets(); ++f) {
      const Vector& u = p.facet(f).normal;
      if (std::abs(u.dot(g)) > 1e-9 * g.norm()) continue;
      zone.face_ids.push_back(f);
      zone.face_vertex_counts.push_back(static_cast<int>(p.facet(f).vertex_ids.size()));
      int summands = 0;
      for (const auto& h : c.generators)
        if (std::abs(u.dot(h)) <= 1e-9 * h.norm()) ++summands;
      zone.face_summand_counts.push_back(summands);
    }
    out.push_back(std::move(zone));
  }
  return out;
}

inline std::vector<Zone> zones(const Zonotope& z) { return zones(z, to_polytope(z)); }

/// Every member facet is a parallelepiped: n−1 summands and 2^{n−1} vertices.
inline bool is_cubical(const Zone& zone) {
  const int expected_vertices = 1 << (zone.dim - 1);
  for (std::size_t k = 0; k < zone.face_ids.size(); ++k)
    if (zone.face_vertex_counts[k] != expected_vertices || zone.face_summand_counts[k] != zone.dim - 1) return false;
  return !zone.face_ids.empty();
}

struct CanonicalForm {
  Vector y;       // in [0,1]^n, sorted descending
  AffineMap map;  // sends C_n + [−y, y] onto the input zonotope
};

/// Normal form C_n + [−y, y] of a zonotope with n+1 generators: take the kernel
/// vector λ of [z_1 … z_{n+1}], flip signs so λ ≥ 0, divide by the largest entry
/// (ties: largest index) and order the remaining ratios descending.
inline CanonicalForm canonicalize_n_plus_1(const std::vector<Vector>& generators, const Vector& center) {
  const auto m = static_cast<int>(generators.size());
  if (m < 2) throw GeometryError(ErrorKind::RankDeficient, "need n+1 generators");
  const int n = m - 1;
  Matrix g(n, m);
  for (int k = 0; k < m; ++k) {
    if (generators[static_cast<std::size_t>(k)].size() != n)
      throw GeometryError(ErrorKind::RankDeficient, "need exactly n+1 generators in R^n");
    g.col(k) = generators[static_cast<std::size_t>(k)];
  }
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(n - 1) <= 1e-10 * std::max(1.0, sv(0)))
    throw GeometryError(ErrorKind::RankDeficient, "generator matrix has rank < n");
  Vector lambda = svd.matrixV().col(m - 1);
  std::vector<double> sign(static_cast<std::size_t>(m), 1.0);
  for (int k = 0; k < m; ++k) {
    if (std::abs(lambda(k)) <= 1e-12) lambda(k) = 0.0;
    if (lambda(k) < 0.0) {
      lambda(k) = -lambda(k);
      sign[static_cast<std::size_t>(k)] = -1.0;
    }
  }
  int pivot = 0;
  for (int k = 1; k < m; ++k)
    if (lambda(k) >= lambda(pivot) - 1e-12) pivot = k;

  std::vector<int> rest;
  for (int k = 0; k < m; ++k)
    if (k != pivot) rest.push_back(k);
  std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) { return lambda(a) > lambda(b); });

  CanonicalForm out;
  out.y.resize(n);
  out.map.linear.resize(n, n);
  for (int k = 0; k < n; ++k) {
    const int src = rest[static_cast<std::size_t>(k)];
    out.y(k) = std::min(1.0, lambda(src) / lambda(pivot));
    out.map.linear.col(k) = sign[static_cast<std::size_t>(src)] * generators[static_cast<std::size_t>(src)];
  }
  out.map.shift = center;
  return out;
}

/// C_n + [−y, y]
inline Zonotope cube_plus_segment(const Vector& y) {
  const int n = static_cast<int>(y.size());
  Zonotope z{n, Vector::Zero(n), {}};
  for (int i = 0; i < n; ++i) z.generators.push_back(Vector::Unit(n, i));
  z.generators.push_back(y);
  return z;
}

inline double L_of_y(const Vector& y) {
  if ((y.array() < 0.0).any()) throw std::invalid_argument("y must be nonnegative");
  return isotropic_constant(to_polytope(cube_plus_segment(y))).L;
}

struct Refinement {
  Vector start;
  Vector end;
  std::vector<double> trajectory;  // L after each accepted coordinate update, starting with L(start)
  bool maximize = true;
};

/// Coordinate descent on [0,1]^n with golden-section line searches; stops once a
/// full pass moves no coordinate by more than `tol`.
inline Refinement refine_extremum(const Vector& start, bool maximize, double tol = 1e-4) {
  const double sign = maximize ? -1.0 : 1.0;  // minimize sign·L
  Refinement r{start, start, {}, maximize};
  Vector y = start;
  double best = L_of_y(y);
  r.trajectory.push_back(best);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int pass = 0; pass < 50; ++pass) {
    double moved = 0.0;
    for (int k = 0; k < y.size(); ++k) {
      auto f = [&](double s) {
        Vector c = y;
        c(k) = s;
        return sign * L_of_y(c);
      };
      double lo = 0.0, hi = 1.0;
      double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
      double f1 = f(x1), f2 = f(x2);
      while (hi - lo > tol) {
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - phi * (hi - lo);
          f1 = f(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + phi * (hi - lo);
          f2 = f(x2);
        }
      }
      double cand = 0.5 * (lo + hi), fc = f(cand);
      for (double edge : {0.0, 1.0}) {
        const double fe = f(edge);
        if (fe < fc) {
          cand = edge;
          fc = fe;
        }
      }
      if (fc < sign * best) {
        moved = std::max(moved, std::abs(cand - y(k)));
        y(k) = cand;
        best = sign * fc;
        r.trajectory.push_back(best);
      }
    }
    if (moved < tol) break;
  }
  r.end = y;
  return r;
}

struct ExtremalResult {
  int n = 0;
  double grid_step = 0.0;
  std::vector<Vector> ys;  // lexicographic grid order
  std::vector<double> Ls;
  double max_L = 0.0;
  double min_L = 0.0;
  std::vector<Vector> argmax;  // all grid points within 1e-9 of the maximum
  std::vector<Vector> argmin;  // likewise for the minimum
  std::vector<Refinement> refinements;
};

inline constexpr double kAttainmentTolerance = 1e-9;

inline double default_grid_step(int n) { return n <= 2 ? 0.05 : (n == 3 ? 0.1 : 0.2); }

/// L_of_y over the grid {0, h, …, 1}^n; equal values are shared between
/// permutations of y (L_of_y is permutation invariant).
inline ExtremalResult extremal_search(int n, double grid_step, bool refine = false) {
  if (n < 2 || n > 4) throw std::invalid_argument("extremal search supports n in {2, 3, 4}");
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw std::invalid_argument("grid step must lie in (0, 1]");
  const double cells = 1.0 / grid_step;
  const int k = static_cast<int>(std::lround(cells));
  if (std::abs(cells - k) > 1e-9) throw std::invalid_argument("grid step must divide 1");
  ExtremalResult out;
  out.n = n;
  out.grid_step = grid_step;
  std::map<std::vector<int>, double> cache;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vector y(n);
    for (int i = 0; i < n; ++i) y(i) = idx[static_cast<std::size_t>(n - 1 - i)] == k ? 1.0 : idx[static_cast<std::size_t>(n - 1 - i)] * grid_step;
    std::vector<int> key(idx);
    std::sort(key.begin(), key.end());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, L_of_y(y)).first;
    out.ys.push_back(y);
    out.Ls.push_back(it->second);
    int pos = 0;
    while (pos < n && ++idx[static_cast<std::size_t>(pos)] > k) idx[static_cast<std::size_t>(pos++)] = 0;
    if (pos == n) break;
  }
  out.max_L = *std::max_element(out.Ls.begin(), out.Ls.end());
  out.min_L = *std::min_element(out.Ls.begin(), out.Ls.end());
  for (std::size_t s = 0; s < out.ys.size(); ++s) {
    if (out.Ls[s] >= out.max_L - kAttainmentTolerance) out.argmax.push_back(out.ys[s]);
    if (out.Ls[s] <= out.min_L + kAttainmentTolerance) out.argmin.push_back(out.ys[s]);
  }
  if (refine) {
    out.refinements.push_back(refine_extremum(out.argmax.front(), true));
    out.refinements.push_back(refine_extremum(out.argmin.front(), false));
  }
  return out;
}

}  // namespace isoconst
