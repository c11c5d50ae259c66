#pragma once

// RS- and SRS-movements realized on vertices: K_t is the hull of the displaced
// vertices x + t·β(x)·v, accepted only while it is still the pointwise image
// of K (see try_move).

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoconst/bodies.hpp"
#include "isoconst/criticality.hpp"
#include "isoconst/isotropy.hpp"

namespace isoconst {

struct SpeedField {
  Vector direction;                 // unit
  std::vector<double> vertex_speeds;  // one per polytope vertex
  bool odd = false;
};

namespace detail {

inline double speed_tolerance() { return 1e-9; }

inline Vector project_orthogonal(const Vector& x, const Vector& unit) { return x - unit.dot(x) * unit; }

}  // namespace detail

/// Vertices with the same projection onto v^⊥ must share a speed.
inline bool field_factors(const Polytope& p, const SpeedField& field) {
  const double tol = 10.0 * p.tolerance();
  for (int a = 0; a < p.num_vertices(); ++a)
    for (int b = a + 1; b < p.num_vertices(); ++b) {
      const Vector pa = detail::project_orthogonal(p.vertex(a), field.direction);
      const Vector pb = detail::project_orthogonal(p.vertex(b), field.direction);
      if ((pa - pb).lpNorm<Eigen::Infinity>() <= tol &&
          std::abs(field.vertex_speeds[static_cast<std::size_t>(a)] - field.vertex_speeds[static_cast<std::size_t>(b)]) >
              detail::speed_tolerance())
        return false;
    }
  return true;
}

/// Speeds at centrally paired vertices are negatives of each other.
inline bool field_is_odd(const Polytope& p, const SpeedField& field) {
  const auto center = symmetry_center(p);
  if (!center) return false;
  for (int a = 0; a < p.num_vertices(); ++a) {
    const auto b = p.find_vertex(2.0 * *center - p.vertex(a), 10.0 * p.tolerance());
    if (!b) return false;
    if (std::abs(field.vertex_speeds[static_cast<std::size_t>(a)] + field.vertex_speeds[static_cast<std::size_t>(*b)]) >
        detail::speed_tolerance())
      return false;
  }
  return true;
}

/// Residual of the least-squares affine fit to (vertex, speed); > 1e-9 means non-affine.
inline double affine_fit_residual(const Polytope& p, const SpeedField& field) {
  const int n = p.dim();
  Matrix a(p.num_vertices(), n + 1);
  Vector s(p.num_vertices());
  for (int i = 0; i < p.num_vertices(); ++i) {
    a.row(i).head(n) = p.vertex(i).transpose();
    a(i, n) = 1.0;
    s(i) = field.vertex_speeds[static_cast<std::size_t>(i)];
  }
  const Vector coef = a.colPivHouseholderQr().solve(s);
  return (a * coef - s).norm();
}

inline bool is_affine_field(const Polytope& p, const SpeedField& field) { return affine_fit_residual(p, field) <= 1e-9; }

struct MoveOutcome {
  std::optional<Polytope> body;
  std::string failure;  // empty when valid
};

/// Hull of displaced vertices, with the checks that it is still the image of K
/// under x ↦ x + tβ(π(x))v:
///   the field factors through the projection,
///   no two vertices on a common fiber swap order along v,
///   no displaced vertex falls strictly inside the new hull,
///   every displaced facet still lies in a supporting hyperplane.
inline MoveOutcome try_move(const Polytope& p, const SpeedField& field, double t) {
  MoveOutcome out;
  if (static_cast<int>(field.vertex_speeds.size()) != p.num_vertices() || field.direction.size() != p.dim()) {
    out.failure = "field does not match the polytope";
    return out;
  }
  if (!field_factors(p, field)) {
    out.failure = "speed field does not factor through the projection";
    return out;
  }
  std::vector<Vector> moved;
  for (int i = 0; i < p.num_vertices(); ++i)
    moved.push_back(p.vertex(i) + t * field.vertex_speeds[static_cast<std::size_t>(i)] * field.direction);

  const double tol = 10.0 * geometric_tolerance(moved);
  const Vector& v = field.direction;
  for (int a = 0; a < p.num_vertices(); ++a)
    for (int b = a + 1; b < p.num_vertices(); ++b) {
      const Vector pa = detail::project_orthogonal(p.vertex(a), v);
      const Vector pb = detail::project_orthogonal(p.vertex(b), v);
      if ((pa - pb).lpNorm<Eigen::Infinity>() > 10.0 * p.tolerance()) continue;
      const double before = v.dot(p.vertex(a) - p.vertex(b));
      const double after = v.dot(moved[static_cast<std::size_t>(a)] - moved[static_cast<std::size_t>(b)]);
      if (before * after < 0.0 && std::abs(after) > tol) {
        out.failure = "fiber order reversed";
        return out;
      }
    }

  HullResult hull;
  try {
    hull = convex_hull_with_map(moved, p.dim());
  } catch (const GeometryError& e) {
    out.failure = e.what();
    return out;
  }
  const Polytope& q = hull.polytope;
  auto on_hyperplane = [&](const Facet& g, const Vector& x) { return std::abs(g.normal.dot(x) - g.offset) <= tol; };

  for (const auto& x : moved) {
    bool boundary = false;
    for (const auto& g : q.facets())
      if (on_hyperplane(g, x)) { boundary = true; break; }
    if (!boundary) {
      out.failure = "a displaced vertex is interior";
      return out;
    }
  }
  for (const auto& f : p.facets()) {
    bool supported = false;
    for (const auto& g : q.facets()) {
      bool all = true;
      for (int id : f.vertex_ids)
        if (!on_hyperplane(g, moved[static_cast<std::size_t>(id)])) { all = false; break; }
      if (all) { supported = true; break; }
    }
    if (!supported) {
      out.failure = "a displaced facet is no longer on the boundary";
      return out;
    }
  }
  out.body = q;
  return out;
}

inline Polytope move(const Polytope& p, const SpeedField& field, double t) {
  auto r = try_move(p, field, t);
  if (!r.body) throw GeometryError(ErrorKind::InvalidMovement, "t = " + std::to_string(t) + ": " + r.failure);
  return std::move(*r.body);
}

struct MovementScan {
  std::vector<double> ts;
  std::vector<double> Ls;       // NaN where invalid
  std::vector<double> volumes;  // NaN where invalid
  std::vector<bool> valid;
  // largest contiguous valid run [valid_begin, valid_end) containing the sample nearest t = 0
  int valid_begin = 0;
  int valid_end = 0;
  // min over interior points of the run of L[k−1] − 2L[k] + L[k+1]; NaN if fewer than 3 points
  double convexity_certificate = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr int kDefaultScanSteps = 41;

/// Samples L along any one-parameter family; `body_at` returns nullopt when invalid.
inline MovementScan scan_family(const std::function<std::optional<Polytope>(double)>& body_at, double t_min, double t_max,
                                int steps = kDefaultScanSteps) {
  if (steps < 2 || !(t_max > t_min)) throw std::invalid_argument("scan needs t_min < t_max and at least two steps");
  MovementScan s;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < steps; ++k) {
    const double t = k == steps - 1 ? t_max : t_min + (t_max - t_min) * k / (steps - 1);
    s.ts.push_back(t);
    const auto body = body_at(t);
    if (body) {
      const auto r = isotropic_constant(*body);
      s.Ls.push_back(r.L);
      s.volumes.push_back(r.volume);
      s.valid.push_back(true);
    } else {
      s.Ls.push_back(nan);
      s.volumes.push_back(nan);
      s.valid.push_back(false);
    }
  }
  int anchor = 0;
  for (int k = 1; k < steps; ++k)
    if (std::abs(s.ts[static_cast<std::size_t>(k)]) < std::abs(s.ts[static_cast<std::size_t>(anchor)])) anchor = k;
  if (s.valid[static_cast<std::size_t>(anchor)]) {
    int b = anchor, e = anchor + 1;
    while (b > 0 && s.valid[static_cast<std::size_t>(b - 1)]) --b;
    while (e < steps && s.valid[static_cast<std::size_t>(e)]) ++e;
    s.valid_begin = b;
    s.valid_end = e;
  }
  for (int k = s.valid_begin + 1; k + 1 < s.valid_end; ++k) {
    const double d2 = s.Ls[static_cast<std::size_t>(k - 1)] - 2.0 * s.Ls[static_cast<std::size_t>(k)] + s.Ls[static_cast<std::size_t>(k + 1)];
    if (std::isnan(s.convexity_certificate) || d2 < s.convexity_certificate) s.convexity_certificate = d2;
  }
  return s;
}

/// L(K_t) on an evenly spaced grid over [t_min, t_max].
inline MovementScan scan(const Polytope& p, const SpeedField& field, double t_min, double t_max,
                         int steps = kDefaultScanSteps) {
  return scan_family([&](double t) { return try_move(p, field, t).body; }, t_min, t_max, steps);
}

/// Field moving the simplicial vertex v (speed 1, every other vertex 0) along the
/// unit normal of span(G). With odd = true the antipodal vertex −v moves with
/// speed −1, which keeps the body centrally symmetric.
inline SpeedField vertex_move_field(const Polytope& p, int vertex_id, int ridge_id, bool odd = false) {
  const Ridge& g = p.ridge(ridge_id);
  if (!std::binary_search(g.vertex_ids.begin(), g.vertex_ids.end(), vertex_id))
    throw std::invalid_argument("ridge does not contain the vertex");
  const auto symmetry = local_symmetry_check(p, vertex_id);
  for (const auto& [r, ok] : symmetry)
    if (r == ridge_id && !ok)
      throw GeometryError(ErrorKind::FactoringFailure,
                          "star of vertex " + std::to_string(vertex_id) + " is not symmetric about span of ridge " +
                              std::to_string(ridge_id));
  SpeedField field;
  field.direction = *detail::ridge_linear_normal(p, g);
  field.vertex_speeds.assign(static_cast<std::size_t>(p.num_vertices()), 0.0);
  field.vertex_speeds[static_cast<std::size_t>(vertex_id)] = 1.0;
  field.odd = odd;
  if (odd) {
    const auto anti = p.find_vertex(-p.vertex(vertex_id), detail::match_tolerance(p));
    if (!anti) throw GeometryError(ErrorKind::FactoringFailure, "no antipodal vertex for an odd field");
    field.vertex_speeds[static_cast<std::size_t>(*anti)] = -1.0;
  }
  if (!field_factors(p, field))
    throw GeometryError(ErrorKind::FactoringFailure, "vertex speeds do not factor through the projection");
  return field;
}

/// The family Z_r = C_n + [−(z + r v_ij), z + r v_ij], r ∈ I = [−z_i, z_j], with
/// v_ij = e_i − e_j, realized as vertex speeds on Z_0 = C_n + [−z, z].
struct ZonotopeMovement {
  Vector z;
  int i = 0;
  int j = 0;
  double a = 0.0;  // I = [a, b]
  double b = 0.0;
  Polytope body;   // Z_0
  SpeedField field;

  // The vertexwise field reproduces Z_r on all of I only when t = 0 is interior to I.
  bool anchored_interior() const { return z(i) > 0.0 && z(j) > 0.0; }

  /// Exact Z_r from its generators.
  Polytope at(double r) const {
    const int n = static_cast<int>(z.size());
    std::vector<Vector> gens;
    for (int k = 0; k < n; ++k) gens.push_back(Vector::Unit(n, k));
    Vector w = z;
    w(i) += r;
    w(j) -= r;
    if (w.norm() > 0.0) gens.push_back(w);
    return convex_hull(bodies::segment_sum_points(Vector::Zero(n), gens), n);
  }
};

/// i < j are 0-based coordinate indices.
inline ZonotopeMovement zonotope_move_field(const Vector& z, int i, int j) {
  const int n = static_cast<int>(z.size());
  if (n < 2 || i < 0 || j >= n || i >= j) throw std::invalid_argument("need 0 <= i < j < n");
  if ((z.array() < 0.0).any()) throw std::invalid_argument("z must be componentwise nonnegative");
  if (std::max(z(i), z(j)) <= 0.0)
    throw GeometryError(ErrorKind::InvalidMovement, "interval I = {0} is degenerate (z_i = z_j = 0)");
  ZonotopeMovement m;
  m.z = z;
  m.i = i;
  m.j = j;
  m.a = -z(i);
  m.b = z(j);

  std::vector<Vector> gens;
  for (int k = 0; k < n; ++k) gens.push_back(Vector::Unit(n, k));
  gens.push_back(z);
  const auto pts = bodies::segment_sum_points(Vector::Zero(n), gens);
  auto hull = convex_hull_with_map(pts, n);
  m.body = std::move(hull.polytope);
  m.field.direction = (Vector::Unit(n, i) - Vector::Unit(n, j)) / std::sqrt(2.0);
  m.field.vertex_speeds.assign(static_cast<std::size_t>(m.body.num_vertices()), 0.0);
  // bit n of the sign mask is the sign of the moving generator
  for (std::size_t mask = 0; mask < pts.size(); ++mask) {
    const int v = hull.vertex_of_point[mask];
    if (v < 0) continue;
    const double delta = ((mask >> n) & 1U) ? 1.0 : -1.0;
    m.field.vertex_speeds[static_cast<std::size_t>(v)] = delta * std::sqrt(2.0);
  }
  m.field.odd = true;
  return m;
}

}  // namespace isoconst
