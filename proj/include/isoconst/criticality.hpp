#pragma once

// First-order data of isotropic polytopes: facet defects
//     d_F = E[‖X‖² X] − (n+2) E[X],   X uniform on F,
// affine/Euclidean reflector detection on ridges, the third-moment matrix
// m_ij = E[X_i X_j X_n] in the ridge frame, and local reflection symmetry at
// simplicial vertices.

#include <algorithm>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "isoconst/moments.hpp"

namespace isoconst {

inline constexpr double kIsotropyTolerance = 1e-6;

/// Throws NotIsotropic unless ‖mean‖ and max|A − I| are within `tol`.
inline void require_isotropic(const Polytope& p, double tol = kIsotropyTolerance) {
  const auto m = body_moments(p);
  const double mean_err = m.mean.norm();
  const double cov_err = (m.covariance - Matrix::Identity(p.dim(), p.dim())).cwiseAbs().maxCoeff();
  if (mean_err > tol || cov_err > tol)
    throw GeometryError(ErrorKind::NotIsotropic, "polytope is not in isotropic position (|mean| = " +
                                                     std::to_string(mean_err) + ", |A - I| = " + std::to_string(cov_err) +
                                                     "); run isotropize first");
}

struct FacetDefect {
  int facet_id = 0;
  Vector defect;
  double norm = 0.0;
};

inline FacetDefect facet_defect(const Polytope& p, int facet_id) {
  const auto fm = facet_moments(p, facet_id);
  FacetDefect d;
  d.facet_id = facet_id;
  d.defect = fm.cubic_radial - (p.dim() + 2.0) * fm.mean;
  d.norm = d.defect.norm();
  return d;
}

inline std::vector<FacetDefect> facet_defects(const Polytope& p) {
  require_isotropic(p);
  std::vector<FacetDefect> out;
  for (int f = 0; f < p.num_facets(); ++f) out.push_back(facet_defect(p, f));
  return out;
}

inline bool detect_zero_defect(const Polytope& p, double tolerance) {
  const auto defects = facet_defects(p);
  return std::all_of(defects.begin(), defects.end(), [&](const FacetDefect& d) { return d.norm <= tolerance; });
}

/// ∫_F (‖x‖² − n − 2)·f(x) dvol_{n−1}, with f affine on each simplex of the facet
/// triangulation and given by its values at the facet vertices (same order as
/// facet.vertex_ids).
inline double piecewise_affine_test(const Polytope& p, int facet_id, std::span<const double> f_values) {
  require_isotropic(p);
  const auto& ids = p.facet(facet_id).vertex_ids;
  if (f_values.size() != ids.size()) throw std::invalid_argument("one value per facet vertex required");
  const int n = p.dim();
  double total = 0.0;
  for (const auto& s : triangulate_facet(p, facet_id)) {
    const int k = s.order();
    const Matrix gram = s.vertices.transpose() * s.vertices;
    double integral = 0.0;
    for (int a = 0; a <= k; ++a) {
      const auto pos = std::lower_bound(ids.begin(), ids.end(), s.vertex_ids[static_cast<std::size_t>(a)]) - ids.begin();
      const double fa = f_values[static_cast<std::size_t>(pos)];
      if (fa == 0.0) continue;
      // E[‖X‖² λ_a] = Σ_{b,c} <v_b, v_c> E[λ_a λ_b λ_c]
      double radial = 0.0;
      for (int b = 0; b <= k; ++b)
        for (int c = 0; c <= k; ++c) {
          std::vector<int> mult(static_cast<std::size_t>(k + 1), 0);
          ++mult[static_cast<std::size_t>(a)];
          ++mult[static_cast<std::size_t>(b)];
          ++mult[static_cast<std::size_t>(c)];
          radial += gram(b, c) * dirichlet_moment(k, mult);
        }
      integral += fa * (radial - (n + 2.0) / (k + 1.0));
    }
    total += s.measure() * integral;
  }
  return total;
}

struct ReflectorReport {
  int ridge_id = 0;
  bool is_affine = false;
  bool is_euclidean = false;
  std::optional<AffineMap> map;  // present when is_affine; fixes the ridge, maps F1 onto F2
};

namespace detail {

// Matching tolerance for vertex images under maps built from the data.
inline double match_tolerance(const Polytope& p) {
  return 1e-6 * (1.0 + max_abs_coordinate(p.vertices()));
}

// True if map sends the vertex set `from` bijectively onto `to`.
inline bool maps_onto(const Polytope& p, const AffineMap& map, const std::vector<int>& from, const std::vector<int>& to) {
  if (from.size() != to.size()) return false;
  const double tol = match_tolerance(p);
  std::vector<char> hit(to.size(), 0);
  for (int id : from) {
    const Vector img = map(p.vertex(id));
    bool found = false;
    for (std::size_t k = 0; k < to.size(); ++k) {
      if (!hit[k] && (p.vertex(to[k]) - img).lpNorm<Eigen::Infinity>() <= tol) {
        hit[k] = 1;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// n−1 affinely independent points among ids (greedy).
inline std::vector<int> affine_basis(const Polytope& p, const std::vector<int>& ids) {
  std::vector<int> basis{ids.front()};
  std::vector<Vector> dirs;
  for (std::size_t k = 1; k < ids.size(); ++k) {
    Vector r = p.vertex(ids[k]) - p.vertex(ids.front());
    for (const auto& d : dirs) r -= d.dot(r) * d;
    if (r.norm() > 1e-7 * (1.0 + max_abs_coordinate(p.vertices()))) {
      dirs.push_back(r.normalized());
      basis.push_back(ids[k]);
    }
  }
  return basis;
}

inline AffineMap reflection_through(const Vector& point, const Vector& unit_normal) {
  const auto n = unit_normal.size();
  Matrix lin = Matrix::Identity(n, n) - 2.0 * unit_normal * unit_normal.transpose();
  return {lin, point - lin * point};
}

// Unit normal of the linear hyperplane spanned by the ridge; nullopt if the
// ridge's linear span is not a hyperplane.
inline std::optional<Vector> ridge_linear_normal(const Polytope& p, const Ridge& g) {
  Matrix cols(p.dim(), static_cast<Eigen::Index>(g.vertex_ids.size()));
  for (std::size_t k = 0; k < g.vertex_ids.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = p.vertex(g.vertex_ids[k]);
  Matrix comp = orthogonal_complement(cols);
  if (comp.cols() != 1) return std::nullopt;
  return Vector(comp.col(0));
}

inline std::vector<int> set_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

/// Decides whether the ridge is an affine reflector, and whether the reflection
/// across the hyperplane through the ridge and the centroid realizes it.
inline ReflectorReport find_affine_reflector(const Polytope& p, int ridge_id) {
  const Ridge& g = p.ridge(ridge_id);
  const auto& f1 = p.facet(g.facets[0]).vertex_ids;
  const auto& f2 = p.facet(g.facets[1]).vertex_ids;
  ReflectorReport report;
  report.ridge_id = ridge_id;
  const Vector centroid = body_moments(p).mean;
  const int n = p.dim();

  // Euclidean candidate: hyperplane through aff(G) and the centroid
  {
    Matrix dirs(n, static_cast<Eigen::Index>(g.vertex_ids.size()));
    for (std::size_t k = 0; k < g.vertex_ids.size(); ++k)
      dirs.col(static_cast<Eigen::Index>(k)) = p.vertex(g.vertex_ids[k]) - centroid;
    const Matrix comp = orthogonal_complement(dirs);
    if (comp.cols() == 1) {
      const AffineMap rho = detail::reflection_through(centroid, comp.col(0));
      if (detail::maps_onto(p, rho, f1, f2)) {
        report.is_affine = report.is_euclidean = true;
        report.map = rho;
        return report;
      }
    }
  }

  // Affine candidates: fix aff(G), send one off-ridge vertex of F1 to each
  // off-ridge vertex of F2, and keep the centroid fixed off the facet plane.
  const auto off1 = detail::set_difference(f1, g.vertex_ids);
  const auto off2 = detail::set_difference(f2, g.vertex_ids);
  if (off1.size() != off2.size() || off1.empty()) return report;
  const auto basis = detail::affine_basis(p, g.vertex_ids);
  if (static_cast<int>(basis.size()) != n - 1) return report;
  const Vector g0 = p.vertex(basis.front());
  Matrix src(n, n), dst(n, n);
  for (int k = 1; k < n - 1; ++k) {
    src.col(k - 1) = p.vertex(basis[static_cast<std::size_t>(k)]) - g0;
    dst.col(k - 1) = src.col(k - 1);
  }
  src.col(n - 2) = p.vertex(off1.front()) - g0;
  src.col(n - 1) = centroid - g0;
  dst.col(n - 1) = src.col(n - 1);
  Eigen::FullPivLU<Matrix> lu(src);
  if (!lu.isInvertible()) return report;
  for (int target : off2) {
    dst.col(n - 2) = p.vertex(target) - g0;
    const Matrix lin = dst * lu.inverse();
    const AffineMap f{lin, g0 - lin * g0};
    if (detail::maps_onto(p, f, f1, f2)) {
      report.is_affine = true;
      report.map = f;
      return report;
    }
  }
  return report;
}

/// M with m_ij = E[X_i X_j X_n] for X uniform on the facet, after rigidly
/// rotating so that span(ridge) = e_n^⊥ and the facet lies in {x_n ≥ 0}.
inline Matrix third_moment_matrix(const Polytope& p, int facet_id, int ridge_id) {
  const Ridge& g = p.ridge(ridge_id);
  if (g.facets[0] != facet_id && g.facets[1] != facet_id)
    throw GeometryError(ErrorKind::FrameFailure, "ridge is not contained in the facet");
  const auto normal = detail::ridge_linear_normal(p, g);
  if (!normal) throw GeometryError(ErrorKind::FrameFailure, "ridge spans no linear hyperplane (origin in its affine hull)");
  Vector w = *normal;
  double side = 0.0;
  for (int id : p.facet(facet_id).vertex_ids) side += w.dot(p.vertex(id));
  if (side < 0.0) w = -w;
  const int n = p.dim();
  Matrix q(n, n);
  q.leftCols(n - 1) = orthogonal_complement(w);
  q.col(n - 1) = w;
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  const Tensor3 rotated = facet_moments(p, facet_id).third.rotated(q.transpose());
  return rotated.contract(Vector::Unit(n, n - 1));
}

/// For each ridge G through the simplicial vertex v: is the star of v (union of
/// facets containing v) invariant under reflection across span(G)?
inline std::vector<std::pair<int, bool>> local_symmetry_check(const Polytope& p, int vertex_id) {
  require_isotropic(p);
  if (!is_simplicial_vertex(p, vertex_id))
    throw GeometryError(ErrorKind::NotSimplicialVertex, "vertex " + std::to_string(vertex_id) + " is not simplicial");
  const auto star = p.facets_of_vertex(vertex_id);
  const double tol = detail::match_tolerance(p);
  std::vector<std::pair<int, bool>> out;
  for (int r : p.ridges_of_vertex(vertex_id)) {
    const auto normal = detail::ridge_linear_normal(p, p.ridge(r));
    if (!normal) throw GeometryError(ErrorKind::FrameFailure, "ridge spans no linear hyperplane");
    const AffineMap rho = detail::reflection_through(Vector::Zero(p.dim()), *normal);
    bool symmetric = true;
    for (int f : star) {
      std::vector<int> image;
      for (int id : p.facet(f).vertex_ids) {
        const auto hit = p.find_vertex(rho(p.vertex(id)), tol);
        if (!hit) break;
        image.push_back(*hit);
      }
      std::sort(image.begin(), image.end());
      const bool found = std::any_of(star.begin(), star.end(), [&](int s) { return p.facet(s).vertex_ids == image; });
      if (!found) {
        symmetric = false;
        break;
      }
    }
    out.emplace_back(r, symmetric);
  }
  return out;
}

}  // namespace isoconst
