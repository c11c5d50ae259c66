#pragma once

// Canonical V-polytopes with their facet/ridge lattice, brute-force hulling and
// triangulation. Everything here is sized for desk-scale instances (n <= 6,
// a few hundred candidate points).

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "isoconst/errors.hpp"
#include "isoconst/linalg.hpp"

namespace isoconst {

inline constexpr int kMaxDimension = 6;

struct Facet {
  std::vector<int> vertex_ids;  // sorted
  Vector normal;                // unit, outward
  double offset = 0.0;          // <normal, x> = offset on the facet
};

struct Ridge {
  std::vector<int> vertex_ids;  // sorted
  std::array<int, 2> facets{};
};

/// A simplex given by its vertex coordinates (columns) and, where it came from a
/// polytope, the ids of those vertices in the polytope.
struct Simplex {
  Matrix vertices;
  std::vector<int> vertex_ids;

  int order() const { return static_cast<int>(vertices.cols()) - 1; }
  double measure() const { return simplex_measure(vertices); }
};

class Polytope {
 public:
  Polytope() = default;

  // Trusted constructor; use convex_hull() for unvalidated input.
  Polytope(int dim, std::vector<Vector> vertices, std::vector<Facet> facets, std::vector<Ridge> ridges)
      : dim_(dim),
        vertices_(std::move(vertices)),
        facets_(std::move(facets)),
        ridges_(std::move(ridges)),
        tol_(geometric_tolerance(vertices_)) {}

  int dim() const { return dim_; }
  const std::vector<Vector>& vertices() const { return vertices_; }
  const Vector& vertex(int i) const { return vertices_.at(static_cast<std::size_t>(i)); }
  const std::vector<Facet>& facets() const { return facets_; }
  const Facet& facet(int i) const { return facets_.at(static_cast<std::size_t>(i)); }
  const std::vector<Ridge>& ridges() const { return ridges_; }
  const Ridge& ridge(int i) const { return ridges_.at(static_cast<std::size_t>(i)); }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }
  int num_ridges() const { return static_cast<int>(ridges_.size()); }
  double tolerance() const { return tol_; }

  std::vector<Vector> points(std::span<const int> ids) const {
    std::vector<Vector> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(vertex(id));
    return out;
  }

  bool facet_contains(int facet_id, int vertex_id) const {
    const auto& ids = facet(facet_id).vertex_ids;
    return std::binary_search(ids.begin(), ids.end(), vertex_id);
  }

  std::vector<int> facets_of_vertex(int vertex_id) const {
    std::vector<int> out;
    for (int f = 0; f < num_facets(); ++f)
      if (facet_contains(f, vertex_id)) out.push_back(f);
    return out;
  }

  std::vector<int> ridges_of_vertex(int vertex_id) const {
    std::vector<int> out;
    for (int r = 0; r < num_ridges(); ++r) {
      const auto& ids = ridge(r).vertex_ids;
      if (std::binary_search(ids.begin(), ids.end(), vertex_id)) out.push_back(r);
    }
    return out;
  }

  // Index of a vertex within tolerance of p, if any.
  std::optional<int> find_vertex(const Vector& p, double tol) const {
    for (int i = 0; i < num_vertices(); ++i)
      if ((vertices_[static_cast<std::size_t>(i)] - p).lpNorm<Eigen::Infinity>() <= tol) return i;
    return std::nullopt;
  }

 private:
  int dim_ = 0;
  std::vector<Vector> vertices_;
  std::vector<Facet> facets_;
  std::vector<Ridge> ridges_;
  double tol_ = 0.0;
};

struct HullResult {
  Polytope polytope;
  // For every input point, the vertex it became, or -1 if it is not extreme.
  std::vector<int> vertex_of_point;
};

namespace detail {

inline std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Enumerates affinely independent dim-subsets of `pts`, keeping an incremental
// orthonormal basis of the difference vectors so dependent prefixes are pruned.
class HyperplaneEnumerator {
 public:
  HyperplaneEnumerator(const std::vector<Vector>& pts, int dim, double tol)
      : pts_(pts), dim_(dim), tol_(tol) {}

  std::vector<std::vector<int>> run() {
    chosen_.clear();
    basis_.clear();
    recurse(0);
    return std::move(facets_);
  }

  std::vector<Vector> normals;
  std::vector<double> offsets;

 private:
  void recurse(int start) {
    const int n = static_cast<int>(pts_.size());
    if (static_cast<int>(chosen_.size()) == dim_) {
      leaf();
      return;
    }
    const int remaining = dim_ - static_cast<int>(chosen_.size());
    for (int i = start; i <= n - remaining; ++i) {
      if (chosen_.empty()) {
        chosen_.push_back(i);
        recurse(i + 1);
        chosen_.pop_back();
        continue;
      }
      Vector r = pts_[static_cast<std::size_t>(i)] - pts_[static_cast<std::size_t>(chosen_.front())];
      for (const auto& b : basis_) r -= b.dot(r) * b;
      const double len = r.norm();
      if (len <= 10.0 * tol_) continue;
      chosen_.push_back(i);
      basis_.push_back(r / len);
      recurse(i + 1);
      basis_.pop_back();
      chosen_.pop_back();
    }
  }

  void leaf() {
    for (const auto& on : facets_) {
      bool all = true;
      for (int c : chosen_)
        if (!std::binary_search(on.begin(), on.end(), c)) { all = false; break; }
      if (all) return;
    }
    // normal: complement of the basis, obtained by orthogonalizing the best unit vector
    Vector w;
    double best = -1.0;
    for (int k = 0; k < dim_; ++k) {
      Vector e = Vector::Unit(dim_, k);
      for (const auto& b : basis_) e -= b.dot(e) * b;
      if (e.norm() > best) { best = e.norm(); w = e; }
    }
    w.normalize();
    Vector outward;
    double offset = 0.0;
    if (!supporting(w, outward, offset)) return;
    // refit over all incident points to remove bias from the chosen subset
    std::vector<int> on = incident(outward, offset);
    if (static_cast<int>(on.size()) > dim_) {
      Vector centroid = Vector::Zero(dim_);
      for (int i : on) centroid += pts_[static_cast<std::size_t>(i)];
      centroid /= static_cast<double>(on.size());
      Matrix centered(dim_, static_cast<Eigen::Index>(on.size()));
      for (std::size_t k = 0; k < on.size(); ++k)
        centered.col(static_cast<Eigen::Index>(k)) = pts_[static_cast<std::size_t>(on[k])] - centroid;
      Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeFullU);
      Vector refit = svd.matrixU().col(dim_ - 1);
      if (refit.dot(outward) < 0) refit = -refit;
      Vector out2;
      double off2 = 0.0;
      if (supporting(refit, out2, off2)) {
        outward = out2;
        offset = off2;
        on = incident(outward, offset);
      }
    }
    for (const auto& f : facets_)
      if (f == on) return;
    facets_.push_back(on);
    normals.push_back(outward);
    offsets.push_back(offset);
  }

  bool supporting(const Vector& w, Vector& outward, double& offset) const {
    const double b = w.dot(pts_[static_cast<std::size_t>(chosen_.front())]);
    bool pos = false, neg = false;
    for (const auto& p : pts_) {
      const double s = w.dot(p) - b;
      if (s > tol_) pos = true;
      else if (s < -tol_) neg = true;
      if (pos && neg) return false;
    }
    if (pos) {
      outward = -w;
      offset = -b;
    } else {
      outward = w;
      offset = b;
    }
    return true;
  }

  std::vector<int> incident(const Vector& u, double b) const {
    std::vector<int> on;
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i)
      if (std::abs(u.dot(pts_[static_cast<std::size_t>(i)]) - b) <= tol_) on.push_back(i);
    return on;
  }

  const std::vector<Vector>& pts_;
  int dim_;
  double tol_;
  std::vector<int> chosen_;
  std::vector<Vector> basis_;
  std::vector<std::vector<int>> facets_;
};

inline HullResult hull_1d(const std::vector<Vector>& points) {
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i](0) < points[lo](0)) lo = i;
    if (points[i](0) > points[hi](0)) hi = i;
  }
  const double tol = geometric_tolerance(points);
  if (points[hi](0) - points[lo](0) <= tol)
    throw GeometryError(ErrorKind::DegenerateInput, "points do not span a segment");
  HullResult out;
  out.vertex_of_point.assign(points.size(), -1);
  const std::size_t first = std::min(lo, hi), second = std::max(lo, hi);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (std::abs(points[i](0) - points[first](0)) <= tol) out.vertex_of_point[i] = 0;
    else if (std::abs(points[i](0) - points[second](0)) <= tol) out.vertex_of_point[i] = 1;
  }
  std::vector<Vector> verts{points[first], points[second]};
  const double sign = points[second](0) > points[first](0) ? 1.0 : -1.0;
  std::vector<Facet> facets{
      Facet{{0}, Vector::Constant(1, -sign), -sign * points[first](0)},
      Facet{{1}, Vector::Constant(1, sign), sign * points[second](0)},
  };
  out.polytope = Polytope(1, std::move(verts), std::move(facets), {});
  return out;
}

}  // namespace detail

/// Convex hull by enumeration of supporting hyperplanes through affinely independent
/// n-subsets. Returns the extreme vertices (in input order) and their full facet and
/// ridge lattice, plus the point-to-vertex map.
inline HullResult convex_hull_with_map(std::span<const Vector> input, int dim) {
  if (dim < 1 || dim > kMaxDimension)
    throw GeometryError(ErrorKind::DegenerateInput, "dimension " + std::to_string(dim) + " outside [1, 6]");
  for (const auto& p : input) {
    if (p.size() != dim) throw GeometryError(ErrorKind::DegenerateInput, "point of wrong dimension");
    if (!p.allFinite()) throw GeometryError(ErrorKind::DegenerateInput, "non-finite coordinate");
  }
  if (static_cast<int>(input.size()) < dim + 1)
    throw GeometryError(ErrorKind::DegenerateInput, "need at least n+1 points");

  const double tol = geometric_tolerance(input);
  // collapse duplicates onto their first occurrence
  std::vector<Vector> pts;
  std::vector<int> rep(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    int found = -1;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if ((pts[j] - input[i]).lpNorm<Eigen::Infinity>() <= tol) { found = static_cast<int>(j); break; }
    if (found < 0) {
      found = static_cast<int>(pts.size());
      pts.push_back(input[i]);
    }
    rep[i] = found;
  }
  if (affine_rank(pts, tol) < dim)
    throw GeometryError(ErrorKind::DegenerateInput, "affine hull has dimension < " + std::to_string(dim));

  HullResult result;
  if (dim == 1) {
    auto h = detail::hull_1d(pts);
    result.polytope = std::move(h.polytope);
    result.vertex_of_point.resize(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) result.vertex_of_point[i] = h.vertex_of_point[static_cast<std::size_t>(rep[i])];
    return result;
  }

  detail::HyperplaneEnumerator enumerator(pts, dim, tol);
  auto facet_sets = enumerator.run();

  // a point is a vertex iff the normals of its incident facets span R^n
  std::vector<int> new_id(pts.size(), -1);
  std::vector<Vector> verts;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<Vector> normals;
    for (std::size_t f = 0; f < facet_sets.size(); ++f)
      if (std::binary_search(facet_sets[f].begin(), facet_sets[f].end(), static_cast<int>(i)))
        normals.push_back(enumerator.normals[f]);
    if (static_cast<int>(normals.size()) < dim) continue;
    Matrix m(dim, static_cast<Eigen::Index>(normals.size()));
    for (std::size_t k = 0; k < normals.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = normals[k];
    Eigen::JacobiSVD<Matrix> svd(m);
    if (svd.singularValues()(dim - 1) > 1e-9) {
      new_id[i] = static_cast<int>(verts.size());
      verts.push_back(pts[i]);
    }
  }

  if (static_cast<int>(verts.size()) < dim + 1)
    throw GeometryError(ErrorKind::DegenerateInput, "hull is numerically degenerate");
  std::vector<Facet> facets;
  for (std::size_t f = 0; f < facet_sets.size(); ++f) {
    Facet facet;
    for (int i : facet_sets[f])
      if (new_id[static_cast<std::size_t>(i)] >= 0) facet.vertex_ids.push_back(new_id[static_cast<std::size_t>(i)]);
    std::sort(facet.vertex_ids.begin(), facet.vertex_ids.end());
    if (static_cast<int>(facet.vertex_ids.size()) < dim)
      throw GeometryError(ErrorKind::DegenerateInput, "hull is numerically degenerate");
    facet.normal = enumerator.normals[f];
    facet.offset = enumerator.offsets[f];
    facets.push_back(std::move(facet));
  }

  std::vector<Ridge> ridges;
  for (int a = 0; a < static_cast<int>(facets.size()); ++a) {
    for (int b = a + 1; b < static_cast<int>(facets.size()); ++b) {
      auto common = detail::sorted_intersection(facets[static_cast<std::size_t>(a)].vertex_ids,
                                                facets[static_cast<std::size_t>(b)].vertex_ids);
      if (static_cast<int>(common.size()) < dim - 1) continue;
      std::vector<Vector> cp;
      for (int id : common) cp.push_back(verts[static_cast<std::size_t>(id)]);
      if (affine_rank(cp, tol) == dim - 2) ridges.push_back(Ridge{std::move(common), {a, b}});
    }
  }

  result.polytope = Polytope(dim, std::move(verts), std::move(facets), std::move(ridges));
  result.vertex_of_point.resize(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) result.vertex_of_point[i] = new_id[static_cast<std::size_t>(rep[i])];
  return result;
}

inline Polytope convex_hull(std::span<const Vector> points, int dim) {
  return convex_hull_with_map(points, dim).polytope;
}

inline Polytope convex_hull(const std::vector<Vector>& points, int dim) {
  return convex_hull_with_map(std::span<const Vector>(points), dim).polytope;
}

/// True iff the two facets meet in a ridge.
inline bool adjacency(const Polytope& p, int facet_a, int facet_b) {
  if (facet_a < 0 || facet_b < 0 || facet_a >= p.num_facets() || facet_b >= p.num_facets())
    throw std::out_of_range("facet index out of range");
  if (facet_a == facet_b) return false;
  const auto common = detail::sorted_intersection(p.facet(facet_a).vertex_ids, p.facet(facet_b).vertex_ids);
  if (common.empty()) return false;
  return affine_rank(p.points(common), p.tolerance()) == p.dim() - 2;
}

inline bool is_simplicial_vertex(const Polytope& p, int vertex_id) {
  if (vertex_id < 0 || vertex_id >= p.num_vertices()) throw std::out_of_range("vertex index out of range");
  for (int f : p.facets_of_vertex(vertex_id)) {
    const auto& ids = p.facet(f).vertex_ids;
    if (static_cast<int>(ids.size()) != p.dim()) return false;
    if (affine_rank(p.points(ids), p.tolerance()) != p.dim() - 1) return false;
  }
  return true;
}

/// Vertex centroid c if the vertex set is invariant under x ↦ 2c − x.
inline std::optional<Vector> symmetry_center(const Polytope& p) {
  Vector c = Vector::Zero(p.dim());
  for (const auto& v : p.vertices()) c += v;
  c /= static_cast<double>(p.num_vertices());
  for (const auto& v : p.vertices())
    if (!p.find_vertex(2.0 * c - v, 10.0 * p.tolerance())) return std::nullopt;
  return c;
}

/// Image under an invertible affine map; the facet lattice is carried over.
inline Polytope affine_image(const Polytope& p, const AffineMap& map) {
  std::vector<Vector> verts;
  verts.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) verts.push_back(map(v));
  const Matrix inv_t = map.linear.inverse().transpose();
  std::vector<Facet> facets;
  for (const auto& f : p.facets()) {
    Vector u = inv_t * f.normal;
    u.normalize();
    const double b = u.dot(verts[static_cast<std::size_t>(f.vertex_ids.front())]);
    facets.push_back(Facet{f.vertex_ids, u, b});
  }
  return Polytope(p.dim(), std::move(verts), std::move(facets), p.ridges());
}

/// Orthonormal chart of a facet's affine hull together with the facet as a
/// polytope in dimension n−1 (vertex i of `local` is facet vertex ids[i]).
struct FacetChart {
  Vector origin;
  Matrix basis;  // n × (n−1), orthonormal columns
  std::vector<int> ids;
  Polytope local;

  Vector to_local(const Vector& x) const { return basis.transpose() * (x - origin); }
  Vector to_global(const Vector& y) const { return origin + basis * y; }
};

inline FacetChart facet_chart(const Polytope& p, int facet_id) {
  const Facet& f = p.facet(facet_id);
  FacetChart chart;
  chart.origin = p.vertex(f.vertex_ids.front());
  chart.basis = orthogonal_complement(f.normal);
  std::vector<Vector> local;
  for (int id : f.vertex_ids) local.push_back(chart.to_local(p.vertex(id)));
  auto hull = convex_hull_with_map(local, p.dim() - 1);
  // facet vertices are vertices of P, hence extreme in the facet; keep hull order
  std::vector<int> ids(static_cast<std::size_t>(hull.polytope.num_vertices()), -1);
  for (std::size_t k = 0; k < f.vertex_ids.size(); ++k) {
    const int v = hull.vertex_of_point[k];
    if (v >= 0) ids[static_cast<std::size_t>(v)] = f.vertex_ids[k];
  }
  chart.ids = std::move(ids);
  chart.local = std::move(hull.polytope);
  return chart;
}

inline std::vector<Simplex> triangulate_facet(const Polytope& p, int facet_id);

/// Cone from the first vertex over the triangulated facets that avoid it.
inline std::vector<Simplex> triangulate_body(const Polytope& p) {
  const int n = p.dim();
  std::vector<Simplex> out;
  if (n == 1) {
    Simplex s;
    s.vertices.resize(1, 2);
    s.vertices.col(0) = p.vertex(0);
    s.vertices.col(1) = p.vertex(1);
    s.vertex_ids = {0, 1};
    out.push_back(std::move(s));
    return out;
  }
  const int apex = 0;
  for (int f = 0; f < p.num_facets(); ++f) {
    if (p.facet_contains(f, apex)) continue;
    for (auto& base : triangulate_facet(p, f)) {
      Simplex s;
      s.vertices.resize(n, n + 1);
      s.vertices.col(0) = p.vertex(apex);
      s.vertices.rightCols(n) = base.vertices;
      s.vertex_ids.push_back(apex);
      s.vertex_ids.insert(s.vertex_ids.end(), base.vertex_ids.begin(), base.vertex_ids.end());
      out.push_back(std::move(s));
    }
  }
  return out;
}

/// (n−1)-simplices partitioning a facet, with coordinates in R^n.
inline std::vector<Simplex> triangulate_facet(const Polytope& p, int facet_id) {
  const Facet& f = p.facet(facet_id);
  const int n = p.dim();
  std::vector<Simplex> out;
  if (n == 1) {
    Simplex s;
    s.vertices = p.vertex(f.vertex_ids.front());
    s.vertex_ids = {f.vertex_ids.front()};
    out.push_back(std::move(s));
    return out;
  }
  if (static_cast<int>(f.vertex_ids.size()) == n) {
    Simplex s;
    s.vertices.resize(n, n);
    for (int k = 0; k < n; ++k) s.vertices.col(k) = p.vertex(f.vertex_ids[static_cast<std::size_t>(k)]);
    s.vertex_ids = f.vertex_ids;
    out.push_back(std::move(s));
    return out;
  }
  const FacetChart chart = facet_chart(p, facet_id);
  for (const auto& local : triangulate_body(chart.local)) {
    Simplex s;
    s.vertices.resize(n, local.order() + 1);
    for (int k = 0; k <= local.order(); ++k) {
      const int id = chart.ids[static_cast<std::size_t>(local.vertex_ids[static_cast<std::size_t>(k)])];
      s.vertex_ids.push_back(id);
      s.vertices.col(k) = p.vertex(id);
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Volume via the divergence theorem, Σ_F b_F · area(F) / n. Independent of triangulate_body.
inline double divergence_volume(const Polytope& p) {
  double vol = 0.0;
  for (int f = 0; f < p.num_facets(); ++f) {
    double area = 0.0;
    for (const auto& s : triangulate_facet(p, f)) area += s.measure();
    vol += p.facet(f).offset * area;
  }
  return vol / p.dim();
}

}  // namespace isoconst
