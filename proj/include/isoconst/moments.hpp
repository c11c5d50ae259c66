#pragma once

// Exact moments of the uniform distribution on polytopes and their facets.
//
// For X = Σ_a λ_a v_a uniform on a k-simplex, the barycentric weights λ are flat
// Dirichlet and
//     E[∏ λ_a^{m_a}] = k! ∏ m_a! / (k + Σ m_a)!,
// so every monomial moment up to order three is a finite sum over vertex tuples.
// Body and facet moments are measure-weighted sums over a triangulation.

#include <array>
#include <span>
#include <vector>

#include "isoconst/geometry.hpp"

namespace isoconst {

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

/// E[∏ λ_a^{m_a}] for flat Dirichlet weights on k+1 vertices.
inline double dirichlet_moment(int k, std::span<const int> multiplicities) {
  int total = 0;
  double num = detail::factorial(k);
  for (int m : multiplicities) {
    total += m;
    num *= detail::factorial(m);
  }
  return num / detail::factorial(k + total);
}

/// Dense symmetric n×n×n tensor with T(i,j,k) = E[X_i X_j X_k].
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  Tensor3& operator+=(const Tensor3& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  /// Contraction with the last index against w: M_ij = Σ_k T_ijk w_k.
  Matrix contract(const Vector& w) const {
    Matrix m = Matrix::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) m(i, j) += (*this)(i, j, k) * w(k);
    return m;
  }

  /// Tensor in rotated coordinates x' = R x.
  Tensor3 rotated(const Matrix& r) const {
    Tensor3 a(n_), b(n_), c(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int p = 0; p < n_; ++p) a(p, j, k) += r(p, i) * (*this)(i, j, k);
    for (int p = 0; p < n_; ++p)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int q = 0; q < n_; ++q) b(p, q, k) += r(q, j) * a(p, j, k);
    for (int p = 0; p < n_; ++p)
      for (int q = 0; q < n_; ++q)
        for (int k = 0; k < n_; ++k)
          for (int s = 0; s < n_; ++s) c(p, q, s) += r(s, k) * b(p, q, k);
    return c;
  }

 private:
  std::size_t index(int i, int j, int k) const { return static_cast<std::size_t>((i * n_ + j) * n_ + k); }

  int n_ = 0;
  std::vector<double> data_;
};

/// Average of ∏ X_i^{alpha_i} over the uniform distribution on the simplex; |alpha| ≤ 3.
inline double simplex_monomial_moment(const Simplex& s, std::span<const int> alpha) {
  const int k = s.order();
  const auto n = s.vertices.rows();
  if (static_cast<Eigen::Index>(alpha.size()) != n) throw std::invalid_argument("multi-index has wrong length");
  std::vector<int> coords;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int r = 0; r < alpha[i]; ++r) coords.push_back(static_cast<int>(i));
  if (coords.size() > 3) throw std::invalid_argument("moments above order three are not supported");
  if (k > 0 && s.measure() <= 1e-14 * std::pow(1.0 + s.vertices.cwiseAbs().maxCoeff(), k))
    throw GeometryError(ErrorKind::DegenerateSimplex, "simplex has zero measure");
  const int d = static_cast<int>(coords.size());
  if (d == 0) return 1.0;

  // sum over ordered vertex tuples (a_1..a_d) of Π v_{a_r}[coords_r] · E[Π λ_{a_r}]
  const int verts = k + 1;
  std::vector<int> tuple(static_cast<std::size_t>(d), 0);
  double total = 0.0;
  while (true) {
    std::vector<int> mult(static_cast<std::size_t>(verts), 0);
    double prod = 1.0;
    for (int r = 0; r < d; ++r) {
      ++mult[static_cast<std::size_t>(tuple[static_cast<std::size_t>(r)])];
      prod *= s.vertices(coords[static_cast<std::size_t>(r)], tuple[static_cast<std::size_t>(r)]);
    }
    total += prod * dirichlet_moment(k, mult);
    int pos = 0;
    while (pos < d && ++tuple[static_cast<std::size_t>(pos)] == verts) tuple[static_cast<std::size_t>(pos++)] = 0;
    if (pos == d) break;
  }
  return total;
}

namespace detail {

// Raw (non-central) moments of one simplex up to the requested order.
struct SimplexRaw {
  double measure = 0.0;
  Vector mean;
  Matrix second;
  Tensor3 third;
};

inline SimplexRaw simplex_raw_moments(const Matrix& verts, bool with_third) {
  const auto n = static_cast<int>(verts.rows());
  const int k = static_cast<int>(verts.cols()) - 1;
  SimplexRaw out;
  out.measure = simplex_measure(verts);
  const Vector sum = verts.rowwise().sum();
  out.mean = sum / (k + 1);
  // E[XX^T] = (s s^T + Σ v v^T) / ((k+1)(k+2))
  out.second = (sum * sum.transpose() + verts * verts.transpose()) / ((k + 1.0) * (k + 2.0));
  if (with_third) {
    // weights k!·Π m!/(k+3)! over ordered vertex triples
    out.third = Tensor3(n);
    const double base = dirichlet_moment(k, std::array<int, 3>{1, 1, 1});
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b)
        for (int c = 0; c <= k; ++c) {
          double w = base;
          if (a == b && b == c) w *= 6.0;
          else if (a == b || b == c || a == c) w *= 2.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const double vij = verts(i, a) * verts(j, b) * w;
              for (int l = 0; l < n; ++l) out.third(i, j, l) += vij * verts(l, c);
            }
        }
  }
  return out;
}

}  // namespace detail

struct BodyMoments {
  double volume = 0.0;
  Vector mean;        // E[X]
  Matrix second;      // E[XX^T]
  Matrix covariance;  // E[XX^T] − E[X]E[X]^T
};

struct FacetMoments {
  double area = 0.0;    // (n−1)-measure
  Vector mean;          // E[X]
  Matrix second;        // E[XX^T]
  Vector cubic_radial;  // E[‖X‖² X]
  Tensor3 third;        // E[X_i X_j X_k]
};

/// Moments of the uniform distribution on a full-dimensional polytope.
inline BodyMoments body_moments(const Polytope& p) {
  const int n = p.dim();
  // work relative to the vertex centroid; covariance is translation invariant
  Vector ref = Vector::Zero(n);
  for (const auto& v : p.vertices()) ref += v;
  ref /= p.num_vertices();

  double volume = 0.0;
  Vector m1 = Vector::Zero(n);
  Matrix m2 = Matrix::Zero(n, n);
  for (const auto& s : triangulate_body(p)) {
    Matrix shifted = s.vertices.colwise() - ref;
    auto raw = detail::simplex_raw_moments(shifted, false);
    volume += raw.measure;
    m1 += raw.measure * raw.mean;
    m2 += raw.measure * raw.second;
  }
  m1 /= volume;
  m2 /= volume;
  BodyMoments out;
  out.volume = volume;
  out.covariance = m2 - m1 * m1.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  out.mean = m1 + ref;
  out.second = out.covariance + out.mean * out.mean.transpose();
  return out;
}

/// Moments of the uniform distribution on one facet, with the surface measure.
inline FacetMoments facet_moments(const Polytope& p, int facet_id) {
  const int n = p.dim();
  FacetMoments out;
  out.mean = Vector::Zero(n);
  out.second = Matrix::Zero(n, n);
  out.third = Tensor3(n);
  for (const auto& s : triangulate_facet(p, facet_id)) {
    auto raw = detail::simplex_raw_moments(s.vertices, true);
    out.area += raw.measure;
    out.mean += raw.measure * raw.mean;
    out.second += raw.measure * raw.second;
    raw.third *= raw.measure;
    out.third += raw.third;
  }
  out.mean /= out.area;
  out.second /= out.area;
  out.third *= 1.0 / out.area;
  out.cubic_radial = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.cubic_radial(i) += out.third(i, j, j);
  return out;
}

}  // namespace isoconst
