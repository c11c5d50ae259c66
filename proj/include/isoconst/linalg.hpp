#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "isoconst/errors.hpp"

namespace isoconst {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// x ↦ linear·x + shift.
struct AffineMap {
  Matrix linear;
  Vector shift;

  static AffineMap identity(int n) { return {Matrix::Identity(n, n), Vector::Zero(n)}; }

  Vector operator()(const Vector& x) const { return linear * x + shift; }

  // (*this) ∘ inner
  AffineMap after(const AffineMap& inner) const {
    return {linear * inner.linear, linear * inner.shift + shift};
  }

  AffineMap inverse() const {
    Matrix inv = linear.inverse();
    return {inv, -inv * shift};
  }
};

inline double max_abs_coordinate(std::span<const Vector> points) {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.cwiseAbs().maxCoeff());
  return m;
}

/// Single geometric tolerance used for incidence decisions: 1e-9·(1 + max |coordinate|).
inline double geometric_tolerance(std::span<const Vector> points) {
  return 1e-9 * (1.0 + max_abs_coordinate(points));
}

/// Dimension of the affine hull of `points` (-1 for the empty set).
inline int affine_rank(std::span<const Vector> points, double tol) {
  if (points.empty()) return -1;
  if (points.size() == 1) return 0;
  const auto n = points.front().size();
  Matrix diffs(n, static_cast<Eigen::Index>(points.size() - 1));
  for (std::size_t i = 1; i < points.size(); ++i) diffs.col(static_cast<Eigen::Index>(i - 1)) = points[i] - points[0];
  Eigen::JacobiSVD<Matrix> svd(diffs);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return rank;
}

/// Orthonormal basis (columns) of the orthogonal complement of span(cols).
inline Matrix orthogonal_complement(const Matrix& cols) {
  const auto n = cols.rows();
  if (cols.cols() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeFullU);
  const double tol = 1e-12 * std::max(1.0, svd.singularValues()(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return svd.matrixU().rightCols(n - rank);
}

/// k-dimensional measure of the simplex whose vertices are the columns of `vertices` (k+1 columns).
inline double simplex_measure(const Matrix& vertices) {
  const auto k = vertices.cols() - 1;
  if (k == 0) return 1.0;
  Matrix d = vertices.rightCols(k).colwise() - vertices.col(0);
  const double gram = (d.transpose() * d).determinant();
  double fact = 1.0;
  for (Eigen::Index i = 2; i <= k; ++i) fact *= static_cast<double>(i);
  return std::sqrt(std::max(gram, 0.0)) / fact;
}

/// Symmetric inverse square root of an SPD matrix via eigendecomposition.
inline Matrix inverse_sqrt_spd(const Matrix& a, double* condition = nullptr) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  Vector ev = es.eigenvalues();
  const double max_ev = ev.maxCoeff();
  const double floor = 1e-14 * max_ev;
  if (condition) *condition = ev.minCoeff() > 0.0 ? max_ev / ev.minCoeff() : INFINITY;
  Vector inv_sqrt = ev.unaryExpr([floor](double x) { return 1.0 / std::sqrt(std::max(x, floor)); });
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace isoconst
