#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "isoconst/bodies.hpp"
#include "isoconst/geometry.hpp"

namespace testing_support {

using isoconst::Matrix;
using isoconst::Polytope;
using isoconst::Vector;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Vector gaussian_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

/// Hull of `count` Gaussian points; redrawn until full-dimensional.
inline Polytope random_body(std::mt19937_64& rng, int n, int count) {
  for (;;) {
    std::vector<Vector> pts;
    for (int k = 0; k < count; ++k) pts.push_back(gaussian_vector(rng, n));
    try {
      return isoconst::convex_hull(pts, n);
    } catch (const isoconst::GeometryError&) {
    }
  }
}

/// Affine map with a well-conditioned random linear part.
inline isoconst::AffineMap random_affine(std::mt19937_64& rng, int n) {
  for (;;) {
    Matrix a(n, n);
    for (int j = 0; j < n; ++j) a.col(j) = gaussian_vector(rng, n);
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    if (s(n - 1) > 0.2 && s(0) / s(n - 1) < 20.0) return {a, gaussian_vector(rng, n)};
  }
}

inline Matrix random_rotation(std::mt19937_64& rng, int n) {
  Matrix a(n, n);
  for (int j = 0; j < n; ++j) a.col(j) = gaussian_vector(rng, n);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

// Polygon moments from Green's theorem on the counterclockwise boundary; shares no
// code with the triangulation-based engine.
struct PolygonMoments {
  double area = 0.0;
  Vector mean;
  Matrix covariance;
};

inline PolygonMoments green_moments(std::vector<Vector> ring) {
  Vector c = Vector::Zero(2);
  for (const auto& v : ring) c += v;
  c /= static_cast<double>(ring.size());
  std::sort(ring.begin(), ring.end(), [&](const Vector& a, const Vector& b) {
    return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
  });
  double a = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const double x0 = ring[i](0), y0 = ring[i](1);
    const double x1 = ring[(i + 1) % ring.size()](0), y1 = ring[(i + 1) % ring.size()](1);
    const double cr = x0 * y1 - x1 * y0;
    a += cr / 2.0;
    sx += (x0 + x1) * cr / 6.0;
    sy += (y0 + y1) * cr / 6.0;
    sxx += (x0 * x0 + x0 * x1 + x1 * x1) * cr / 12.0;
    syy += (y0 * y0 + y0 * y1 + y1 * y1) * cr / 12.0;
    sxy += (x0 * y1 + 2.0 * x0 * y0 + 2.0 * x1 * y1 + x1 * y0) * cr / 24.0;
  }
  PolygonMoments m;
  m.area = a;
  m.mean = vec({sx / a, sy / a});
  m.covariance.resize(2, 2);
  m.covariance(0, 0) = sxx / a - m.mean(0) * m.mean(0);
  m.covariance(1, 1) = syy / a - m.mean(1) * m.mean(1);
  m.covariance(0, 1) = m.covariance(1, 0) = sxy / a - m.mean(0) * m.mean(1);
  return m;
}

/// Running mean with standard error per component.
struct Estimate {
  std::vector<double> sum, sum_sq;
  std::size_t count = 0;

  explicit Estimate(std::size_t k) : sum(k, 0.0), sum_sq(k, 0.0) {}
  void add(const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum[i] += x[i];
      sum_sq[i] += x[i] * x[i];
    }
    ++count;
  }
  double mean(std::size_t i) const { return sum[i] / static_cast<double>(count); }
  double standard_error(std::size_t i) const {
    const double m = mean(i);
    const double var = std::max(0.0, sum_sq[i] / static_cast<double>(count) - m * m);
    return std::sqrt(var / static_cast<double>(count));
  }
};

inline bool inside(const Polytope& p, const Vector& x) {
  for (const auto& f : p.facets())
    if (f.normal.dot(x) > f.offset) return false;
  return true;
}

// Features sampled per point: x_i, then x_i x_j (i ≤ j), then ‖x‖² x_i.
inline std::vector<double> features(const Vector& x) {
  std::vector<double> out;
  const auto n = x.size();
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(x(i));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) out.push_back(x(i) * x(j));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(x.squaredNorm() * x(i));
  return out;
}

struct MonteCarlo {
  double measure = 0.0;
  double measure_se = 0.0;
  Estimate features{0};
};

/// Rejection sampling from the bounding box of a body.
inline MonteCarlo sample_body(const Polytope& p, std::mt19937_64& rng, std::size_t draws) {
  const int n = p.dim();
  Vector lo = p.vertex(0), hi = p.vertex(0);
  for (const auto& v : p.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MonteCarlo mc;
  mc.features = Estimate(features(Vector::Zero(n)).size());
  Vector x(n);
  for (std::size_t s = 0; s < draws; ++s) {
    for (int i = 0; i < n; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
    if (inside(p, x)) mc.features.add(features(x));
  }
  const double box = (hi - lo).prod();
  const double frac = static_cast<double>(mc.features.count) / static_cast<double>(draws);
  mc.measure = box * frac;
  mc.measure_se = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(draws));
  return mc;
}

/// Rejection sampling on a facet: uniform in the bounding box of the facet chart.
inline MonteCarlo sample_facet(const Polytope& p, int facet_id, std::mt19937_64& rng, std::size_t draws) {
  const auto chart = isoconst::facet_chart(p, facet_id);
  const Polytope& local = chart.local;
  const int k = local.dim();
  Vector lo = local.vertex(0), hi = local.vertex(0);
  for (const auto& v : local.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MonteCarlo mc;
  mc.features = Estimate(features(Vector::Zero(p.dim())).size());
  Vector y(k);
  for (std::size_t s = 0; s < draws; ++s) {
    for (int i = 0; i < k; ++i) y(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
    if (inside(local, y)) mc.features.add(features(chart.to_global(y)));
  }
  const double box = (hi - lo).prod();
  const double frac = static_cast<double>(mc.features.count) / static_cast<double>(draws);
  mc.measure = box * frac;
  mc.measure_se = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(draws));
  return mc;
}

/// Exact values of the sampled features from first, second and radial-cubic moments.
inline std::vector<double> exact_features(const Vector& mean, const Matrix& second, const Vector& cubic_radial) {
  std::vector<double> out;
  const auto n = mean.size();
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(mean(i));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) out.push_back(second(i, j));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(cubic_radial(i));
  return out;
}

/// Q_2 = C_2 + [−(1,1), (1,1)]: area 12, covariance [[10/9, 5/9], [5/9, 10/9]].
inline std::vector<Vector> hexagon_vertices() {
  return {vec({2, 2}), vec({0, 2}), vec({-2, 0}), vec({-2, -2}), vec({0, -2}), vec({2, 0})};
}

inline double hexagon_L() { return std::pow(25.0 / 3888.0, 0.25); }

}  // namespace testing_support
