#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include "isoconst/bodies.hpp"
#include "isoconst/moments.hpp"

namespace isoconst {

struct IsotropicReport {
  double L = 0.0;
  double volume = 0.0;
  double det_cov = 0.0;
  AffineMap transform;  // identity unless produced by isotropize()
};

/// L_K = (det A_K)^{1/(2n)} / (vol K)^{1/n}
inline IsotropicReport isotropic_constant(const Polytope& p) {
  const auto m = body_moments(p);
  const int n = p.dim();
  IsotropicReport r;
  r.volume = m.volume;
  r.det_cov = m.covariance.determinant();
  r.L = std::exp((std::log(r.det_cov) - 2.0 * std::log(r.volume)) / (2.0 * n));
  r.transform = AffineMap::identity(n);
  return r;
}

/// Moves p into isotropic position (mean 0, covariance I) via x ↦ A^{−1/2}(x − mean).
inline std::pair<Polytope, IsotropicReport> isotropize(const Polytope& p) {
  const auto m = body_moments(p);
  double condition = 0.0;
  const Matrix inv_sqrt = inverse_sqrt_spd(m.covariance, &condition);
  if (!(condition <= 1e12))
    throw GeometryError(ErrorKind::NearSingularCovariance,
                        "covariance condition number " + std::to_string(condition) + " exceeds 1e12");
  const AffineMap map{inv_sqrt, -inv_sqrt * m.mean};
  Polytope image = affine_image(p, map);
  IsotropicReport r = isotropic_constant(image);
  r.transform = map;
  return {std::move(image), r};
}

enum class ReferenceFamily { Simplex, Cube, CrossPolytope, Q };

inline std::string_view to_string(ReferenceFamily f) {
  switch (f) {
    case ReferenceFamily::Simplex: return "simplex";
    case ReferenceFamily::Cube: return "cube";
    case ReferenceFamily::CrossPolytope: return "cross_polytope";
    case ReferenceFamily::Q: return "Q";
  }
  return "unknown";
}

/// Closed-form L for simplex, cube and cross-polytope; Q_n is computed from its moments.
inline double reference_constant(ReferenceFamily family, int n) {
  if (n < 2) throw std::invalid_argument("reference constants need n >= 2");
  const double nn = n;
  const double root_fact = std::pow(detail::factorial(n), 1.0 / nn);
  switch (family) {
    case ReferenceFamily::Simplex:
      return root_fact / (std::pow(nn + 1.0, (nn + 1.0) / (2.0 * nn)) * std::sqrt(nn + 2.0));
    case ReferenceFamily::Cube:
      return 1.0 / std::sqrt(12.0);
    case ReferenceFamily::CrossPolytope:
      return root_fact / (std::sqrt(2.0) * std::sqrt(nn + 1.0) * std::sqrt(nn + 2.0));
    case ReferenceFamily::Q:
      return isotropic_constant(bodies::q_body(n)).L;
  }
  return 0.0;
}

struct PrismCheck {
  double measured = 0.0;
  double predicted = 0.0;
};

/// L of base × [−h, h] against (L_base^{n−1} / √12)^{1/n}.
inline PrismCheck prism_check(const Polytope& base, double half_height) {
  const int n = base.dim() + 1;
  PrismCheck out;
  out.measured = isotropic_constant(bodies::prism(base, half_height)).L;
  const double l_base = isotropic_constant(base).L;
  out.predicted = std::pow(std::pow(l_base, n - 1) / std::sqrt(12.0), 1.0 / n);
  return out;
}

}  // namespace isoconst
