// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "isoconst/criticality.hpp"
#include "isoconst/movements.hpp"
#include "isoconst/zonotopes.hpp"
#include "support.hpp"

using namespace isoconst;
using testing_support::vec;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d  %-24s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const double kCube = 1.0 / std::sqrt(12.0);

Polytope isotropic_cube(int n) { return bodies::cube(n, std::sqrt(3.0)); }
Polytope isotropic_simplex(int n) { return bodies::regular_simplex(n, std::sqrt(n * (n + 2.0))); }
Polytope isotropic_cross(int n) { return bodies::cross_polytope(n, std::sqrt((n + 1.0) * (n + 2.0) / 2.0)); }

double max_defect(const Polytope& p) {
  double m = 0.0;
  for (const auto& d : facet_defects(p)) m = std::max(m, d.norm);
  return m;
}

void closed_form_constants() {
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) worst = std::max(worst, std::abs(isotropic_constant(bodies::cube(n)).L - kCube));
  for (int n = 2; n <= 4; ++n) {
    worst = std::max(worst, std::abs(isotropic_constant(bodies::regular_simplex(n)).L -
                                     reference_constant(ReferenceFamily::Simplex, n)));
    worst = std::max(worst, std::abs(isotropic_constant(bodies::cross_polytope(n)).L -
                                     reference_constant(ReferenceFamily::CrossPolytope, n)));
  }
  report(1, "closed-form constants", worst <= 1e-10, fmt("max |dL| = %.3e (tol 1e-10)", worst));
}

void prism_identity(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto base = testing_support::random_body(rng, 2, 8);
    const auto r = prism_check(base, 0.5 + k);
    worst = std::max(worst, std::abs(std::pow(r.measured, 3) - std::pow(r.predicted, 3)));
  }
  report(2, "prism identity", worst <= 1e-9, fmt("max |L^n - L_base^(n-1)/sqrt(12)| = %.3e (tol 1e-9)", worst));
}

void affine_invariance(std::mt19937_64& rng) {
  const std::vector<Polytope> test_bodies = {bodies::cube(3),           bodies::standard_simplex(3),
                                             bodies::cross_polytope(3), bodies::q_body(3),
                                             testing_support::random_body(rng, 2, 9),
                                             testing_support::random_body(rng, 4, 14)};
  double worst = 0.0;
  for (const auto& p : test_bodies) {
    const double l = isotropic_constant(p).L;
    for (int k = 0; k < 20; ++k)
      worst = std::max(worst, std::abs(isotropic_constant(affine_image(p, testing_support::random_affine(rng, p.dim()))).L - l));
  }
  report(3, "affine invariance", worst <= 1e-9, fmt("6 bodies x 20 images, max |dL| = %.3e (tol 1e-9)", worst));
}

void criticality() {
  double reference = 0.0;
  for (int n = 2; n <= 4; ++n) {
    reference = std::max(reference, max_defect(isotropic_cube(n)));
    reference = std::max(reference, max_defect(isotropic_simplex(n)));
  }
  for (int n = 2; n <= 3; ++n) reference = std::max(reference, max_defect(isotropic_cross(n)));
  const auto triangle = isotropize(convex_hull(std::vector<Vector>{vec({0, 0}), vec({3, 0}), vec({0, 4})}, 2)).first;
  const double t345 = max_defect(triangle);
  const auto trapezoid =
      isotropize(convex_hull(std::vector<Vector>{vec({0, 0}), vec({4, 0}), vec({3, 1}), vec({1, 1})}, 2)).first;
  const bool ok = reference <= 1e-8 && t345 > 1e-3;
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "reference bodies max |defect| = %.3e (tol 1e-8); isotropized 3-4-5 triangle max |defect| = %.3e "
                "(required > 1e-3; every isotropic triangle is a rotated regular one); trapezoid %.3e",
                reference, t345, max_defect(trapezoid));
  report(4, "criticality", ok, buf);
}

void m_matrix() {
  double min_eig = std::numeric_limits<double>::infinity();
  int count = 0;
  std::vector<Polytope> test_bodies;
  for (int n = 2; n <= 4; ++n) {
    test_bodies.push_back(isotropic_cube(n));
    test_bodies.push_back(isotropic_simplex(n));
  }
  for (int n = 2; n <= 3; ++n) test_bodies.push_back(isotropic_cross(n));
  for (const auto& p : test_bodies)
    for (int g = 0; g < p.num_ridges(); ++g)
      for (int f : p.ridge(g).facets) {
        const Matrix m = third_moment_matrix(p, f, g);
        min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff());
        ++count;
      }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d facet/ridge frames, min eigenvalue = %.6g", count, min_eig);
  report(5, "third-moment matrix", min_eig > 0.0, buf);
}

void reflectors(std::mt19937_64& rng) {
  int checked = 0, euclidean = 0;
  for (const auto& p : {isotropic_simplex(2), isotropic_simplex(3), isotropic_simplex(4), isotropic_cube(2),
                        isotropic_cube(3), isotropic_cube(4)})
    for (int g = 0; g < p.num_ridges(); ++g) {
      ++checked;
      const auto r = find_affine_reflector(p, g);
      if (r.is_affine && r.is_euclidean) ++euclidean;
    }
  auto pts = bodies::cross_polytope(3).vertices();
  for (auto& v : pts) v += 1e-2 * testing_support::gaussian_vector(rng, 3);
  const auto octa = isotropize(convex_hull(pts, 3)).first;
  int non_euclidean = 0;
  for (int g = 0; g < octa.num_ridges(); ++g)
    if (!find_affine_reflector(octa, g).is_euclidean) ++non_euclidean;
  char buf[200];
  std::snprintf(buf, sizeof buf, "regular ridges Euclidean %d/%d; perturbed octahedron non-Euclidean ridges %d/%d", euclidean,
                checked, non_euclidean, octa.num_ridges());
  report(6, "reflectors", euclidean == checked && non_euclidean > 0, buf);
}

void rs_scan() {
  const auto m = zonotope_move_field(vec({1, 1}), 0, 1);
  const int steps = 41;
  const auto s = scan(m.body, m.field, m.a, m.b, steps);
  double asym = 0.0;
  for (int k = 0; k < steps; ++k) asym = std::max(asym, std::abs(s.Ls[static_cast<std::size_t>(k)] - s.Ls[static_cast<std::size_t>(steps - 1 - k)]));
  const double endpoint = std::max(std::abs(s.Ls.front() - kCube), std::abs(s.Ls.back() - kCube));
  const bool all_valid = s.valid_begin == 0 && s.valid_end == steps;
  const bool ok = all_valid && s.convexity_certificate >= -1e-7 && s.convexity_certificate > 0.0 && endpoint <= 1e-9 &&
                  asym <= 1e-9;
  char buf[240];
  std::snprintf(buf, sizeof buf, "min 2nd diff = %.3e, endpoint |L - 1/sqrt(12)| = %.1e, asymmetry = %.1e, valid %d/%d",
                s.convexity_certificate, endpoint, asym, s.valid_end - s.valid_begin, steps);
  report(7, "RS-scan convexity", ok, buf);
}

void zonotope_extremals() {
  bool ok = true;
  std::string detail;
  for (const auto& [n, step] : {std::pair{2, 0.05}, std::pair{3, 0.1}}) {
    const auto r = extremal_search(n, step);
    bool axes = true;
    for (const auto& y : r.argmax) axes &= (y.array().abs() > 1e-12).count() <= 1;
    const double l_ones = L_of_y(Vector::Ones(n));
    bool lower = true;
    for (double l : r.Ls) lower &= l >= l_ones - 1e-9;
    const bool min_at_ones = r.argmin.size() == 1 && (r.argmin.front() - Vector::Ones(n)).norm() < 1e-12;
    ok &= std::abs(r.max_L - kCube) <= 1e-9 && axes && lower && min_at_ones;
    char buf[200];
    std::snprintf(buf, sizeof buf, "n=%d: max %.12f on %zu axis points, min %.12f at ones%s; ", n, r.max_L, r.argmax.size(),
                  r.min_L, min_at_ones ? "" : " (NOT)");
    detail += buf;
  }
  const double hex = std::abs(L_of_y(Vector::Ones(2)) - std::pow(25.0 / 3888.0, 0.25));
  ok &= hex <= 1e-9;
  detail += fmt("hexagon |dL| = %.1e", hex);
  report(8, "zonotope extremals", ok, detail);
}

void canonical_form(std::mt19937_64& rng) {
  double worst_l = 0.0, worst_y = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 2;
    std::vector<Vector> gens;
    for (int i = 0; i <= n; ++i) gens.push_back(testing_support::gaussian_vector(rng, n));
    const auto cf = canonicalize_n_plus_1(gens, Vector::Zero(n));
    const Zonotope z{n, Vector::Zero(n), gens};
    worst_l = std::max(worst_l, std::abs(isotropic_constant(to_polytope(z)).L - L_of_y(cf.y)));
    auto shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (auto& g : shuffled)
      if (rng() % 2) g = -g;
    worst_y = std::max(worst_y, (canonicalize_n_plus_1(shuffled, Vector::Zero(n)).y - cf.y).norm());
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "50 instances, max |dL| = %.2e, max |dy| under re-sign/permute = %.2e (tol 1e-9)", worst_l,
                worst_y);
  report(9, "canonical form", worst_l <= 1e-9 && worst_y <= 1e-9, buf);
}

void monte_carlo(std::mt19937_64& rng) {
  const std::size_t draws = 1000000;
  double worst = 0.0;  // in standard errors
  int compared = 0;
  for (int k = 0; k < 10; ++k) {
    const int n = 2 + k % 3;
    const auto p = testing_support::random_body(rng, n, 8 + 2 * n);
    const auto exact = body_moments(p);
    const auto mc = testing_support::sample_body(p, rng, draws);
    auto z = [&](double est, double ref, double se) {
      ++compared;
      const double s = std::abs(est - ref) / std::max(se, 1e-300);
      worst = std::max(worst, std::abs(est - ref) <= 1e-12 ? 0.0 : s);
    };
    z(mc.measure, exact.volume, mc.measure_se);
    const auto ref = testing_support::exact_features(exact.mean, exact.second, Vector::Zero(n));
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) < ref.size(); ++i)
      z(mc.features.mean(i), ref[i], mc.features.standard_error(i));

    const int facet = k % p.num_facets();
    const auto fm = facet_moments(p, facet);
    const auto fmc = testing_support::sample_facet(p, facet, rng, draws);
    z(fmc.measure, fm.area, fmc.measure_se);
    const auto fref = testing_support::exact_features(fm.mean, fm.second, fm.cubic_radial);
    for (std::size_t i = 0; i < fref.size(); ++i) z(fmc.features.mean(i), fref[i], fmc.features.standard_error(i));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "10 bodies, %d moments, 1e6 draws each, max deviation = %.2f standard errors (tol 5)", compared,
                worst);
  report(10, "Monte Carlo oracle", worst <= 5.0, buf);
}

}  // namespace

int main() {
  std::mt19937_64 rng(20240601);
  closed_form_constants();
  prism_identity(rng);
  affine_invariance(rng);
  criticality();
  m_matrix();
  reflectors(rng);
  rs_scan();
  zonotope_extremals();
  canonical_form(rng);
  monte_carlo(rng);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
