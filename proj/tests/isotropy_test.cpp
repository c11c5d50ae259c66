#include <gtest/gtest.h>

#include "isoconst/isotropy.hpp"
#include "support.hpp"

using namespace isoconst;
using testing_support::vec;

TEST(Constants, ClosedForms) {
  for (int n = 2; n <= 5; ++n) EXPECT_NEAR(isotropic_constant(bodies::cube(n)).L, 1.0 / std::sqrt(12.0), 1e-10);
  for (int n = 2; n <= 4; ++n) {
    EXPECT_NEAR(isotropic_constant(bodies::regular_simplex(n)).L, reference_constant(ReferenceFamily::Simplex, n), 1e-10);
    EXPECT_NEAR(isotropic_constant(bodies::standard_simplex(n)).L, reference_constant(ReferenceFamily::Simplex, n), 1e-10);
    EXPECT_NEAR(isotropic_constant(bodies::cross_polytope(n)).L, reference_constant(ReferenceFamily::CrossPolytope, n),
                1e-10);
  }
  EXPECT_NEAR(reference_constant(ReferenceFamily::Simplex, 2), std::sqrt(2.0) / (std::pow(3.0, 0.75) * 2.0), 1e-15);
  EXPECT_THROW(reference_constant(ReferenceFamily::Cube, 1), std::invalid_argument);
}

TEST(Constants, HexagonQ) {
  EXPECT_NEAR(reference_constant(ReferenceFamily::Q, 2), testing_support::hexagon_L(), 1e-12);
  EXPECT_NEAR(isotropic_constant(convex_hull(testing_support::hexagon_vertices(), 2)).L, testing_support::hexagon_L(),
              1e-12);
}

TEST(Constants, OrderingInSmallDimensions) {
  for (int n = 2; n <= 4; ++n) {
    EXPECT_LT(reference_constant(ReferenceFamily::Q, n), reference_constant(ReferenceFamily::Cube, n));
    EXPECT_LE(reference_constant(ReferenceFamily::CrossPolytope, n), reference_constant(ReferenceFamily::Cube, n) + 1e-15);
    EXPECT_GT(reference_constant(ReferenceFamily::Simplex, n), reference_constant(ReferenceFamily::Cube, n));
  }
}

TEST(Isotropize, ReachesIsotropicPosition) {
  std::mt19937_64 rng(31);
  for (int n = 2; n <= 4; ++n) {
    const auto p = testing_support::random_body(rng, n, 12);
    const auto [q, report] = isotropize(p);
    const auto m = body_moments(q);
    EXPECT_NEAR(m.mean.norm(), 0.0, 1e-10);
    EXPECT_NEAR((m.covariance - Matrix::Identity(n, n)).norm(), 0.0, 1e-9);
    EXPECT_NEAR(report.L, isotropic_constant(p).L, 1e-12);
    // in isotropic position L^{2n} = 1 / vol²
    EXPECT_NEAR(report.L, std::pow(m.volume, -1.0 / n), 1e-10);
    for (int i = 0; i < p.num_vertices(); ++i) EXPECT_NEAR((report.transform(p.vertex(i)) - q.vertex(i)).norm(), 0.0, 1e-12);
  }
}

TEST(Isotropize, NearSingularCovariance) {
  const auto thin = convex_hull(std::vector<Vector>{vec({0, 0}), vec({1, 0}), vec({1, 1e-7}), vec({0, 1e-7})}, 2);
  try {
    isotropize(thin);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NearSingularCovariance);
  }
}

TEST(Invariance, RandomAffineImages) {
  std::mt19937_64 rng(32);
  const std::vector<Polytope> bodies_under_test = {bodies::cube(3), bodies::standard_simplex(3), bodies::q_body(3),
                                                   testing_support::random_body(rng, 4, 14)};
  for (const auto& p : bodies_under_test) {
    const double l = isotropic_constant(p).L;
    for (int k = 0; k < 5; ++k)
      EXPECT_NEAR(isotropic_constant(affine_image(p, testing_support::random_affine(rng, p.dim()))).L, l, 1e-9);
  }
}

TEST(Prism, Identity) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const auto base = testing_support::random_body(rng, 2, 7);
    const auto r = prism_check(base, 0.3 + trial);
    EXPECT_NEAR(r.measured, r.predicted, 1e-9);
  }
  const auto r = prism_check(bodies::cube(3), 1.0);
  EXPECT_NEAR(r.measured, 1.0 / std::sqrt(12.0), 1e-12);
}
