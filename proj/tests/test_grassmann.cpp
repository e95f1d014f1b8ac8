#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gbk/cones.hpp"
#include "gbk/grassmann.hpp"
#include "support.hpp"

using namespace gbk;

namespace {

Matrix columns(int d, std::initializer_list<Vector> vs) {
  Matrix m(d, static_cast<Eigen::Index>(vs.size()));
  Eigen::Index c = 0;
  for (const Vector& v : vs) m.col(c++) = v;
  return m;
}

Vector e(int d, int i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

GrassmannPoint rotated_plane(double alpha) {
  return GrassmannPoint::from_basis(columns(4, {Vector(std::cos(alpha) * e(4, 0) + std::sin(alpha) * e(4, 2)), e(4, 1)}));
}

}  // namespace

TEST(FromBasis, StandardBasis) {
  const GrassmannPoint p = GrassmannPoint::from_basis(columns(5, {e(5, 0), e(5, 1), e(5, 2)}));
  EXPECT_NEAR((p.frame() - Matrix::Identity(5, 3)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(p.plucker().coefficient(MultiIndex::from({0, 1, 2}, 5)), 1.0, 1e-15);
}

TEST(FromBasis, ScaleInvariance) {
  const GrassmannPoint p = GrassmannPoint::from_basis(columns(4, {e(4, 0), e(4, 1)}));
  const GrassmannPoint q = GrassmannPoint::from_basis(columns(4, {Vector(2.0 * e(4, 0)), Vector(3.0 * e(4, 1))}));
  EXPECT_NEAR(distance(p, q), 0.0, 1e-12);
  EXPECT_NEAR(w_function(p, q), 1.0, 1e-15);
}

TEST(FromBasis, ProjectorOracle) {
  Rng rng(11);
  const Matrix v = random_gaussian(rng, 6, 3);
  const GrassmannPoint p = GrassmannPoint::from_basis(v);
  const Matrix proj = v * (v.transpose() * v).inverse() * v.transpose();
  EXPECT_NEAR((p.projector() - proj).norm(), 0.0, 1e-10);
  EXPECT_NEAR((p.frame().transpose() * p.frame() - Matrix::Identity(3, 3)).norm(), 0.0, 1e-10);
  EXPECT_NEAR(inner(p.plucker(), p.plucker()), 1.0, 1e-10);
  const Multivector raw = wedge(v);
  EXPECT_NEAR(inner(raw, p.plucker()), norm(raw), 1e-10);
}

TEST(FromBasis, Errors) {
  EXPECT_THROW(GrassmannPoint::from_basis(columns(3, {e(3, 0), e(3, 0)})), DegenerateInput);
  EXPECT_THROW(GrassmannPoint::from_basis(Matrix::Identity(3, 3)), InvalidInput);
  Matrix bad = Matrix::Identity(4, 2);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(GrassmannPoint::from_basis(bad), InvalidInput);
}

TEST(WFunction, Basics) {
  Rng rng(12);
  const GrassmannPoint p = random_point(rng, 3, 2);
  EXPECT_NEAR(w_function(p, p), 1.0, 1e-12);
  Matrix replaced = p.frame();
  replaced.col(1) = p.normal_frame().col(0);
  EXPECT_NEAR(w_function(p, GrassmannPoint::from_basis(replaced)), 0.0, 1e-12);
}

TEST(WFunction, OrientationReversalFlipsSign) {
  Rng rng(13);
  const GrassmannPoint p = random_point(rng, 2, 3);
  const GrassmannPoint q = random_point(rng, 2, 3);
  Matrix flipped = q.frame();
  flipped.col(0) *= -1.0;
  EXPECT_NEAR(w_function(p, GrassmannPoint::from_basis(flipped)), -w_function(p, q), 1e-12);
}

TEST(WFunction, LawsonOssermanTangentPlane) {
  const Vector x = (Vector(4) << 0.3, -0.7, 1.1, 0.4).finished();
  const GrassmannPoint t = gauss_map(lawson_osserman_graph(), x);
  EXPECT_NEAR(w_function(t, GrassmannPoint::coordinate_plane(4, 3)), 1.0 / 9.0, 1e-12);
}

TEST(JordanAngles, Identical) {
  Rng rng(14);
  const GrassmannPoint p = random_point(rng, 3, 3);
  for (double a : jordan_angles(p, p).angles) EXPECT_NEAR(a, 0.0, 1e-12);
}

TEST(JordanAngles, SingleRotation) {
  const double alpha = 0.37;
  const JordanData jd = jordan_angles(rotated_plane(alpha), GrassmannPoint::coordinate_plane(2, 2));
  ASSERT_EQ(jd.angles.size(), 2u);
  EXPECT_NEAR(jd.angles[0], alpha, 1e-14);
  EXPECT_NEAR(jd.angles[1], 0.0, 1e-14);
  EXPECT_NEAR(distance(rotated_plane(alpha), GrassmannPoint::coordinate_plane(2, 2)), alpha, 1e-14);
}

TEST(JordanAngles, TinyAnglesKeepPrecision) {
  const double alpha = 1e-9;
  EXPECT_NEAR(jordan_angles(rotated_plane(alpha), GrassmannPoint::coordinate_plane(2, 2)).angles[0], alpha, 1e-20);
}

TEST(JordanAngles, LawsonOssermanTangentPlane) {
  const Vector x = (Vector(4) << -1.2, 0.5, 0.9, 2.0).finished();
  const JordanData jd = jordan_angles(gauss_map(lawson_osserman_graph(), x), GrassmannPoint::coordinate_plane(4, 3));
  const double a = std::acos(std::sqrt(6.0) / 6.0);
  EXPECT_NEAR(jd.angles[0], a, 1e-10);
  EXPECT_NEAR(jd.angles[1], a, 1e-10);
  EXPECT_NEAR(jd.angles[2], std::acos(2.0 / 3.0), 1e-10);
  EXPECT_NEAR(jd.angles[3], 0.0, 1e-10);
}

TEST(JordanAngles, Invariants) {
  Rng rng(15);
  for (int s = 0; s < 50; ++s) {
    const GrassmannPoint p = random_point(rng, 3, 4);
    const GrassmannPoint q = random_point(rng, 3, 4);
    const JordanData jd = jordan_angles(p, q);
    double prod = 1.0;
    for (std::size_t i = 0; i < jd.angles.size(); ++i) {
      EXPECT_GE(jd.angles[i], 0.0);
      EXPECT_LE(jd.angles[i], std::numbers::pi / 2.0 + 1e-15);
      if (i > 0) EXPECT_GE(jd.angles[i - 1], jd.angles[i]);
      prod *= std::cos(jd.angles[i]);
    }
    EXPECT_NEAR(prod, std::abs(w_function(p, q)), 1e-8);
    const Matrix cross = jd.directions_P.transpose() * jd.directions_Q;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        EXPECT_NEAR(std::abs(cross(i, j)), i == j ? std::cos(jd.angles[i]) : 0.0, 1e-8);
  }
}

TEST(JordanAngles, AgreeWithBruteForce) {
  Rng rng(16);
  for (int s = 0; s < 20; ++s) {
    const GrassmannPoint p = random_point(rng, 2, 3);
    const GrassmannPoint q = random_point(rng, 2, 3);
    std::vector<double> svd = jordan_angles(p, q).angles;
    std::sort(svd.begin(), svd.end());
    const std::vector<double> brute = support::brute_force_angles(p.frame(), q.frame());
    for (std::size_t k = 0; k < svd.size(); ++k) EXPECT_NEAR(svd[k], brute[k], 1e-6);
  }
}

TEST(SOrthogonality, CoordinateExample) {
  const GrassmannPoint p = GrassmannPoint::coordinate_plane(3, 2, {0, 1, 2});
  const GrassmannPoint q = GrassmannPoint::coordinate_plane(3, 2, {3, 1, 2});
  EXPECT_TRUE(is_s_orthogonal(p, q));
  EXPECT_NEAR(distance(p, q), std::numbers::pi / 2.0, 1e-14);
  EXPECT_FALSE(is_s_orthogonal(p, p));
}

TEST(SOrthogonality, TwoRightAnglesRejected) {
  Rng rng(17);
  const Matrix r = support::random_rotation(rng, 6);
  const GrassmannPoint p = GrassmannPoint::from_basis(Matrix(r.leftCols(3)));
  Matrix qf = r.leftCols(3);
  qf.col(0) = r.col(3);
  qf.col(1) = r.col(4);
  const SOrthogonality rep = s_orthogonality(p, GrassmannPoint::from_basis(qf));
  EXPECT_FALSE(rep.s_orthogonal);
  EXPECT_EQ(rep.right_angles, 2);
  EXPECT_EQ(rep.intersection_dim, 1);
}

TEST(SOrthogonalPair, RejectsNonOrthogonal) {
  Rng rng(18);
  EXPECT_THROW(SOrthogonalPair(random_point(rng, 2, 2), random_point(rng, 2, 2)), PreconditionError);
}

TEST(Geodesic, EndpointsAndDistance) {
  Rng rng(19);
  const auto [p, q] = support::random_s_orthogonal_pair(rng, 3, 3);
  EXPECT_NEAR(distance(geodesic_Pt(p, q, 0.0), p), 0.0, 1e-7);
  EXPECT_NEAR(w_function(geodesic_Pt(p, q, 0.0), p), 1.0, 1e-12);
  EXPECT_NEAR(w_function(geodesic_Pt(p, q, std::numbers::pi / 2.0), q), 1.0, 1e-12);
  const SOrthogonalPair pair(p, q);
  EXPECT_NEAR(distance(pair.at(0.3), pair.at(0.7)), 0.4, 1e-10);
  for (double t = -1.5; t < 1.5; t += 0.1) EXPECT_NEAR(w_function(pair.at(t), p), std::cos(t), 1e-12);
}

TEST(SMap, GeodesicIsUnitCircle) {
  Rng rng(20);
  const auto [p, q] = support::random_s_orthogonal_pair(rng, 2, 3);
  const SOrthogonalPair pair(p, q);
  for (double t = -3.0; t < 3.1; t += 0.25) {
    const SMapValue x = s_map(pair.at(t), pair);
    EXPECT_NEAR(x.x1, std::cos(t), 1e-12);
    EXPECT_NEAR(x.x2, std::sin(t), 1e-12);
    const Polar pol = polar(x);
    EXPECT_NEAR(pol.r, 1.0, 1e-12);
    EXPECT_NEAR(pol.theta, t, 1e-12);
  }
}

TEST(SMap, VanishesOnPlanesOrthogonalToTheRotation) {
  const GrassmannPoint p = GrassmannPoint::coordinate_plane(2, 3, {0, 1});
  const GrassmannPoint q = GrassmannPoint::coordinate_plane(2, 3, {2, 1});
  const GrassmannPoint s = GrassmannPoint::coordinate_plane(2, 3, {3, 1});
  const SMapValue x = s_map(s, p, q);
  EXPECT_NEAR(x.x1, 0.0, 1e-15);
  EXPECT_NEAR(x.x2, 0.0, 1e-15);
}

TEST(SMap, InsideDiskOffGeodesic) {
  Rng rng(21);
  const auto [p, q] = support::random_s_orthogonal_pair(rng, 2, 2);
  for (int s = 0; s < 100; ++s) {
    const SMapValue x = s_map(random_point(rng, 2, 2), p, q);
    EXPECT_LT(x.x1 * x.x1 + x.x2 * x.x2, 1.0);
  }
}

TEST(Polar, Conversion) {
  const Polar pol = polar(SMapValue{0.3, 0.4});
  EXPECT_NEAR(pol.r, 0.5, 1e-15);
  EXPECT_NEAR(pol.theta, std::atan2(0.4, 0.3), 1e-15);
  EXPECT_THROW(polar(SMapValue{-0.5, 0.0}), DomainError);
}

TEST(MatrixChart, CenterAndSingleRotation) {
  const GrassmannPoint c = GrassmannPoint::coordinate_plane(2, 2);
  EXPECT_NEAR(matrix_chart(c, c).Z.norm(), 0.0, 1e-15);
  const double alpha = 0.6;
  const Matrix z = matrix_chart(rotated_plane(alpha), c).Z;
  EXPECT_NEAR(z(0, 0), std::tan(alpha), 1e-14);
  EXPECT_NEAR(z(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(z(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(z(1, 1), 0.0, 1e-15);
}

TEST(MatrixChart, RoundTripAndW) {
  Rng rng(22);
  for (int s = 0; s < 30; ++s) {
    const GrassmannPoint c = random_point(rng, 3, 2);
    const GrassmannPoint p = random_point(rng, 3, 2);
    if (w_function(p, c) < 0.05) continue;
    const MatrixChart chart = matrix_chart(p, c);
    EXPECT_NEAR(distance(chart.point(), p), 0.0, 1e-7);
    EXPECT_NEAR(chart.w(), w_function(p, c), 1e-10);
  }
  Matrix flipped = GrassmannPoint::coordinate_plane(2, 2).frame();
  flipped.col(0) *= -1.0;
  EXPECT_THROW(matrix_chart(GrassmannPoint::from_basis(flipped), GrassmannPoint::coordinate_plane(2, 2)), DomainError);
}

TEST(ChartMetric, Eigenvalues) {
  for (double v : chart_metric_eigen(Matrix::Zero(2, 3))) EXPECT_DOUBLE_EQ(v, 1.0);
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  const std::vector<double> ev = chart_metric_eigen(z);
  const std::vector<double> expected = {1.0, 2.0, 2.0, 4.0};
  ASSERT_EQ(ev.size(), expected.size());
  for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_NEAR(ev[i], expected[i], 1e-14);
}

TEST(ChartMetric, BoundedByInverseFourthPowerOfW) {
  Rng rng(23);
  for (int s = 0; s < 50; ++s) {
    const Matrix z = random_gaussian(rng, 2, 3);
    const double w = 1.0 / std::sqrt((Matrix::Identity(2, 2) + z * z.transpose()).determinant());
    EXPECT_LE(chart_metric_eigen(z).back(), std::pow(w, -4.0) * (1.0 + 1e-12));
    Eigen::SelfAdjointEigenSolver<Matrix> es(chart_inverse_metric(z));
    EXPECT_NEAR(es.eigenvalues().maxCoeff(), chart_metric_eigen(z).back(), 1e-9 * chart_metric_eigen(z).back());
  }
}

TEST(NormalComplement, BasisInR3) {
  const GrassmannPoint eta = normal_complement(GrassmannPoint::coordinate_plane(2, 1));
  ASSERT_EQ(eta.n(), 1);
  EXPECT_NEAR(eta.frame()(2, 0), 1.0, 1e-15);
}

TEST(NormalComplement, PreservesWAndSOrthogonality) {
  Rng rng(24);
  for (int s = 0; s < 100; ++s) {
    const GrassmannPoint p = random_point(rng, 2, 3);
    const GrassmannPoint q = random_point(rng, 2, 3);
    EXPECT_NEAR(w_function(normal_complement(p), normal_complement(q)), w_function(p, q), 1e-12);
  }
  const auto [p, q] = support::random_s_orthogonal_pair(rng, 3, 2);
  EXPECT_TRUE(is_s_orthogonal(normal_complement(p), normal_complement(q)));
}

TEST(GradientBound, CasesOfEquality) {
  const GrassmannPoint c = GrassmannPoint::coordinate_plane(2, 2);
  const GradientBound at_center = grad_logw_lower_bound(c, c);
  EXPECT_NEAR(at_center.lhs, 0.0, 1e-15);
  EXPECT_NEAR(at_center.rhs, 0.0, 1e-15);
  const double a = 0.4;
  const Matrix f = (Matrix(4, 2) << std::cos(a), 0, 0, std::cos(a), std::sin(a), 0, 0, std::sin(a)).finished();
  const GradientBound equal = grad_logw_lower_bound(GrassmannPoint::from_basis(f), c);
  EXPECT_NEAR(equal.lhs, equal.rhs, 1e-10);
}

TEST(GradientBound, AmGmOracle) {
  Rng rng(25);
  for (int s = 0; s < 50; ++s) {
    const GrassmannPoint c = GrassmannPoint::coordinate_plane(3, 3);
    const Matrix z = 0.8 * random_gaussian(rng, 3, 3);
    const GrassmannPoint p = GrassmannPoint::from_basis(Matrix(c.frame() + c.normal_frame() * z.transpose()));
    const GradientBound b = grad_logw_lower_bound(p, c);
    const Vector lam = Eigen::JacobiSVD<Matrix>(z).singularValues();
    double sum = 0.0, prod = 1.0;
    for (int i = 0; i < 3; ++i) {
      sum += lam(i) * lam(i);
      prod *= 1.0 + lam(i) * lam(i);
    }
    EXPECT_NEAR(b.lhs, sum, 1e-9 * (1.0 + sum));
    EXPECT_NEAR(b.rhs, 3.0 * (std::cbrt(prod) - 1.0), 1e-9 * (1.0 + sum));
    EXPECT_GT(b.lhs, b.rhs);
  }
}

TEST(Plucker, ThreeTermIdentityOnDecomposableVectors) {
  Rng rng(26);
  for (int s = 0; s < 200; ++s) {
    const Matrix basis = support::random_rotation(rng, 7);
    const Multivector a = random_point(rng, 4, 3).plucker();
    EXPECT_NEAR(plucker_three_term(basis.leftCols(4), basis.rightCols(3), a, 0, 2, 1, 2), 0.0, 1e-12);
  }
}

TEST(Plucker, PairingThroughDeterminantMatchesWedge) {
  Rng rng(27);
  const Matrix basis = support::random_rotation(rng, 5);
  const GrassmannPoint a = random_point(rng, 2, 3);
  const double via_det = substituted_pairing(basis.leftCols(2), basis.rightCols(3), a.frame(), {{1, 2}});
  const double via_wedge = inner(wedge(substituted_frame(basis.leftCols(2), basis.rightCols(3), {{1, 2}})), a.plucker());
  EXPECT_NEAR(via_det, via_wedge, 1e-12);
}

TEST(Plucker, NonDecomposableVectorBreaksIdentity) {
  const Matrix basis = Matrix::Identity(4, 4);
  const Multivector a = Multivector::basis(4, MultiIndex::from({0, 1}, 4)) + Multivector::basis(4, MultiIndex::from({2, 3}, 4));
  EXPECT_GT(std::abs(plucker_three_term(basis.leftCols(2), basis.rightCols(2), a, 0, 1, 0, 1)), 0.5);
}
