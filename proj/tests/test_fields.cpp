#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "roughfem/fields.hpp"

using namespace roughfem;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Field, ZeroAndConstants) {
  EXPECT_TRUE(ScalarField().is_zero());
  EXPECT_TRUE(VectorField().is_zero());
  EXPECT_FALSE(ScalarField::constant(2.0).is_zero());
  EXPECT_EQ(ScalarField::constant(2.0).at({0.3, 0.4}), 2.0);
  EXPECT_TRUE(MatrixField().at({0.1, 0.1}).isZero());
}

TEST(Field, SingularPointsAndNonFiniteValues) {
  const auto B = make_singular_drift(1.5, {0.0, 0.0});
  EXPECT_THROW(B.at({0.0, 0.0}), FieldEvaluationError);
  EXPECT_NEAR(B.at({0.25, 0.0})[0], -0.25 * std::pow(0.25, -1.5), 1e-12);
  const auto bad = ScalarField::analytic([](const Point2& p) { return 1.0 / p.x; }, "1/x");
  EXPECT_THROW(bad.at({0.0, 0.5}), FieldEvaluationError);
  EXPECT_THROW(make_singular_drift(2.0, {0, 0}), std::invalid_argument);
  EXPECT_THROW(make_singular_drift(1.0, {0, 0}), std::invalid_argument);
  EXPECT_NEAR(bad.with_cap(3.0).at({0.01, 0.5}), 3.0, 0.0);
}

TEST(Field, NodalAndPerElement) {
  const auto mesh = build_structured_mesh(4, 4);
  std::vector<double> v;
  for (const auto& p : mesh->vertices()) v.push_back(p.x + 2.0 * p.y);
  const auto f = ScalarField::nodal(mesh, v);
  EXPECT_NEAR(f.at({0.37, 0.91}), 0.37 + 2.0 * 0.91, 1e-14);
  EXPECT_THROW(ScalarField::nodal(mesh, {1.0}), std::invalid_argument);
  const auto pe = ScalarField::per_element(mesh, std::vector<double>(mesh->num_triangles(), 4.0));
  EXPECT_EQ(pe.at({0.5, 0.5}), 4.0);
  EXPECT_THROW(f.at({2.0, 2.0}), FieldEvaluationError);
}

TEST(Validators, Ellipticity) {
  const auto mesh = build_structured_mesh(4, 4);
  EXPECT_TRUE(check_ellipticity(MatrixField::constant(Mat2::Identity()), *mesh, 1.0, 1.0).pass);
  EXPECT_FALSE(check_ellipticity(MatrixField::constant(Mat2::Identity()), *mesh, 1.5, 2.0).pass);
  Mat2 skew;
  skew << 1.0, 5.0, -5.0, 1.0;
  // the antisymmetric part does not help coercivity but does count towards Lambda
  EXPECT_TRUE(check_ellipticity(MatrixField::constant(skew), *mesh, 1.0, 5.0).pass);
  EXPECT_FALSE(check_ellipticity(MatrixField::constant(skew), *mesh, 1.0, 4.0).pass);
}

TEST(Validators, WeakDivergence) {
  const auto mesh = build_structured_mesh(16, 16);
  EXPECT_TRUE(check_weak_divergence(VectorField(), *mesh, 1e-12).pass);
  const auto compress = VectorField::analytic([](const Point2& p) { return Vec2(0.5 - p.x, 0.5 - p.y); }, "inward");
  const auto expand = VectorField::analytic([](const Point2& p) { return Vec2(p.x - 0.5, p.y - 0.5); }, "outward");
  EXPECT_TRUE(check_weak_divergence(compress, *mesh, 1e-12).pass);
  EXPECT_FALSE(check_weak_divergence(expand, *mesh, 1e-12).pass);
  EXPECT_TRUE(check_weak_divergence(make_singular_drift(1.5, {0, 0}), *mesh, 1e-12).pass);
  EXPECT_TRUE(check_weak_divergence(make_singular_drift(1.9, {1, 1}), *mesh, 1e-12).pass);
}

TEST(Validators, Nonnegative) {
  const auto mesh = build_structured_mesh(4, 4);
  EXPECT_TRUE(check_nonnegative(make_radial_power(1.0, {0, 0}), *mesh).pass);
  const auto r = check_nonnegative(ScalarField::analytic([](const Point2& p) { return p.x - 0.5; }, "x-1/2"), *mesh);
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.worst_value, 0.0);
}

TEST(Validators, ParameterClauses) {
  CoefficientSet k;
  k.alpha = -1.0;
  try {
    k.validate_parameters();
    FAIL();
  } catch (const AssumptionViolation& e) {
    EXPECT_EQ(e.clause(), "zero-order constant");
  }
  k.alpha = 0.0;
  k.q = 1.0;
  EXPECT_THROW(k.validate_parameters(), AssumptionViolation);
  k.q = 2.0;
  k.two_star = 2.0;
  EXPECT_THROW(k.validate_parameters(), AssumptionViolation);
}

TEST(Norms, ConstantsAndHomogeneity) {
  const auto mesh = build_structured_mesh(8, 8, Rect{0, 0, 2, 1});
  const auto two = ScalarField::constant(2.0);
  EXPECT_NEAR(lp_norm(two, 1.0, *mesh), 4.0, 1e-13);
  EXPECT_NEAR(lp_norm(two, 2.0, *mesh), 2.0 * std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(lp_norm(two, kInfinity, *mesh), 2.0, 0.0);
  const auto s = ScalarField::analytic([](const Point2& p) { return std::sin(kPi * p.x) * p.y; }, "s");
  const auto s3 = ScalarField::analytic([](const Point2& p) { return -3.0 * std::sin(kPi * p.x) * p.y; }, "-3s");
  for (double p : {1.0, 1.5, 2.0, 4.0, kInfinity}) {
    EXPECT_NEAR(lp_norm(s3, p, *mesh), 3.0 * lp_norm(s, p, *mesh), 1e-12);
  }
  EXPECT_NEAR(lp_norm(VectorField::constant(Vec2(3.0, 4.0)), 1.0, *mesh), 10.0, 1e-12);
}

TEST(Norms, SineSquare) {
  const auto mesh = build_structured_mesh(32, 32);
  const auto s = ScalarField::analytic([](const Point2& p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); }, "s");
  EXPECT_NEAR(lp_norm(s, 2.0, *mesh), 0.5, 1e-6);
  EXPECT_NEAR(lp_norm(s, 1.0, *mesh), 4.0 / (kPi * kPi), 1e-6);
}

TEST(FeFunctions, GradientAndDifference) {
  const auto mesh = build_structured_mesh(5, 5);
  Eigen::VectorXd v(static_cast<Eigen::Index>(mesh->num_vertices()));
  for (std::size_t i = 0; i < mesh->num_vertices(); ++i) v[static_cast<Eigen::Index>(i)] = 3.0 * mesh->vertex(static_cast<int>(i)).x - mesh->vertex(static_cast<int>(i)).y;
  const auto g = fe_gradient(mesh, v);
  EXPECT_NEAR(g.at({0.41, 0.63})[0], 3.0, 1e-12);
  EXPECT_NEAR(g.at({0.41, 0.63})[1], -1.0, 1e-12);
  const auto u = fe_function(mesh, v);
  EXPECT_NEAR(lp_norm(difference(u, u), 1.0, *mesh), 0.0, 0.0);
}

TEST(Mollify, ConstantInteriorAndErrors) {
  const auto mesh = build_structured_mesh(16, 16);
  const auto m = mollify_field(ScalarField::constant(1.0), 2, 0.25, mesh);
  EXPECT_NEAR(m.at({0.5, 0.5}), 1.0, 1e-12);
  EXPECT_LT(m.at({0.0, 0.5}), 1.0);
  EXPECT_THROW(mollify_field(ScalarField::constant(1.0), 0, 0.25, mesh), std::invalid_argument);
  EXPECT_THROW(mollify_field(ScalarField::constant(1.0), 1, -1.0, mesh), std::invalid_argument);
}

TEST(Mollify, SingularDriftStaysAdmissibleInside) {
  const auto mesh = build_structured_mesh(32, 32);
  const auto B = make_singular_drift(1.5, {0.0, 0.0});
  const double delta = 0.25;
  for (int n : {1, 4}) {
    const auto Bn = mollify_field(B, n, delta, mesh);
    for (const auto& p : mesh->vertices()) EXPECT_TRUE(Bn.at(p).allFinite());
    const auto inner = shrink_domain(mesh->domain(), delta / (2.0 * n));
    ASSERT_TRUE(inner);
    EXPECT_TRUE(check_weak_divergence(Bn, *mesh, 1e-10, inner).pass) << "n=" << n;
  }
  // convergence in L^2 as the radius shrinks
  const double e1 = lp_norm(difference(B, mollify_field(B, 1, delta, mesh)), 2.0, *mesh);
  const double e8 = lp_norm(difference(B, mollify_field(B, 8, delta, mesh)), 2.0, *mesh);
  EXPECT_LT(e8, e1);
}
