#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "roughfem/harness.hpp"

using namespace roughfem;

namespace {
constexpr double kPi = std::numbers::pi;

ScalarField sine() {
  return ScalarField::analytic([](const Point2& p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); }, "sin sin");
}
}  // namespace

TEST(Harness, ZeroDataZeroSolution) {
  const auto mesh = build_structured_mesh(16, 16);
  CoefficientSet k;
  k.alpha = 1.0;
  const auto sol = solve_primal(k, mesh);
  EXPECT_EQ(sol.values.norm(), 0.0);
  const auto rep = verify_estimates(k, mesh, {1.0, 2.0, kInfinity}, 0.0);
  EXPECT_TRUE(rep.all_pass());
  for (const auto& r : rep.records()) {
    EXPECT_EQ(r.measured, 0.0);
    EXPECT_EQ(r.bound, 0.0);
  }
}

TEST(Harness, EigenfunctionCase) {
  const auto mesh = build_structured_mesh(64, 64);
  CoefficientSet k;
  k.alpha = 1.0;
  k.f = ScalarField::analytic(
      [](const Point2& p) { return (2.0 * kPi * kPi + 1.0) * std::sin(kPi * p.x) * std::sin(kPi * p.y); }, "eig");
  const auto sol = solve_primal(k, mesh);
  EXPECT_NEAR(sol.l2(), 0.5, 1e-3);
  EXPECT_LE(sol.l1(), std::sqrt(mesh->domain().area()) * sol.l2());
  const auto rep = verify_estimates(k, mesh, {2.0}, 0.02);
  ASSERT_TRUE(rep.all_pass());
  const auto& lr = rep.records().back();
  EXPECT_EQ(lr.check, "lr_r=2");
  EXPECT_NEAR(lr.bound, (2.0 * kPi * kPi + 1.0) / 2.0, 1e-3);
}

TEST(Harness, ManufacturedOrders) {
  for (const char* name : {"diffusion", "drift"}) {
    const auto t = mms_convergence_study(manufactured_case(name), {8, 16, 32});
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_TRUE(std::isnan(t.rows[0].l2_order));
    EXPECT_TRUE(t.meets()) << name;
    EXPECT_NEAR(t.rows[2].l2_order, 2.0, 0.1);
  }
  const auto zero = mms_convergence_study(manufactured_case("zero"), {4, 8});
  EXPECT_EQ(zero.rows[1].l2_error, 0.0);
  EXPECT_TRUE(zero.meets());
  EXPECT_THROW(manufactured_case("nope"), std::invalid_argument);
}

TEST(Harness, DualityResidual) {
  const auto mesh = build_structured_mesh(24, 24);
  CoefficientSet k;
  k.A = MatrixField::constant((Mat2() << 2.0, 0.8, -0.3, 1.0).finished(), "nonsym");
  k.lambda = 0.9;
  k.Lambda = 2.0;
  k.B = make_singular_drift(1.6, {1.0, 0.0});
  k.c = make_radial_power(1.0, {0.0, 0.0}, 0.4);
  k.alpha = 0.5;
  k.f = ScalarField::analytic([](const Point2& p) { return p.x > 0.3 ? 1.0 : -2.0; }, "jump");
  k.F = VectorField::constant(Vec2(0.2, 1.0));
  EXPECT_LE(duality_check(k, mesh, ScalarField::analytic([](const Point2& p) { return std::exp(p.x * p.y); }, "e")),
            1e-9);
  CoefficientSet zero;
  EXPECT_EQ(duality_check(zero, mesh, sine()), 0.0);
}

TEST(Harness, SymmetricSelfDuality) {
  const auto mesh = build_structured_mesh(16, 16);
  CoefficientSet k;
  k.alpha = 2.0;
  const auto f = sine();
  const auto psi = ScalarField::analytic([](const Point2& p) { return p.x * (1.0 - p.y); }, "psi");
  CoefficientSet kf = k, kp = k;
  kf.f = f;
  kp.f = psi;
  const auto uf = solve_primal(kf, mesh).field();
  const auto up = solve_primal(kp, mesh).field();
  double a = 0.0, b = 0.0;
  for_each_quadrature_point(*mesh, [&](const SamplePoint& s, double w) {
    a += w * psi(s) * uf(s);
    b += w * f(s) * up(s);
  });
  EXPECT_NEAR(a, b, 1e-6 * std::abs(a));
}

TEST(Harness, ExtendedL1) {
  const auto mesh = build_structured_mesh(32, 32);
  CoefficientSet k;
  k.alpha = 2.0;
  const auto g = make_radial_power(1.0, {0.0, 0.0});
  const auto rep = extended_l1_check(k, mesh, g, VectorField(), 0.02);
  ASSERT_TRUE(rep.all_pass());
  EXPECT_NEAR(rep.records()[0].bound, lp_norm(g, 1.0, *mesh) / 2.0, 1e-14);
  EXPECT_TRUE(extended_l1_check(k, mesh, ScalarField(), VectorField::constant(Vec2(1.0, 1.0)), 0.02).all_pass());
  k.alpha = 0.0;
  EXPECT_THROW(extended_l1_check(k, mesh, g, VectorField(), 0.02), std::invalid_argument);
}

TEST(Harness, TrivialScheduleGivesZeroRows) {
  const auto mesh = build_structured_mesh(16, 16);
  CoefficientSet k;
  k.alpha = 1.0;
  k.f = sine();
  const auto res = stability_sweep(k, mesh, [k](int) { return k; }, 4, 0.05, 1e-3);
  for (const auto& row : res.rows) {
    EXPECT_EQ(row.measured, 0.0);
    EXPECT_EQ(row.bound, 0.0);
  }
  EXPECT_TRUE(res.report.all_pass());
}

TEST(Harness, StabilityRejectsLostEllipticity) {
  const auto mesh = build_structured_mesh(8, 8);
  CoefficientSet k;
  k.alpha = 1.0;
  auto weak = [k](int) {
    CoefficientSet c = k;
    c.A = MatrixField::constant(0.5 * Mat2::Identity(), "I/2");
    return c;
  };
  EXPECT_THROW(stability_sweep(k, mesh, weak, 2, 0.05, 1e-3), AssumptionViolation);
}

TEST(Harness, StabilityWithDataAndDiffusionPerturbation) {
  const auto mesh = build_structured_mesh(32, 32);
  CoefficientSet base;
  base.alpha = 1.0;
  base.f = sine();
  base.lambda = 0.5;
  base.Lambda = 2.0;
  const auto spike = make_radial_power(1.0, {1.0, 1.0});
  auto schedule = [base, spike](int n) {
    CoefficientSet c = base;
    Mat2 R;
    R << 0.25, 0.1, 0.1, -0.25;
    c.A = MatrixField::constant(Mat2(Mat2::Identity() + R / n), "I + R/n");
    const auto f = base.f;
    c.f = ScalarField::from_sample([f, spike, n](const SamplePoint& s) { return f(s) + spike(s) / n; }, "f + spike/n");
    return c;
  };
  const auto res = stability_sweep(base, mesh, schedule, 6, 0.05, 1.0);
  EXPECT_TRUE(res.report.all_pass());
  // first-order decay
  EXPECT_NEAR(res.rows[5].measured * 6.0, res.rows[0].measured, 0.2 * res.rows[0].measured);
}

TEST(Harness, SuiteIsSeededAndOrderIndependent) {
  const auto a = make_random_suite(5, 6);
  const auto b = make_random_suite(5, 6);
  const auto c = make_random_suite(6, 6);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].description, b[i].description);
  EXPECT_NE(a[1].description, c[1].description);
  const auto mesh = build_structured_mesh(16, 16);
  std::ostringstream one, two;
  run_suite(a, mesh, {1.0, kInfinity}, 0.02, 1).write_csv(one);
  run_suite(a, mesh, {1.0, kInfinity}, 0.02, 3).write_csv(two);
  EXPECT_EQ(one.str(), two.str());
}

TEST(Harness, UniquenessAcrossSolverPaths) {
  const auto mesh = build_structured_mesh(32, 32);
  CoefficientSet k = make_random_suite(9, 4)[3].coeffs;
  SolveOptions iterative;
  iterative.method = SolveMethod::Iterative;
  iterative.tol = 1e-12;
  const auto u1 = solve_primal(k, mesh);
  const auto u2 = solve_primal(k, mesh, iterative);
  EXPECT_LE(lp_norm(difference(u1.field(), u2.field()), 2.0, *mesh), 1e-8 * std::max(1.0, u1.l2()));
}
