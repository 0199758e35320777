#include <gtest/gtest.h>

#include <sstream>

#include "roughfem/assembly.hpp"

using namespace roughfem;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

CoefficientSet rough_coefficients() {
  CoefficientSet k;
  Mat2 a;
  a << 2.0, 0.6, -0.4, 1.5;
  k.A = MatrixField::analytic([a](const Point2& p) { return Mat2((1.0 + 0.5 * (p.x > 0.5)) * a); }, "jump");
  k.Lambda = 3.0;
  k.B = make_singular_drift(1.5, {0.0, 0.0});
  k.c = make_radial_power(1.0, {1.0, 1.0}, 0.3);
  k.alpha = 0.7;
  k.f = ScalarField::analytic([](const Point2& p) { return p.x - p.y * p.y; }, "x - y^2");
  k.F = VectorField::constant(Vec2(0.3, -0.2));
  return k;
}

int dof_at(const Mesh& mesh, const DofMap& dofs, double x, double y) {
  for (int i = 0; i < dofs.size(); ++i) {
    const auto& p = mesh.vertex(dofs.dof_to_vertex[static_cast<std::size_t>(i)]);
    if (std::abs(p.x - x) < 1e-12 && std::abs(p.y - y) < 1e-12) return i;
  }
  return -1;
}

}  // namespace

TEST(Assembly, LaplaceFivePointStencil) {
  // on the right-triangle mesh the P1 Laplacian is the 5-point stencil, independent of h
  const auto mesh = build_structured_mesh(4, 4);
  const auto sys = assemble_primal(CoefficientSet{}, mesh);
  const auto K = dense(sys.K);
  const int c = dof_at(*mesh, sys.dofs, 0.5, 0.5);
  ASSERT_GE(c, 0);
  EXPECT_NEAR(K(c, c), 4.0, 1e-13);
  EXPECT_NEAR(K(c, dof_at(*mesh, sys.dofs, 0.25, 0.5)), -1.0, 1e-13);
  EXPECT_NEAR(K(c, dof_at(*mesh, sys.dofs, 0.5, 0.75)), -1.0, 1e-13);
  EXPECT_NEAR(K(c, dof_at(*mesh, sys.dofs, 0.75, 0.75)), 0.0, 1e-13);
  EXPECT_NEAR(K(c, dof_at(*mesh, sys.dofs, 0.25, 0.25)), 0.0, 1e-13);
}

TEST(Assembly, MassEntries) {
  const double h = 0.25;
  const auto mesh = build_structured_mesh(4, 4);
  const auto dofs = interior_dofs(*mesh);
  const auto M = dense(assemble_mass(*mesh, dofs));
  const int c = dof_at(*mesh, dofs, 0.5, 0.5);
  EXPECT_NEAR(M(c, c), h * h / 2.0, 1e-15);
  EXPECT_NEAR(M(c, dof_at(*mesh, dofs, 0.75, 0.5)), h * h / 12.0, 1e-15);
  EXPECT_NEAR(M(c, dof_at(*mesh, dofs, 0.75, 0.75)), h * h / 12.0, 1e-15);
  EXPECT_NEAR(M(c, dof_at(*mesh, dofs, 0.25, 0.75)), 0.0, 1e-15);
  EXPECT_NEAR((M - M.transpose()).norm(), 0.0, 1e-16);
}

TEST(Assembly, AlphaEntersAffinely) {
  const auto mesh = build_structured_mesh(8, 8);
  auto k = rough_coefficients();
  k.alpha = 0.0;
  const auto s0 = assemble_primal(k, mesh);
  k.alpha = 3.5;
  const auto s1 = assemble_primal(k, mesh);
  EXPECT_NEAR((dense(s1.K) - dense(s0.K) - 3.5 * dense(s0.M)).norm(), 0.0, 1e-12);
}

TEST(Assembly, TransposeIdentity) {
  const auto mesh = build_structured_mesh(8, 8);
  const auto k = rough_coefficients();
  const auto primal = assemble_primal(k, mesh);
  const auto dual = assemble_dual(with_transposed_diffusion(k), mesh);
  EXPECT_NEAR((dense(dual.K) - dense(primal.K).transpose()).norm(), 0.0, 1e-12 * dense(primal.K).norm());
}

TEST(Assembly, PartitionOfUnity) {
  const auto mesh = build_structured_mesh(6, 5, Rect{0, 0, 2, 1});
  const auto b = assemble_load_all_vertices(ScalarField::constant(1.0), VectorField(), *mesh);
  EXPECT_NEAR(b.sum(), 2.0, 1e-13);
  const auto g = assemble_load_all_vertices(ScalarField(), VectorField::constant(Vec2(1.0, -2.0)), *mesh);
  EXPECT_NEAR(g.sum(), 0.0, 1e-13);
}

TEST(Assembly, ValidationNamesClause) {
  const auto mesh = build_structured_mesh(8, 8);
  CoefficientSet k;
  k.B = VectorField::analytic([](const Point2& p) { return Vec2(p.x, p.y); }, "outward");
  EXPECT_THROW(assemble_primal(k, mesh), AssumptionViolation);
  AssemblyOptions opts;
  opts.skip_validation = true;
  EXPECT_NO_THROW(assemble_primal(k, mesh, opts));
  CoefficientSet neg;
  neg.c = ScalarField::constant(-1.0);
  try {
    assemble_primal(neg, mesh);
    FAIL();
  } catch (const AssumptionViolation& e) {
    EXPECT_NE(e.clause().find("zero-order"), std::string::npos) << e.clause();
  }
}

TEST(Assembly, PecletWarning) {
  const auto mesh = build_structured_mesh(4, 4);
  CoefficientSet k;
  k.B = VectorField::constant(Vec2(100.0, 0.0));
  EXPECT_GT(max_mesh_peclet(k.B, *mesh, 1.0), 1.0);
  EXPECT_FALSE(assemble_primal(k, mesh).warnings.empty());
  EXPECT_TRUE(assemble_primal(CoefficientSet{}, mesh).warnings.empty());
}

TEST(Assembly, Tables) {
  SparseMatrix m(2, 2);
  m.insert(1, 0) = 0.5;
  std::ostringstream os;
  write_coordinate_table(os, m);
  EXPECT_EQ(os.str(), "row,col,value\n1,0,0.5\n");
  std::ostringstream ov;
  write_vector_table(ov, Vector::Constant(1, 2.0));
  EXPECT_EQ(ov.str(), "row,value\n0,2\n");
}
