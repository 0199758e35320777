#include <gtest/gtest.h>

#include "roughfem/assembly.hpp"
#include "roughfem/linsolve.hpp"

using namespace roughfem;

TEST(Linsolve, SmallSystem) {
  SparseMatrix K(2, 2);
  K.insert(0, 0) = 2.0;
  K.insert(0, 1) = 1.0;
  K.insert(1, 0) = -1.0;
  K.insert(1, 1) = 3.0;
  const Vector b = (Vector(2) << 3.0, 2.0).finished();
  const auto rep = solve_sparse(K, b);
  EXPECT_NEAR(rep.solution[0], 1.0, 1e-14);
  EXPECT_NEAR(rep.solution[1], 1.0, 1e-14);
  EXPECT_LE(rep.relative_residual, 1e-14);
  EXPECT_EQ(rep.method, SolveMethod::Direct);
}

TEST(Linsolve, SingularThrows) {
  SparseMatrix K(2, 2);
  K.insert(0, 0) = 1.0;
  K.insert(1, 0) = 1.0;
  EXPECT_THROW(solve_sparse(K, Vector::Ones(2)), SingularSystemError);
}

TEST(Linsolve, DirectAndIterativeAgree) {
  const auto mesh = build_structured_mesh(32, 32);
  CoefficientSet k;
  k.B = make_singular_drift(1.4, {0.0, 0.0});
  k.alpha = 1.0;
  k.f = ScalarField::constant(1.0);
  const auto sys = assemble_primal(k, mesh);
  SolveOptions direct, iterative;
  direct.method = SolveMethod::Direct;
  iterative.method = SolveMethod::Iterative;
  iterative.tol = 1e-12;
  const auto a = solve_sparse(sys.K, sys.b, direct);
  const auto b = solve_sparse(sys.K, sys.b, iterative);
  EXPECT_EQ(b.method, SolveMethod::Iterative);
  EXPECT_GT(b.iterations, 0);
  EXPECT_LE((a.solution - b.solution).norm() / a.solution.norm(), 1e-8);
  EXPECT_NEAR(relative_residual(sys.K, a.solution, sys.b), a.relative_residual, 1e-12);
}

TEST(Linsolve, FactorizationReuse) {
  const auto mesh = build_structured_mesh(16, 16);
  const auto sys = assemble_primal(CoefficientSet{}, mesh);
  const Factorization lu(sys.K);
  for (int s = 0; s < 3; ++s) {
    const Vector b = Vector::Random(lu.size());
    EXPECT_LE(relative_residual(sys.K, lu.solve(b), b), 1e-12);
  }
}

TEST(Linsolve, ZeroRightHandSide) {
  const auto mesh = build_structured_mesh(4, 4);
  const auto sys = assemble_primal(CoefficientSet{}, mesh);
  EXPECT_EQ(solve_sparse(sys.K, Vector::Zero(sys.dofs.size())).solution.norm(), 0.0);
}
