#include "roughfem/linsolve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>

namespace roughfem {

std::string to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::Auto:
      return "auto";
    case SolveMethod::Direct:
      return "direct";
    case SolveMethod::Iterative:
      return "iterative";
  }
  return "unknown";
}

double relative_residual(const SparseMatrix& K, const Vector& u, const Vector& b) {
  const double bn = b.norm();
  const double rn = (K * u - b).norm();
  return bn > 0.0 ? rn / bn : rn;
}

namespace {

void check_shape(const SparseMatrix& K, const Vector& b) {
  if (K.rows() != K.cols()) throw std::invalid_argument("solve_sparse: matrix is not square");
  if (K.rows() != b.size()) throw std::invalid_argument("solve_sparse: dimension mismatch between matrix and rhs");
}

}  // namespace

Factorization::Factorization(const SparseMatrix& K, double tol)
    : K_(K), lu_(std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>()), size_(K.rows()),
      tol_(tol) {
  if (K.rows() != K.cols()) throw std::invalid_argument("factorization: matrix is not square");
  K_.makeCompressed();
  lu_->analyzePattern(K_);
  lu_->factorize(K_);
  if (lu_->info() != Eigen::Success) {
    throw SingularSystemError("sparse LU failed: " + lu_->lastErrorMessage());
  }
}

Vector Factorization::solve(const Vector& b) const {
  if (b.size() != size_) throw std::invalid_argument("factorization: dimension mismatch between matrix and rhs");
  if (size_ == 0) return Vector();
  Vector u = lu_->solve(b);
  if (lu_->info() != Eigen::Success || !u.allFinite()) {
    throw SingularSystemError("sparse LU solve produced a non-finite solution");
  }
  // one step of iterative refinement keeps the algebraic identities at round-off level
  const Vector r = b - K_ * u;
  if (r.norm() > 0.0) u += lu_->solve(r);
  const double res = relative_residual(K_, u, b);
  if (!(res <= tol_)) {
    throw SingularSystemError("matrix is numerically singular (relative residual " + std::to_string(res) + ")");
  }
  return u;
}

SolveReport solve_sparse(const SparseMatrix& K, const Vector& b, const SolveOptions& opts) {
  check_shape(K, b);
  SolveReport report;
  const bool direct = opts.method == SolveMethod::Direct ||
                      (opts.method == SolveMethod::Auto && K.rows() <= opts.direct_limit);
  if (b.size() == 0) {
    report.method = direct ? SolveMethod::Direct : SolveMethod::Iterative;
    return report;
  }
  if (direct) {
    Factorization lu(K, opts.tol);
    report.solution = lu.solve(b);
    report.method = SolveMethod::Direct;
    report.iterations = 0;
    report.relative_residual = relative_residual(K, report.solution, b);
    return report;
  }

  SparseMatrix A = K;
  A.makeCompressed();
  Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> solver;
  solver.preconditioner().setDroptol(1e-6);
  solver.preconditioner().setFillfactor(20);
  solver.setTolerance(opts.tol);
  solver.setMaxIterations(opts.max_iter);
  solver.compute(A);
  if (solver.info() != Eigen::Success) {
    throw SingularSystemError("incomplete LU preconditioner failed (singular or badly scaled matrix)");
  }
  Vector u = solver.solve(b);
  report.method = SolveMethod::Iterative;
  report.iterations = static_cast<int>(solver.iterations());
  report.relative_residual = u.allFinite() ? relative_residual(K, u, b) : INFINITY;
  if (solver.info() != Eigen::Success || !(report.relative_residual <= opts.tol)) {
    throw NonConvergenceError("BiCGSTAB did not reach tolerance within " + std::to_string(opts.max_iter) +
                                  " iterations",
                              report.relative_residual);
  }
  report.solution = std::move(u);
  return report;
}

}  // namespace roughfem
