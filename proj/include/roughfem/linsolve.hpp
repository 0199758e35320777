#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>
#include <stdexcept>
#include <string>

namespace roughfem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

enum class SolveMethod { Auto, Direct, Iterative };

std::string to_string(SolveMethod method);

struct SolveOptions {
  SolveMethod method = SolveMethod::Auto;
  double tol = 1e-10;
  int max_iter = 10000;
  /// Auto uses the direct factorisation up to this many unknowns.
  long direct_limit = 200000;
};

struct SolveReport {
  Vector solution;
  double relative_residual = 0.0;
  SolveMethod method = SolveMethod::Direct;
  int iterations = 0;
};

/// Solves K u = b. Direct sparse LU with COLAMD ordering by default, ILU-preconditioned
/// BiCGSTAB for very large systems or on request.
SolveReport solve_sparse(const SparseMatrix& K, const Vector& b, const SolveOptions& opts = {});

/// Reusable LU factorisation for repeated right-hand sides. Not thread-safe to share.
class Factorization {
 public:
  explicit Factorization(const SparseMatrix& K, double tol = 1e-10);
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;

  Vector solve(const Vector& b) const;
  long size() const { return size_; }

 private:
  SparseMatrix K_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu_;
  long size_ = 0;
  double tol_;
};

double relative_residual(const SparseMatrix& K, const Vector& u, const Vector& b);

}  // namespace roughfem
