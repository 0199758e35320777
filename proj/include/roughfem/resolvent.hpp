#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "roughfem/assembly.hpp"
#include "roughfem/fields.hpp"
#include "roughfem/linsolve.hpp"

namespace roughfem {

/// Discrete resolvent G_alpha = (K0 + alpha M)^{-1} M on the interior vertex space.
///
/// K0 is the operator assembled with alpha = 0 (diffusion, drift and c), M the mass
/// matrix. With this definition the resolvent identity holds exactly in exact
/// arithmetic, so it can be asserted at round-off level.
class DiscreteResolvent {
 public:
  DiscreteResolvent(const CoefficientSet& coeffs, MeshPtr mesh, const AssemblyOptions& opts = {});

  /// G_alpha f for an interior nodal vector f.
  Vector apply(double alpha, const Vector& f) const;
  /// G_alpha applied to a field: solves (K0 + alpha M) u = (int f phi_i)_i.
  Vector apply(double alpha, const ScalarField& f) const;

  const SparseMatrix& K0() const { return K0_; }
  const SparseMatrix& M() const { return M_; }
  const MeshPtr& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  int size() const { return dofs_.size(); }

  /// Off-diagonals of K0 <= 0 and row sums >= 0.
  bool k0_is_m_matrix(double tol = 1e-14) const;

  /// Finite-element function of an interior vector (zero boundary values).
  ScalarField as_field(const Vector& interior) const;

 private:
  const Factorization& factorization(double alpha) const;

  MeshPtr mesh_;
  DofMap dofs_;
  SparseMatrix K0_;
  SparseMatrix M_;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, std::shared_ptr<Factorization>> cache_;
};

struct SubMarkovReport {
  bool pass = true;
  double min_value = 0.0;  // min_i alpha (G_alpha f)_i
  double max_value = 0.0;  // max_i alpha (G_alpha f)_i
  double tol = 0.0;
};

/// Tolerance tier: 1e-12 when K0 is an M-matrix, 1e-3 otherwise.
double submarkov_tolerance(const DiscreteResolvent& R);

/// Checks -tol <= alpha (G_alpha f)_i <= 1 + tol for 0 <= f <= 1 (nodal).
SubMarkovReport check_submarkov(const DiscreteResolvent& R, double alpha, const Vector& f,
                                std::optional<double> tol = std::nullopt);

struct ContractionReport {
  bool pass = true;
  double solution_norm = 0.0;  // ||G_alpha f||_r
  double bound = 0.0;          // alpha^{-1} ||f||_r
  double slack = 0.0;
  double r = 1.0;
};

/// ||G_alpha f||_{L^r} <= (1 + slack) alpha^{-1} ||f||_{L^r}.
ContractionReport check_lr_contraction(const DiscreteResolvent& R, double alpha, const ScalarField& f, double r,
                                       double slack);
ContractionReport check_lr_contraction(const DiscreteResolvent& R, double alpha, const Vector& f, double r,
                                       double slack);

struct ContinuityRow {
  double alpha;
  double error;  // ||alpha G_alpha f - f||_{L^1}
};

/// ||alpha G_alpha f - f||_{L^1} for each alpha (alphas must be positive and increasing).
std::vector<ContinuityRow> strong_continuity_sweep(const DiscreteResolvent& R, const ScalarField& f,
                                                   const std::vector<double>& alphas);

/// max over alpha, beta of ||G_a f - G_b f - (b - a) G_b G_a f||_2 / ||f||_2.
double resolvent_identity_defect(const DiscreteResolvent& R, const std::vector<double>& alphas, const Vector& f);

}  // namespace roughfem
