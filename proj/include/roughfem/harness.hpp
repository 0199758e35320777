#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roughfem/assembly.hpp"
#include "roughfem/estimates.hpp"
#include "roughfem/fields.hpp"
#include "roughfem/linsolve.hpp"
#include "roughfem/report.hpp"

namespace roughfem {

/// Discrete solution with vertex values (zero on the boundary).
struct Solution {
  MeshPtr mesh;
  Vector values;
  double residual = 0.0;

  ScalarField field() const { return fe_function(mesh, values); }
  VectorField gradient() const { return fe_gradient(mesh, values); }
  double l1() const { return lr(1.0); }
  double l2() const { return lr(2.0); }
  double lr(double r) const { return lp_norm(field(), r, *mesh); }
  double grad_l2() const { return lp_norm(gradient(), 2.0, *mesh); }
  /// Full H^1 norm (L^2 part plus gradient part).
  double h1() const;
  /// Quadrature-point maximum of |u_h|.
  double linf() const { return lr(kInfinity); }
};

Solution solve_primal(const CoefficientSet& coeffs, const MeshPtr& mesh, const SolveOptions& solve = {},
                      const AssemblyOptions& assembly = {});

/// Solves the dual problem -div(A grad w + w B) + (c + alpha) w = f - div F.
Solution solve_dual(const CoefficientSet& coeffs, const MeshPtr& mesh, const SolveOptions& solve = {},
                    const AssemblyOptions& assembly = {});

/// Constants for a coefficient set on a given domain volume (d = 2).
EstimateConstants constants_for(const CoefficientSet& coeffs, double volume);

/// Problem with a known exact solution.
struct ManufacturedCase {
  std::string name;
  CoefficientSet coeffs;
  std::function<double(const Point2&)> exact;
  std::function<Vec2(const Point2&)> exact_gradient;
};

/// "diffusion": -Laplace u = 2 pi^2 sin(pi x) sin(pi y);
/// "drift": same plus B = (1, 0); "zero": vanishing data and solution.
ManufacturedCase manufactured_case(const std::string& name);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double l2_error = 0.0;
  double h1_error = 0.0;  // gradient seminorm error
  double l2_order = 0.0;  // NaN on the first level
  double h1_order = 0.0;
};

struct ConvergenceTable {
  std::string case_name;
  std::vector<ConvergenceRow> rows;
  /// Orders on the last pair of levels meet the thresholds (vacuous for < 2 levels).
  bool meets(double l2_min = 1.8, double h1_min = 0.9) const;
};

ConvergenceTable mms_convergence_study(const ManufacturedCase& mcase, const std::vector<int>& levels,
                                       const Rect& domain = Rect::unit_square());

/// Energy, L-infinity and L^r bounds for the primal solution with data (coeffs.f, coeffs.F).
EstimateReport verify_estimates(const CoefficientSet& coeffs, const MeshPtr& mesh, const std::vector<double>& r_values,
                                double slack, const std::string& case_id = "case");

/// |psi^T M u - w^T b| / max(1, |psi^T M u|) with K u = b(f, F) and K^T w = M psi; the dual
/// system is assembled with the dual form and the transposed diffusion matrix.
double duality_check(const CoefficientSet& coeffs, const MeshPtr& mesh, const ScalarField& psi);

/// ||v||_{L^1} <= alpha^{-1} ||g||_{L^1} + |U|^{1/2} C1 ||G||_{L^2} for the solution v with data (g, G).
EstimateReport extended_l1_check(const CoefficientSet& coeffs, const MeshPtr& mesh, const ScalarField& g,
                                 const VectorField& G, double slack, const std::string& case_id = "case");

struct StabilityRow {
  int n = 0;
  double measured = 0.0;  // ||u_n - u||_{L^1}
  double bound = 0.0;
  StabilityTerms terms;
};

struct StabilityResult {
  std::vector<StabilityRow> rows;
  double base_l1 = 0.0;  // ||u||_{L^1}
  EstimateReport report;
};

using PerturbationSchedule = std::function<CoefficientSet(int n)>;

/// Solves the perturbed problems n = 1..n_max and compares ||u_n - u||_{L^1} with the
/// stability bound. The perturbed diffusion matrix must keep the base lambda. The report
/// also asserts the last measured value is below rel_threshold * ||u||_{L^1}.
StabilityResult stability_sweep(const CoefficientSet& base, const MeshPtr& mesh, const PerturbationSchedule& schedule,
                                int n_max, double slack, double rel_threshold);

/// Schedule B_n = mollification of B with radius delta / (2n), other data fixed.
PerturbationSchedule mollified_drift_schedule(const CoefficientSet& base, const MeshPtr& mesh, double delta);

/// One member of a seeded random coefficient suite.
struct SuiteCase {
  std::string id;
  std::string description;
  CoefficientSet coeffs;
};

/// Seeded suite mixing smooth, discontinuous and singular coefficients (singular drifts at
/// corners, singular zero-order terms), non-symmetric diffusion, and data with F = 0 and F != 0.
std::vector<SuiteCase> make_random_suite(std::uint64_t seed, int count, const Rect& domain = Rect::unit_square());

/// verify_estimates plus the duality identity for every case; cases run on `jobs` threads,
/// the report is ordered by case id.
EstimateReport run_suite(const std::vector<SuiteCase>& cases, const MeshPtr& mesh, const std::vector<double>& r_values,
                         double slack, int jobs = 1);

}  // namespace roughfem
