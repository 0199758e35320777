#include "roughfem/resolvent.hpp"

#include <cmath>

namespace roughfem {

DiscreteResolvent::DiscreteResolvent(const CoefficientSet& coeffs, MeshPtr mesh, const AssemblyOptions& opts)
    : mesh_(std::move(mesh)) {
  CoefficientSet base = coeffs;
  base.alpha = 0.0;
  base.f = ScalarField();
  base.F = VectorField();
  auto sys = assemble_primal(base, mesh_, opts);
  dofs_ = std::move(sys.dofs);
  K0_ = std::move(sys.K);
  M_ = std::move(sys.M);
}

const Factorization& DiscreteResolvent::factorization(double alpha) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = cache_.find(alpha);
  if (it == cache_.end()) {
    SparseMatrix K = K0_ + alpha * M_;
    it = cache_.emplace(alpha, std::make_shared<Factorization>(K)).first;
  }
  return *it->second;
}

Vector DiscreteResolvent::apply(double alpha, const Vector& f) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("resolvent needs alpha > 0");
  if (f.size() != size()) throw std::invalid_argument("resolvent: vector length does not match the dof count");
  if (f.isZero(0.0)) return Vector::Zero(size());
  return factorization(alpha).solve(M_ * f);
}

Vector DiscreteResolvent::apply(double alpha, const ScalarField& f) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("resolvent needs alpha > 0");
  const Vector load = assemble_load(f, VectorField(), *mesh_, dofs_);
  if (load.isZero(0.0)) return Vector::Zero(size());
  return factorization(alpha).solve(load);
}

bool DiscreteResolvent::k0_is_m_matrix(double tol) const {
  Vector row_sum = Vector::Zero(size());
  for (int k = 0; k < K0_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(K0_, k); it; ++it) {
      if (it.row() != it.col() && it.value() > tol) return false;
      row_sum[it.row()] += it.value();
    }
  }
  return (row_sum.array() >= -tol).all();
}

ScalarField DiscreteResolvent::as_field(const Vector& interior) const {
  return fe_function(mesh_, dofs_.prolong(interior));
}

double submarkov_tolerance(const DiscreteResolvent& R) { return R.k0_is_m_matrix() ? 1e-12 : 1e-3; }

SubMarkovReport check_submarkov(const DiscreteResolvent& R, double alpha, const Vector& f, std::optional<double> tol) {
  if ((f.array() < 0.0).any() || (f.array() > 1.0).any()) {
    throw std::invalid_argument("sub-Markov check needs 0 <= f <= 1 nodally");
  }
  SubMarkovReport report;
  report.tol = tol ? *tol : submarkov_tolerance(R);
  const Vector u = alpha * R.apply(alpha, f);
  report.min_value = u.size() ? u.minCoeff() : 0.0;
  report.max_value = u.size() ? u.maxCoeff() : 0.0;
  report.pass = report.min_value >= -report.tol && report.max_value <= 1.0 + report.tol;
  return report;
}

namespace {

ContractionReport contraction(const DiscreteResolvent& R, double alpha, const Vector& u, double f_norm, double r,
                              double slack) {
  ContractionReport report;
  report.r = r;
  report.slack = slack;
  report.solution_norm = lp_norm(R.as_field(u), r, *R.mesh());
  report.bound = f_norm / alpha;
  report.pass = report.solution_norm <= (1.0 + slack) * report.bound;
  return report;
}

}  // namespace

ContractionReport check_lr_contraction(const DiscreteResolvent& R, double alpha, const ScalarField& f, double r,
                                       double slack) {
  return contraction(R, alpha, R.apply(alpha, f), lp_norm(f, r, *R.mesh()), r, slack);
}

ContractionReport check_lr_contraction(const DiscreteResolvent& R, double alpha, const Vector& f, double r,
                                       double slack) {
  return contraction(R, alpha, R.apply(alpha, f), lp_norm(R.as_field(f), r, *R.mesh()), r, slack);
}

std::vector<ContinuityRow> strong_continuity_sweep(const DiscreteResolvent& R, const ScalarField& f,
                                                   const std::vector<double>& alphas) {
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw std::invalid_argument("strong continuity sweep needs positive alphas");
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      throw std::invalid_argument("strong continuity sweep needs increasing alphas");
    }
  }
  std::vector<ContinuityRow> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) {
    const ScalarField scaled = R.as_field(alpha * R.apply(alpha, f));
    rows.push_back({alpha, lp_norm(difference(scaled, f), 1.0, *R.mesh())});
  }
  return rows;
}

double resolvent_identity_defect(const DiscreteResolvent& R, const std::vector<double>& alphas, const Vector& f) {
  const double fn = f.norm();
  if (fn == 0.0) return 0.0;
  std::map<double, Vector> g;
  for (double a : alphas) g.emplace(a, R.apply(a, f));
  double worst = 0.0;
  for (double a : alphas) {
    for (double b : alphas) {
      const Vector defect = g[a] - g[b] - (b - a) * R.apply(b, g[a]);
      worst = std::max(worst, defect.norm() / fn);
    }
  }
  return worst;
}

}  // namespace roughfem
