#include "roughfem/assembly.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "roughfem/quadrature.hpp"

namespace roughfem {

Vector DofMap::prolong(const Vector& interior) const {
  if (interior.size() != size()) throw std::invalid_argument("prolong: vector length does not match the dof count");
  Vector all = Vector::Zero(static_cast<Eigen::Index>(vertex_to_dof.size()));
  for (int i = 0; i < size(); ++i) all[dof_to_vertex[static_cast<std::size_t>(i)]] = interior[i];
  return all;
}

Vector DofMap::restrict_to_interior(const Vector& all) const {
  if (static_cast<std::size_t>(all.size()) != vertex_to_dof.size()) {
    throw std::invalid_argument("restrict: vector length does not match the vertex count");
  }
  Vector interior(size());
  for (int i = 0; i < size(); ++i) interior[i] = all[dof_to_vertex[static_cast<std::size_t>(i)]];
  return interior;
}

DofMap interior_dofs(const Mesh& mesh) {
  DofMap map;
  map.vertex_to_dof.assign(mesh.num_vertices(), -1);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.boundary_flags()[v]) continue;
    map.vertex_to_dof[v] = static_cast<int>(map.dof_to_vertex.size());
    map.dof_to_vertex.push_back(static_cast<int>(v));
  }
  return map;
}

void validate_coefficients(const CoefficientSet& coeffs, const Mesh& mesh, double divergence_tol) {
  coeffs.validate_parameters();
  const auto ell = check_ellipticity(coeffs.A, mesh, coeffs.lambda, coeffs.Lambda);
  if (!ell.pass) throw AssumptionViolation("ellipticity", ell.detail);
  const auto cpos = check_nonnegative(coeffs.c, mesh);
  if (!cpos.pass) throw AssumptionViolation("nonnegative zero-order term", cpos.detail);
  const auto div = check_weak_divergence(coeffs.B, mesh, divergence_tol);
  if (!div.pass) throw AssumptionViolation("drift divergence sign", div.detail);
}

namespace {

enum class Form { Primal, Dual };

struct OperatorParts {
  SparseMatrix K0;  // diffusion + drift + c
  SparseMatrix M;
  double max_peclet = 0.0;
};

OperatorParts assemble_operator(const CoefficientSet& coeffs, const Mesh& mesh, const DofMap& dofs, Form form) {
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> k_entries;
  std::vector<Triplet> m_entries;
  k_entries.reserve(9 * mesh.num_triangles());
  m_entries.reserve(9 * mesh.num_triangles());
  const auto& rule = triangle_rule();
  double max_peclet = 0.0;

  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto g = mesh.hat_gradients(t);
    const auto& tri = mesh.triangle(t);
    const double area = mesh.area(t);
    const double h_t = mesh.element_diameter(t);
    double ke[3][3] = {};
    double me[3][3] = {};
    for (const auto& qp : rule) {
      const SamplePoint s{mesh.map_to_physical(t, qp.bary), &mesh, t, qp.bary};
      const double w = qp.weight * area;
      const Mat2 a = coeffs.A(s);
      const Vec2 b = coeffs.B(s);
      const double c = coeffs.c(s);
      max_peclet = std::max(max_peclet, b.norm() * h_t / (2.0 * coeffs.lambda));
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          // <A grad phi_j, grad phi_i>
          const double diffusion = (a(0, 0) * g[j][0] + a(0, 1) * g[j][1]) * g[i][0] +
                                   (a(1, 0) * g[j][0] + a(1, 1) * g[j][1]) * g[i][1];
          const double drift = form == Form::Primal ? (b[0] * g[j][0] + b[1] * g[j][1]) * qp.bary[i]
                                                    : (b[0] * g[i][0] + b[1] * g[i][1]) * qp.bary[j];
          const double mass = qp.bary[i] * qp.bary[j];
          ke[i][j] += w * (diffusion + drift + c * mass);
          me[i][j] += w * mass;
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      const int row = dofs.vertex_to_dof[static_cast<std::size_t>(tri[i])];
      if (row < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int col = dofs.vertex_to_dof[static_cast<std::size_t>(tri[j])];
        if (col < 0) continue;
        k_entries.emplace_back(row, col, ke[i][j]);
        m_entries.emplace_back(row, col, me[i][j]);
      }
    }
  }
  OperatorParts parts;
  parts.K0.resize(dofs.size(), dofs.size());
  parts.M.resize(dofs.size(), dofs.size());
  parts.K0.setFromTriplets(k_entries.begin(), k_entries.end());
  parts.M.setFromTriplets(m_entries.begin(), m_entries.end());
  parts.max_peclet = max_peclet;
  return parts;
}

AssembledSystem assemble(const CoefficientSet& coeffs, const MeshPtr& mesh, const AssemblyOptions& opts, Form form) {
  if (!mesh) throw std::invalid_argument("assembly needs a mesh");
  if (!opts.skip_validation) validate_coefficients(coeffs, *mesh, opts.divergence_tol);
  AssembledSystem sys;
  sys.mesh = mesh;
  sys.dofs = interior_dofs(*mesh);
  sys.alpha = coeffs.alpha;
  auto parts = assemble_operator(coeffs, *mesh, sys.dofs, form);
  sys.K = parts.K0 + coeffs.alpha * parts.M;
  sys.M = std::move(parts.M);
  sys.b = assemble_load(coeffs.f, coeffs.F, *mesh, sys.dofs);
  sys.fingerprint = std::string(form == Form::Primal ? "primal:" : "dual:") + coeffs.fingerprint();
  if (parts.max_peclet > 1.0) {
    std::ostringstream os;
    os << "mesh Peclet number " << parts.max_peclet << " exceeds 1; plain Galerkin may oscillate";
    sys.warnings.push_back(os.str());
  }
  return sys;
}

template <class Visit>
void load_integrals(const ScalarField& f, const VectorField& F, const Mesh& mesh, Visit&& visit) {
  const bool has_f = !f.is_zero();
  const bool has_F = !F.is_zero();
  if (!has_f && !has_F) return;
  const auto& rule = triangle_rule();
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto g = mesh.hat_gradients(t);
    const auto& tri = mesh.triangle(t);
    const double area = mesh.area(t);
    double be[3] = {};
    for (const auto& qp : rule) {
      const SamplePoint s{mesh.map_to_physical(t, qp.bary), &mesh, t, qp.bary};
      const double w = qp.weight * area;
      const double fv = has_f ? f(s) : 0.0;
      const Vec2 Fv = has_F ? F(s) : Vec2::Zero();
      for (int i = 0; i < 3; ++i) be[i] += w * (fv * qp.bary[i] + Fv[0] * g[i][0] + Fv[1] * g[i][1]);
    }
    for (int i = 0; i < 3; ++i) visit(tri[i], be[i]);
  }
}

}  // namespace

AssembledSystem assemble_primal(const CoefficientSet& coeffs, const MeshPtr& mesh, const AssemblyOptions& opts) {
  return assemble(coeffs, mesh, opts, Form::Primal);
}

AssembledSystem assemble_dual(const CoefficientSet& coeffs, const MeshPtr& mesh, const AssemblyOptions& opts) {
  return assemble(coeffs, mesh, opts, Form::Dual);
}

SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs) {
  CoefficientSet zero;
  return assemble_operator(zero, mesh, dofs, Form::Primal).M;
}

Vector assemble_load(const ScalarField& f, const VectorField& F, const Mesh& mesh, const DofMap& dofs) {
  Vector b = Vector::Zero(dofs.size());
  load_integrals(f, F, mesh, [&](int vertex, double value) {
    const int row = dofs.vertex_to_dof[static_cast<std::size_t>(vertex)];
    if (row >= 0) b[row] += value;
  });
  return b;
}

Vector assemble_load_all_vertices(const ScalarField& f, const VectorField& F, const Mesh& mesh) {
  Vector b = Vector::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  load_integrals(f, F, mesh, [&](int vertex, double value) { b[vertex] += value; });
  return b;
}

CoefficientSet with_transposed_diffusion(const CoefficientSet& coeffs) {
  CoefficientSet out = coeffs;
  const MatrixField A = coeffs.A;
  out.A = MatrixField::from_sample([A](const SamplePoint& s) { return Mat2(A(s).transpose()); },
                                   "(" + A.description() + ")^T", A.singular_points());
  return out;
}

double max_mesh_peclet(const VectorField& B, const Mesh& mesh, double lambda) {
  double m = 0.0;
  for_each_quadrature_point(mesh, [&](const SamplePoint& s, double) {
    m = std::max(m, B(s).norm() * mesh.element_diameter(s.element) / (2.0 * lambda));
  });
  return m;
}

void write_coordinate_table(std::ostream& os, const SparseMatrix& matrix) {
  const auto old = os.precision(17);
  os << "row,col,value\n";
  for (int k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
      os << it.row() << ',' << it.col() << ',' << it.value() << '\n';
    }
  }
  os.precision(old);
}

void write_vector_table(std::ostream& os, const Vector& vector) {
  const auto old = os.precision(17);
  os << "row,value\n";
  for (Eigen::Index i = 0; i < vector.size(); ++i) os << i << ',' << vector[i] << '\n';
  os.precision(old);
}

}  // namespace roughfem
