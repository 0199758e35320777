#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <string>
#include <vector>

#include "roughfem/fields.hpp"
#include "roughfem/mesh.hpp"

namespace roughfem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Numbering of the interior (non-Dirichlet) vertices.
struct DofMap {
  std::vector<int> vertex_to_dof;  // -1 on boundary vertices
  std::vector<int> dof_to_vertex;

  int size() const { return static_cast<int>(dof_to_vertex.size()); }
  /// Interior vector -> vertex vector with zero boundary values.
  Vector prolong(const Vector& interior) const;
  /// Vertex vector -> interior vector (boundary values dropped).
  Vector restrict_to_interior(const Vector& all) const;
};

DofMap interior_dofs(const Mesh& mesh);

struct AssemblyOptions {
  /// Assemble even if a coefficient validator fails.
  bool skip_validation = false;
  double divergence_tol = 1e-10;
};

/// Discrete operator, mass matrix and load over the interior vertices.
struct AssembledSystem {
  SparseMatrix K;
  SparseMatrix M;
  Vector b;
  double alpha = 0.0;
  MeshPtr mesh;
  DofMap dofs;
  std::string fingerprint;
  std::vector<std::string> warnings;
};

/// Throws AssumptionViolation naming the failed clause (ellipticity, drift divergence sign,
/// nonnegative zero-order term, exponents).
void validate_coefficients(const CoefficientSet& coeffs, const Mesh& mesh, double divergence_tol = 1e-10);

/// K_ij = int <A grad phi_j, grad phi_i> + <B, grad phi_j> phi_i + (c + alpha) phi_j phi_i.
AssembledSystem assemble_primal(const CoefficientSet& coeffs, const MeshPtr& mesh, const AssemblyOptions& opts = {});

/// D_ij = int <A grad phi_j, grad phi_i> + phi_j <B, grad phi_i> + (c + alpha) phi_j phi_i.
AssembledSystem assemble_dual(const CoefficientSet& coeffs, const MeshPtr& mesh, const AssemblyOptions& opts = {});

/// Mass matrix over the interior vertices.
SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs);

/// b_i = int f phi_i + <F, grad phi_i> over the interior vertices.
Vector assemble_load(const ScalarField& f, const VectorField& F, const Mesh& mesh, const DofMap& dofs);

/// Same integrals for every vertex, boundary included (diagnostics only).
Vector assemble_load_all_vertices(const ScalarField& f, const VectorField& F, const Mesh& mesh);

/// The same coefficient set with A replaced by its transpose.
CoefficientSet with_transposed_diffusion(const CoefficientSet& coeffs);

/// max over quadrature points of |B| h_T / (2 lambda).
double max_mesh_peclet(const VectorField& B, const Mesh& mesh, double lambda);

/// Coordinate format: header "row,col,value", one line per stored entry.
void write_coordinate_table(std::ostream& os, const SparseMatrix& matrix);
/// Header "row,value".
void write_vector_table(std::ostream& os, const Vector& vector);

}  // namespace roughfem
