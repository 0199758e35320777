#pragma once

#include <array>
#include <vector>

#include "roughfem/mesh.hpp"

namespace roughfem {

/// One point of a triangle rule in barycentric coordinates; weights sum to 1.
struct QuadraturePoint {
  std::array<double, 3> bary;
  double weight;
};

/// Symmetric 6-point rule, exact for polynomials of total degree <= 4.
/// Every integral in the library goes through this rule.
const std::array<QuadraturePoint, 6>& triangle_rule();

inline constexpr int kQuadratureDegree = 4;

/// A quadrature point placed on a concrete element.
struct SamplePoint {
  Point2 x;
  const Mesh* mesh = nullptr;
  int element = -1;
  std::array<double, 3> bary{};
};

/// Calls fn(sample, weight * area) for every quadrature point of every element.
template <class Fn>
void for_each_quadrature_point(const Mesh& mesh, Fn&& fn) {
  const auto& rule = triangle_rule();
  const int nt = static_cast<int>(mesh.num_triangles());
  for (int t = 0; t < nt; ++t) {
    const double a = mesh.area(t);
    for (const auto& qp : rule) {
      SamplePoint s{mesh.map_to_physical(t, qp.bary), &mesh, t, qp.bary};
      fn(s, qp.weight * a);
    }
  }
}

}  // namespace roughfem
