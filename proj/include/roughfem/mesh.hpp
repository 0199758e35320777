#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace roughfem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(const Point2& p, double tol = 0.0) const {
    return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
  }
  static Rect unit_square() { return {}; }
};

class MeshError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Triangle = std::array<int, 3>;

/// Result of locating a point: containing element and barycentric coordinates.
struct Location {
  int element = -1;
  std::array<double, 3> bary{};
};

/// Conforming triangulation with consistent counter-clockwise orientation.
///
/// Immutable after construction. Boundary vertices are those touching an edge
/// that belongs to exactly one triangle.
class Mesh {
 public:
  Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles, Rect domain);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  std::size_t num_boundary_edges() const { return num_boundary_edges_; }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Point2& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }
  const std::vector<bool>& boundary_flags() const { return boundary_; }
  bool is_boundary(int v) const { return boundary_[static_cast<std::size_t>(v)]; }
  const std::vector<double>& element_areas() const { return areas_; }
  double area(int t) const { return areas_[static_cast<std::size_t>(t)]; }

  /// Longest edge over the whole mesh.
  double diameter() const { return h_; }
  /// Longest edge of one element.
  double element_diameter(int t) const;
  double total_area() const;
  const Rect& domain() const { return domain_; }

  /// Gradients of the three barycentric hat functions of element t (constant per element).
  std::array<std::array<double, 2>, 3> hat_gradients(int t) const;

  /// Maps barycentric coordinates on element t to physical coordinates.
  Point2 map_to_physical(int t, const std::array<double, 3>& bary) const;

  /// Finds an element containing p (closed triangles, small tolerance).
  std::optional<Location> locate(const Point2& p) const;

 private:
  void build_topology();
  void build_locator();

  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  Rect domain_;
  std::vector<bool> boundary_;
  std::vector<double> areas_;
  double h_ = 0.0;
  std::size_t num_edges_ = 0;
  std::size_t num_boundary_edges_ = 0;

  // uniform bucket grid over the bounding box for point location
  int grid_nx_ = 1;
  int grid_ny_ = 1;
  double grid_x0_ = 0.0, grid_y0_ = 0.0, grid_dx_ = 1.0, grid_dy_ = 1.0;
  std::vector<std::vector<int>> buckets_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Structured mesh: nx * ny cells, each split along the lower-left to upper-right diagonal.
MeshPtr build_structured_mesh(int nx, int ny, const Rect& rect = Rect::unit_square());

/// Red refinement: every triangle is split into four by its edge midpoints.
MeshPtr refine_uniform(const Mesh& mesh);

/// Inner rectangle at distance eps from every side; empty when eps >= half the shorter side.
std::optional<Rect> shrink_domain(const Rect& rect, double eps);

/// Writes the vertex table and triangle table (see README for layout).
void write_mesh_table(std::ostream& os, const Mesh& mesh);

}  // namespace roughfem
