#include "roughfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <string>
#include <utility>

namespace roughfem {

namespace {

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

Mesh::Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles, Rect domain)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), domain_(domain) {
  if (vertices_.empty() || triangles_.empty()) {
    throw MeshError("mesh must contain at least one triangle");
  }
  const int nv = static_cast<int>(vertices_.size());
  areas_.reserve(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) throw MeshError("triangle " + std::to_string(t) + " has an invalid vertex index");
    }
    const double a = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (!(a > 0.0)) {
      throw MeshError("triangle " + std::to_string(t) + " has non-positive signed area");
    }
    areas_.push_back(a);
  }
  build_topology();
  build_locator();
}

void Mesh::build_topology() {
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      ++edge_use[edge_key(tri[k], tri[(k + 1) % 3])];
    }
  }
  boundary_.assign(vertices_.size(), false);
  num_edges_ = edge_use.size();
  num_boundary_edges_ = 0;
  h_ = 0.0;
  for (const auto& [edge, count] : edge_use) {
    if (count > 2) throw MeshError("non-conforming mesh: an edge is shared by more than two triangles");
    if (count == 1) {
      ++num_boundary_edges_;
      boundary_[edge.first] = true;
      boundary_[edge.second] = true;
    }
    h_ = std::max(h_, distance(vertices_[edge.first], vertices_[edge.second]));
  }
}

void Mesh::build_locator() {
  double xmin = vertices_[0].x, xmax = xmin, ymin = vertices_[0].y, ymax = ymin;
  for (const auto& p : vertices_) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const auto n = static_cast<int>(std::max(1.0, std::ceil(std::sqrt(static_cast<double>(triangles_.size()) / 2.0))));
  grid_nx_ = n;
  grid_ny_ = n;
  grid_x0_ = xmin;
  grid_y0_ = ymin;
  grid_dx_ = std::max(xmax - xmin, 1e-300) / grid_nx_;
  grid_dy_ = std::max(ymax - ymin, 1e-300) / grid_ny_;
  buckets_.assign(static_cast<std::size_t>(grid_nx_ * grid_ny_), {});
  auto clamp_ix = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - grid_x0_) / grid_dx_)), 0, grid_nx_ - 1); };
  auto clamp_iy = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - grid_y0_) / grid_dy_)), 0, grid_ny_ - 1); };
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    double bx0 = vertices_[tri[0]].x, bx1 = bx0, by0 = vertices_[tri[0]].y, by1 = by0;
    for (int k = 1; k < 3; ++k) {
      bx0 = std::min(bx0, vertices_[tri[k]].x);
      bx1 = std::max(bx1, vertices_[tri[k]].x);
      by0 = std::min(by0, vertices_[tri[k]].y);
      by1 = std::max(by1, vertices_[tri[k]].y);
    }
    for (int iy = clamp_iy(by0); iy <= clamp_iy(by1); ++iy) {
      for (int ix = clamp_ix(bx0); ix <= clamp_ix(bx1); ++ix) {
        buckets_[static_cast<std::size_t>(iy * grid_nx_ + ix)].push_back(static_cast<int>(t));
      }
    }
  }
}

double Mesh::element_diameter(int t) const {
  const auto& tri = triangle(t);
  return std::max({distance(vertex(tri[0]), vertex(tri[1])), distance(vertex(tri[1]), vertex(tri[2])),
                   distance(vertex(tri[2]), vertex(tri[0]))});
}

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

std::array<std::array<double, 2>, 3> Mesh::hat_gradients(int t) const {
  const auto& tri = triangle(t);
  const Point2& a = vertex(tri[0]);
  const Point2& b = vertex(tri[1]);
  const Point2& c = vertex(tri[2]);
  const double two_area = 2.0 * area(t);
  return {{{(b.y - c.y) / two_area, (c.x - b.x) / two_area},
           {(c.y - a.y) / two_area, (a.x - c.x) / two_area},
           {(a.y - b.y) / two_area, (b.x - a.x) / two_area}}};
}

Point2 Mesh::map_to_physical(int t, const std::array<double, 3>& bary) const {
  const auto& tri = triangle(t);
  Point2 p;
  for (int k = 0; k < 3; ++k) {
    p.x += bary[k] * vertex(tri[k]).x;
    p.y += bary[k] * vertex(tri[k]).y;
  }
  return p;
}

std::optional<Location> Mesh::locate(const Point2& p) const {
  const int ix = static_cast<int>(std::floor((p.x - grid_x0_) / grid_dx_));
  const int iy = static_cast<int>(std::floor((p.y - grid_y0_) / grid_dy_));
  constexpr double tol = 1e-12;
  for (int jy = std::max(iy - 1, 0); jy <= std::min(iy + 1, grid_ny_ - 1); ++jy) {
    for (int jx = std::max(ix - 1, 0); jx <= std::min(ix + 1, grid_nx_ - 1); ++jx) {
      for (int t : buckets_[static_cast<std::size_t>(jy * grid_nx_ + jx)]) {
        const auto& tri = triangle(t);
        const double a = area(t);
        std::array<double, 3> bary{signed_area(p, vertex(tri[1]), vertex(tri[2])) / a,
                                   signed_area(vertex(tri[0]), p, vertex(tri[2])) / a,
                                   signed_area(vertex(tri[0]), vertex(tri[1]), p) / a};
        if (bary[0] >= -tol && bary[1] >= -tol && bary[2] >= -tol) {
          return Location{t, bary};
        }
      }
    }
  }
  return std::nullopt;
}

MeshPtr build_structured_mesh(int nx, int ny, const Rect& rect) {
  if (nx < 1 || ny < 1) {
    throw MeshError("structured mesh needs nx >= 1 and ny >= 1 (got " + std::to_string(nx) + ", " +
                    std::to_string(ny) + ")");
  }
  if (!(rect.width() > 0.0) || !(rect.height() > 0.0)) {
    throw MeshError("structured mesh needs a rectangle with positive side lengths");
  }
  std::vector<Point2> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    // pin the last row/column to the rectangle edge exactly
    const double y = (j == ny) ? rect.y1 : rect.y0 + rect.height() * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? rect.x1 : rect.x0 + rect.width() * i / nx;
      vertices.push_back({x, y});
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return std::make_shared<const Mesh>(std::move(vertices), std::move(triangles), rect);
}

MeshPtr refine_uniform(const Mesh& mesh) {
  std::vector<Point2> vertices = mesh.vertices();
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Point2& pa = mesh.vertex(a);
    const Point2& pb = mesh.vertex(b);
    vertices.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    const int id = static_cast<int>(vertices.size()) - 1;
    midpoint.emplace(key, id);
    return id;
  };
  std::vector<Triangle> triangles;
  triangles.reserve(4 * mesh.num_triangles());
  for (const auto& tri : mesh.triangles()) {
    const int a = tri[0], b = tri[1], c = tri[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    triangles.push_back({a, ab, ca});
    triangles.push_back({ab, b, bc});
    triangles.push_back({ca, bc, c});
    triangles.push_back({ab, bc, ca});
  }
  return std::make_shared<const Mesh>(std::move(vertices), std::move(triangles), mesh.domain());
}

std::optional<Rect> shrink_domain(const Rect& rect, double eps) {
  if (!(eps > 0.0)) throw MeshError("shrink_domain needs eps > 0");
  if (eps >= 0.5 * std::min(rect.width(), rect.height())) return std::nullopt;
  return Rect{rect.x0 + eps, rect.y0 + eps, rect.x1 - eps, rect.y1 - eps};
}

void write_mesh_table(std::ostream& os, const Mesh& mesh) {
  const auto old_precision = os.precision(17);
  os << "# vertices " << mesh.num_vertices() << "\n";
  os << "id,x,y,boundary\n";
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const auto& p = mesh.vertices()[i];
    os << i << ',' << p.x << ',' << p.y << ',' << (mesh.boundary_flags()[i] ? 1 : 0) << '\n';
  }
  os << "# triangles " << mesh.num_triangles() << "\n";
  os << "id,v0,v1,v2\n";
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    os << t << ',' << tri[0] << ',' << tri[1] << ',' << tri[2] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace roughfem
