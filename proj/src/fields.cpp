#include "roughfem/fields.hpp"

#include <cmath>
#include <sstream>

namespace roughfem {

void CoefficientSet::validate_parameters() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw AssumptionViolation("zero-order constant", "alpha must be finite and >= 0");
  }
  if (!(lambda > 0.0) || !(Lambda > 0.0)) {
    throw AssumptionViolation("ellipticity", "lambda and Lambda must be positive");
  }
  if (!(two_star > 1.0 && two_star < 2.0)) {
    throw AssumptionViolation("lower Sobolev exponent", "two_star must lie in (1, 2) in two dimensions");
  }
  if (!(q > 1.0)) {
    throw AssumptionViolation("integrability exponent", "q must exceed d/2 = 1");
  }
  if (!(q >= two_star)) {
    throw AssumptionViolation("integrability exponent", "q must be >= two_star");
  }
}

std::string CoefficientSet::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  os << "A=" << A.description() << ";B=" << B.description() << ";c=" << c.description() << ";alpha=" << alpha
     << ";f=" << f.description() << ";F=" << F.description();
  return os.str();
}

ValidationReport check_ellipticity(const MatrixField& A, const Mesh& mesh, double lambda, double Lambda) {
  ValidationReport report;
  double worst_eig = std::numeric_limits<double>::infinity();
  double worst_entry = 0.0;
  Point2 eig_point{}, entry_point{};
  for_each_quadrature_point(mesh, [&](const SamplePoint& s, double) {
    const Mat2 a = A(s);
    const double m = 0.5 * (a(0, 0) + a(1, 1));
    const double off = 0.5 * (a(0, 1) + a(1, 0));
    const double r = std::hypot(0.5 * (a(0, 0) - a(1, 1)), off);
    const double min_eig = m - r;
    if (min_eig < worst_eig) {
      worst_eig = min_eig;
      eig_point = s.x;
    }
    const double max_entry = a.cwiseAbs().maxCoeff();
    if (max_entry > worst_entry) {
      worst_entry = max_entry;
      entry_point = s.x;
    }
  });
  const bool eig_ok = worst_eig >= lambda - 1e-12;
  const bool entry_ok = worst_entry <= Lambda + 1e-12;
  report.pass = eig_ok && entry_ok;
  std::ostringstream os;
  os.precision(17);
  if (!eig_ok || entry_ok) {
    report.worst_value = worst_eig;
    report.worst_point = eig_point;
  } else {
    report.worst_value = worst_entry;
    report.worst_point = entry_point;
  }
  os << "min eigenvalue of symmetric part " << worst_eig << " (lambda " << lambda << "), max |a_ij| " << worst_entry
     << " (Lambda " << Lambda << ")";
  report.detail = os.str();
  return report;
}

ValidationReport check_weak_divergence(const VectorField& B, const Mesh& mesh, double tol,
                                       const std::optional<Rect>& region) {
  std::vector<double> integral(mesh.num_vertices(), 0.0);
  const auto& rule = triangle_rule();
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto grads = mesh.hat_gradients(t);
    const auto& tri = mesh.triangle(t);
    const double a = mesh.area(t);
    for (const auto& qp : rule) {
      const SamplePoint s{mesh.map_to_physical(t, qp.bary), &mesh, t, qp.bary};
      const Vec2 b = B(s);
      for (int k = 0; k < 3; ++k) {
        integral[static_cast<std::size_t>(tri[k])] += qp.weight * a * (b[0] * grads[k][0] + b[1] * grads[k][1]);
      }
    }
  }
  std::vector<bool> eligible(mesh.num_vertices(), true);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) eligible[v] = !mesh.boundary_flags()[v];
  if (region) {
    for (const auto& tri : mesh.triangles()) {
      bool inside = true;
      for (int v : tri) inside = inside && region->contains(mesh.vertex(v), 1e-12);
      if (!inside) {
        for (int v : tri) eligible[static_cast<std::size_t>(v)] = false;
      }
    }
  }
  ValidationReport report;
  report.worst_value = std::numeric_limits<double>::infinity();
  std::size_t tested = 0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (!eligible[v]) continue;
    ++tested;
    if (integral[v] < report.worst_value) {
      report.worst_value = integral[v];
      report.worst_point = mesh.vertices()[v];
    }
  }
  if (tested == 0) report.worst_value = 0.0;
  report.pass = report.worst_value >= -tol;
  std::ostringstream os;
  os.precision(17);
  os << "min over " << tested << " hat functions of int <B, grad phi> = " << report.worst_value << " (tol " << tol
     << ")";
  report.detail = os.str();
  return report;
}

ValidationReport check_nonnegative(const ScalarField& c, const Mesh& mesh) {
  ValidationReport report;
  report.worst_value = std::numeric_limits<double>::infinity();
  for_each_quadrature_point(mesh, [&](const SamplePoint& s, double) {
    const double v = c(s);
    if (v < report.worst_value) {
      report.worst_value = v;
      report.worst_point = s.x;
    }
  });
  report.pass = report.worst_value >= 0.0;
  report.detail = "min over quadrature points = " + std::to_string(report.worst_value);
  return report;
}

VectorField make_singular_drift(double gamma, const Point2& center) {
  if (!(gamma > 1.0 && gamma < 2.0)) {
    throw std::invalid_argument("singular drift exponent gamma must lie in (1, 2)");
  }
  std::ostringstream os;
  os.precision(17);
  os << "-(x-x0)|x-x0|^-" << gamma << " at (" << center.x << "," << center.y << ")";
  return VectorField::analytic(
      [gamma, center](const Point2& p) {
        const Vec2 d(p.x - center.x, p.y - center.y);
        return Vec2(-d * std::pow(d.norm(), -gamma));
      },
      os.str(), {center});
}

ScalarField make_radial_power(double exponent, const Point2& center, double scale) {
  std::ostringstream os;
  os.precision(17);
  os << scale << "*|x-x0|^-" << exponent << " at (" << center.x << "," << center.y << ")";
  return ScalarField::analytic(
      [exponent, center, scale](const Point2& p) {
        return scale * std::pow(std::hypot(p.x - center.x, p.y - center.y), -exponent);
      },
      os.str(), {center});
}

double bump_kernel(double z_squared) {
  if (z_squared >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - z_squared));
}

namespace {

template <class T>
Field<T> mollify_impl(const Field<T>& field, int n, double delta, const MeshPtr& mesh) {
  if (n < 1) throw std::invalid_argument("mollification index n must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("mollification parameter delta must be positive");
  const Rect domain = mesh->domain();
  if (!shrink_domain(domain, delta)) {
    throw std::invalid_argument("mollification parameter delta leaves an empty shrunk domain");
  }
  constexpr int kSub = 16;
  const double radius = delta / (2.0 * n);
  const double cell = 2.0 * radius / kSub;

  // discrete kernel weights on the sub-grid (identical for every vertex)
  std::vector<double> weights(kSub * kSub);
  double mass = 0.0;
  for (int j = 0; j < kSub; ++j) {
    for (int i = 0; i < kSub; ++i) {
      const double zx = -1.0 + (i + 0.5) * 2.0 / kSub;
      const double zy = -1.0 + (j + 0.5) * 2.0 / kSub;
      const double w = bump_kernel(zx * zx + zy * zy);
      weights[j * kSub + i] = w;
      mass += w;
    }
  }

  const auto& singular = field.singular_points();
  std::vector<T> values(mesh->num_vertices(), detail::zero_value<T>());
  for (std::size_t v = 0; v < mesh->num_vertices(); ++v) {
    const Point2 x = mesh->vertices()[v];
    T acc = detail::zero_value<T>();
    for (int j = 0; j < kSub; ++j) {
      for (int i = 0; i < kSub; ++i) {
        const double w = weights[j * kSub + i];
        if (w == 0.0) continue;
        const Point2 y{x.x - radius + (i + 0.5) * cell, x.y - radius + (j + 0.5) * cell};
        if (!domain.contains(y)) continue;
        bool near_singular = false;
        for (const auto& p : singular) near_singular = near_singular || std::hypot(y.x - p.x, y.y - p.y) < 1e-12;
        if (near_singular) continue;
        acc += w * field.at(y);
      }
    }
    values[v] = acc / mass;
  }
  std::ostringstream os;
  os.precision(17);
  os << "mollified[" << field.description() << "; n=" << n << ", delta=" << delta << "]";
  return Field<T>::nodal(mesh, std::move(values), os.str());
}

template <class T>
double magnitude(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::abs(v);
  } else {
    return v.norm();
  }
}

template <class T>
double lp_norm_impl(const Field<T>& field, double p, const Mesh& mesh) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p in [1, infinity]");
  if (std::isinf(p)) {
    double m = 0.0;
    for_each_quadrature_point(mesh, [&](const SamplePoint& s, double) { m = std::max(m, magnitude(field(s))); });
    return m;
  }
  double sum = 0.0;
  for_each_quadrature_point(mesh, [&](const SamplePoint& s, double w) {
    const double a = magnitude(field(s));
    sum += w * (p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p)));
  });
  if (p == 1.0) return sum;
  if (p == 2.0) return std::sqrt(sum);
  return std::pow(sum, 1.0 / p);
}

}  // namespace

ScalarField mollify_field(const ScalarField& field, int n, double delta, const MeshPtr& mesh) {
  return mollify_impl(field, n, delta, mesh);
}

VectorField mollify_field(const VectorField& field, int n, double delta, const MeshPtr& mesh) {
  return mollify_impl(field, n, delta, mesh);
}

double lp_norm(const ScalarField& field, double p, const Mesh& mesh) { return lp_norm_impl(field, p, mesh); }

double lp_norm(const VectorField& field, double p, const Mesh& mesh) { return lp_norm_impl(field, p, mesh); }

ScalarField fe_function(const MeshPtr& mesh, const Eigen::VectorXd& vertex_values, std::string description) {
  if (static_cast<std::size_t>(vertex_values.size()) != mesh->num_vertices()) {
    throw std::invalid_argument("finite-element function needs one value per vertex");
  }
  return ScalarField::nodal(mesh, std::vector<double>(vertex_values.begin(), vertex_values.end()),
                            std::move(description));
}

VectorField fe_gradient(const MeshPtr& mesh, const Eigen::VectorXd& vertex_values, std::string description) {
  if (static_cast<std::size_t>(vertex_values.size()) != mesh->num_vertices()) {
    throw std::invalid_argument("finite-element function needs one value per vertex");
  }
  std::vector<Vec2> grads(mesh->num_triangles());
  for (int t = 0; t < static_cast<int>(mesh->num_triangles()); ++t) {
    const auto g = mesh->hat_gradients(t);
    const auto& tri = mesh->triangle(t);
    Vec2 acc = Vec2::Zero();
    for (int k = 0; k < 3; ++k) acc += vertex_values[tri[k]] * Vec2(g[k][0], g[k][1]);
    grads[static_cast<std::size_t>(t)] = acc;
  }
  return VectorField::per_element(mesh, std::move(grads), std::move(description));
}

ScalarField difference(const ScalarField& a, const ScalarField& b) {
  auto singular = a.singular_points();
  singular.insert(singular.end(), b.singular_points().begin(), b.singular_points().end());
  return ScalarField::from_sample([a, b](const SamplePoint& s) { return a(s) - b(s); },
                                  "(" + a.description() + ")-(" + b.description() + ")", std::move(singular));
}

VectorField difference(const VectorField& a, const VectorField& b) {
  auto singular = a.singular_points();
  singular.insert(singular.end(), b.singular_points().begin(), b.singular_points().end());
  return VectorField::from_sample([a, b](const SamplePoint& s) { return Vec2(a(s) - b(s)); },
                                  "(" + a.description() + ")-(" + b.description() + ")", std::move(singular));
}

}  // namespace roughfem
