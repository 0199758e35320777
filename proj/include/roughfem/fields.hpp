#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughfem/mesh.hpp"
#include "roughfem/quadrature.hpp"

namespace roughfem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

class FieldEvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A violated clause of the standing coefficient assumptions.
class AssumptionViolation : public std::invalid_argument {
 public:
  AssumptionViolation(std::string clause, const std::string& detail)
      : std::invalid_argument(clause + ": " + detail), clause_(std::move(clause)) {}
  const std::string& clause() const { return clause_; }

 private:
  std::string clause_;
};

enum class FieldKind { Analytic, PerElement, Nodal };

namespace detail {
inline bool all_finite(double v) { return std::isfinite(v); }
inline bool all_finite(const Vec2& v) { return v.allFinite(); }
inline bool all_finite(const Mat2& v) { return v.allFinite(); }
inline double apply_cap(double v, double cap) { return std::clamp(v, -cap, cap); }
inline Vec2 apply_cap(const Vec2& v, double cap) {
  const double n = v.norm();
  return n > cap ? Vec2(v * (cap / n)) : v;
}
inline Mat2 apply_cap(const Mat2& v, double cap) { return v.cwiseMax(-cap).cwiseMin(cap); }
template <class T>
T zero_value() {
  if constexpr (std::is_same_v<T, double>) {
    return 0.0;
  } else {
    return T::Zero();
  }
}
}  // namespace detail

/// Coefficient or data field on the plane.
///
/// Three kinds are supported: analytic closed forms (optionally declaring a
/// finite set of singular points where evaluation is refused), per-element
/// constants and per-vertex nodal values with linear interpolation. Fields are
/// immutable and cheap to copy.
template <class T>
class Field {
 public:
  using SampleFn = std::function<T(const SamplePoint&)>;

  /// The zero field.
  Field() : Field(constant(detail::zero_value<T>(), "0")) {}

  static Field constant(const T& value, std::string description = {}) {
    Field f{Raw{}};
    f.kind_ = FieldKind::Analytic;
    f.fn_ = [value](const SamplePoint&) { return value; };
    f.description_ = description.empty() ? "constant" : std::move(description);
    f.is_zero_ = is_zero_value(value);
    return f;
  }

  static Field analytic(std::function<T(const Point2&)> fn, std::string description,
                        std::vector<Point2> singular = {}) {
    Field f{Raw{}};
    f.kind_ = FieldKind::Analytic;
    f.fn_ = [fn = std::move(fn)](const SamplePoint& s) { return fn(s.x); };
    f.description_ = std::move(description);
    f.singular_ = std::move(singular);
    return f;
  }

  /// Analytic field with access to the element context (used for composites of
  /// finite-element functions and closed forms).
  static Field from_sample(SampleFn fn, std::string description, std::vector<Point2> singular = {}) {
    Field f{Raw{}};
    f.kind_ = FieldKind::Analytic;
    f.fn_ = std::move(fn);
    f.description_ = std::move(description);
    f.singular_ = std::move(singular);
    return f;
  }

  static Field per_element(MeshPtr mesh, std::vector<T> values, std::string description = "per-element") {
    if (values.size() != mesh->num_triangles()) {
      throw std::invalid_argument("per-element field needs one value per triangle");
    }
    Field f{Raw{}};
    f.kind_ = FieldKind::PerElement;
    f.mesh_ = std::move(mesh);
    f.values_ = std::make_shared<const std::vector<T>>(std::move(values));
    f.description_ = std::move(description);
    return f;
  }

  static Field nodal(MeshPtr mesh, std::vector<T> values, std::string description = "nodal") {
    if (values.size() != mesh->num_vertices()) {
      throw std::invalid_argument("nodal field needs one value per vertex");
    }
    Field f{Raw{}};
    f.kind_ = FieldKind::Nodal;
    f.mesh_ = std::move(mesh);
    f.values_ = std::make_shared<const std::vector<T>>(std::move(values));
    f.description_ = std::move(description);
    return f;
  }

  T operator()(const SamplePoint& s) const {
    for (const auto& p : singular_) {
      if (std::hypot(s.x.x - p.x, s.x.y - p.y) <= 1e-13 * (1.0 + std::hypot(p.x, p.y))) {
        throw FieldEvaluationError("field '" + description_ + "' evaluated at a declared singular point (" +
                                   std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
      }
    }
    T v = evaluate(s);
    if (!detail::all_finite(v)) {
      throw FieldEvaluationError("field '" + description_ + "' is not finite at (" + std::to_string(s.x.x) + ", " +
                                 std::to_string(s.x.y) + ")");
    }
    if (cap_) v = detail::apply_cap(v, *cap_);
    return v;
  }

  /// Evaluation at an arbitrary point (nodal/per-element kinds locate the point first).
  T at(const Point2& p) const { return (*this)(SamplePoint{p, nullptr, -1, {}}); }

  /// Same field with values clamped to magnitude <= cap (stress tests only).
  Field with_cap(double cap) const {
    Field f = *this;
    f.cap_ = cap;
    f.description_ += " [cap " + std::to_string(cap) + "]";
    return f;
  }

  FieldKind kind() const { return kind_; }
  const std::string& description() const { return description_; }
  const std::vector<Point2>& singular_points() const { return singular_; }
  const MeshPtr& mesh() const { return mesh_; }
  const std::vector<T>& values() const {
    static const std::vector<T> empty;
    return values_ ? *values_ : empty;
  }
  /// True only for fields built as an exact zero constant.
  bool is_zero() const { return is_zero_; }

 private:
  struct Raw {};
  explicit Field(Raw) {}

  static bool is_zero_value(const T& v) {
    if constexpr (std::is_same_v<T, double>) {
      return v == 0.0;
    } else {
      return v.isZero(0.0);
    }
  }

  T evaluate(const SamplePoint& s) const {
    switch (kind_) {
      case FieldKind::Analytic:
        return fn_(s);
      case FieldKind::PerElement: {
        if (s.mesh == mesh_.get() && s.element >= 0) return (*values_)[static_cast<std::size_t>(s.element)];
        const auto loc = mesh_->locate(s.x);
        if (!loc) throw FieldEvaluationError("point outside the mesh of field '" + description_ + "'");
        return (*values_)[static_cast<std::size_t>(loc->element)];
      }
      case FieldKind::Nodal: {
        int element = s.element;
        std::array<double, 3> bary = s.bary;
        if (s.mesh != mesh_.get() || element < 0) {
          const auto loc = mesh_->locate(s.x);
          if (!loc) throw FieldEvaluationError("point outside the mesh of field '" + description_ + "'");
          element = loc->element;
          bary = loc->bary;
        }
        const auto& tri = mesh_->triangle(element);
        T v = bary[0] * (*values_)[static_cast<std::size_t>(tri[0])];
        v += bary[1] * (*values_)[static_cast<std::size_t>(tri[1])];
        v += bary[2] * (*values_)[static_cast<std::size_t>(tri[2])];
        return v;
      }
    }
    throw FieldEvaluationError("unknown field kind");
  }

  FieldKind kind_ = FieldKind::Analytic;
  SampleFn fn_;
  MeshPtr mesh_;
  std::shared_ptr<const std::vector<T>> values_;
  std::string description_;
  std::vector<Point2> singular_;
  std::optional<double> cap_;
  bool is_zero_ = false;
};

using ScalarField = Field<double>;
using VectorField = Field<Vec2>;
using MatrixField = Field<Mat2>;

/// Problem data of the Dirichlet problem
///   -div(A grad u) + <B, grad u> + (c + alpha) u = f - div F,  u = 0 on the boundary,
/// together with the structural constants it is declared to satisfy.
struct CoefficientSet {
  MatrixField A = MatrixField::constant(Mat2::Identity(), "identity");
  VectorField B = VectorField::constant(Vec2::Zero(), "0");
  ScalarField c = ScalarField::constant(0.0, "0");
  double alpha = 0.0;
  ScalarField f = ScalarField::constant(0.0, "0");
  VectorField F = VectorField::constant(Vec2::Zero(), "0");
  double lambda = 1.0;
  double Lambda = 1.0;
  /// Lower Sobolev exponent; arbitrary in (1, 2) for d = 2.
  double two_star = 1.5;
  /// Integrability exponent for the boundedness estimates, q > d/2 and q >= two_star.
  double q = 2.0;

  /// Checks the scalar parameters (alpha, lambda, Lambda, exponents); throws AssumptionViolation.
  void validate_parameters() const;
  std::string fingerprint() const;
};

/// Outcome of a pointwise or per-node validation.
struct ValidationReport {
  bool pass = true;
  double worst_value = 0.0;
  Point2 worst_point{};
  std::string detail;
};

/// Smallest eigenvalue of (A + A^T)/2 >= lambda and max |a_ij| <= Lambda at every quadrature point.
ValidationReport check_ellipticity(const MatrixField& A, const Mesh& mesh, double lambda, double Lambda);

/// Minimum over interior hat functions phi_i of the quadrature value of int <B, grad phi_i>.
/// Passes iff that minimum is >= -tol. With `region`, only nodes whose hat support lies
/// inside the region are tested.
ValidationReport check_weak_divergence(const VectorField& B, const Mesh& mesh, double tol,
                                       const std::optional<Rect>& region = std::nullopt);

/// c >= 0 at every quadrature point.
ValidationReport check_nonnegative(const ScalarField& c, const Mesh& mesh);

/// B(x) = -(x - center) |x - center|^{-gamma}, 1 < gamma < 2; center is declared singular.
VectorField make_singular_drift(double gamma, const Point2& center);

/// scale * |x - center|^{-exponent}; center is declared singular.
ScalarField make_radial_power(double exponent, const Point2& center, double scale = 1.0);

/// Standard bump exp(-1/(1 - |z|^2)) on the unit disk (unnormalised).
double bump_kernel(double z_squared);

/// Zero extension of `field` outside mesh.domain() convolved with the unit-mass bump of
/// radius delta / (2 n), sampled at the mesh vertices. The convolution uses a midpoint
/// rule on a 16 x 16 sub-grid of the kernel support, normalised to discrete unit mass.
ScalarField mollify_field(const ScalarField& field, int n, double delta, const MeshPtr& mesh);
VectorField mollify_field(const VectorField& field, int n, double delta, const MeshPtr& mesh);

/// Quadrature approximation of the L^p norm; p = infinity gives the quadrature-point max.
double lp_norm(const ScalarField& field, double p, const Mesh& mesh);
/// L^p norm of the Euclidean length of a vector field.
double lp_norm(const VectorField& field, double p, const Mesh& mesh);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Piecewise-linear finite-element function with the given vertex values.
ScalarField fe_function(const MeshPtr& mesh, const Eigen::VectorXd& vertex_values, std::string description = "u_h");
/// Gradient of a piecewise-linear function (constant per element).
VectorField fe_gradient(const MeshPtr& mesh, const Eigen::VectorXd& vertex_values, std::string description = "grad u_h");

/// Pointwise difference a - b.
ScalarField difference(const ScalarField& a, const ScalarField& b);
VectorField difference(const VectorField& a, const VectorField& b);

}  // namespace roughfem
