#include "roughfem/quadrature.hpp"

namespace roughfem {

const std::array<QuadraturePoint, 6>& triangle_rule() {
  constexpr double a = 0.445948490915964886318329253883;
  constexpr double b = 0.0915762135097707434595714634022;
  constexpr double wa = 0.223381589678011465695007008433;
  constexpr double wb = 0.1099517436553218676383263249;
  static const std::array<QuadraturePoint, 6> rule{{
      {{a, a, 1.0 - 2.0 * a}, wa},
      {{a, 1.0 - 2.0 * a, a}, wa},
      {{1.0 - 2.0 * a, a, a}, wa},
      {{b, b, 1.0 - 2.0 * b}, wb},
      {{b, 1.0 - 2.0 * b, b}, wb},
      {{1.0 - 2.0 * b, b, b}, wb},
  }};
  return rule;
}

}  // namespace roughfem
