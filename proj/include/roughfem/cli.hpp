#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughfem/expression.hpp"
#include "roughfem/fields.hpp"
#include "roughfem/mesh.hpp"

namespace roughfem {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Run configuration read from a flat "key = value" file ('#' starts a comment line).
///
/// Keys (all optional):
///   subcommand        solve | mms | verify | stability | resolvent | constants
///   domain            x0,y0,x1,y1
///   mesh              cells per side of the structured mesh
///   A11 A12 A21 A22   diffusion matrix entries (expressions in x, y)
///   B1 B2             drift components
///   c f               zero-order coefficient and source
///   F1 F2             divergence-form source
///   singular          points "x,y; x,y" where the fields are declared singular
///   alpha lambda Lambda two_star q
///   r                 exponents for the L^r checks, "inf" allowed
///   seed suite        random suite seed and number of random cases (0 = none)
///   slack tol         relative slack of bound checks, tolerance of identity checks
///   levels case       mesh sizes and manufactured case for mms
///   n_max delta threshold   stability sweep schedule and final relative threshold
///   alphas continuity_threshold   resolvent sweep values and final L^1 error threshold
///   output            output directory
struct RunConfig {
  std::string subcommand;
  Rect domain = Rect::unit_square();
  int mesh = 64;
  Expression A11 = Expression::constant(1.0), A12, A21, A22 = Expression::constant(1.0);
  Expression B1, B2, c, f, F1, F2;
  std::vector<Point2> singular;
  double alpha = 1.0;
  double lambda = 1.0;
  double Lambda = 1.0;
  double two_star = 1.5;
  double q = 2.0;
  std::vector<double> r{1.0, 2.0, kInfinity};
  std::uint64_t seed = 1;
  int suite = 0;
  double slack = 0.02;
  double tol = 1e-9;
  std::vector<int> levels{16, 32, 64};
  std::string mms_case = "diffusion";
  int n_max = 16;
  double delta = 0.25;
  double threshold = 1e-3;
  std::vector<double> alphas{1.0, 10.0, 100.0, 1000.0, 10000.0};
  double continuity_threshold = 0.05;
  std::string output = "roughfem_out";

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  /// Every key in a fixed order, numbers with 17 significant digits, expressions
  /// fully parenthesised. parse(canonical()).canonical() == canonical().
  std::string canonical() const;

  /// Coefficient set described by the configuration.
  CoefficientSet coefficients() const;
};

/// Environment variable overriding the configured output directory.
inline constexpr const char* kOutputDirEnv = "ROUGHFEM_OUTPUT_DIR";

/// Entry point: `roughfem <subcommand> [--config FILE] [--out DIR] [--jobs N] ...`.
/// Returns 0 when every check passes, 2 when a check fails and 1 on usage or config errors.
int run(int argc, char** argv);

}  // namespace roughfem
