#pragma once

#include <iosfwd>
#include <stdexcept>

namespace roughfem {

/// Inputs shared by every constant.
struct EstimateParams {
  double lambda = 1.0;
  int d = 2;
  /// Integrability exponent of the boundedness estimate, q > d/2, q >= two_star.
  double q = 2.0;
  /// Lower Sobolev exponent; only used when d == 2 (fixed to 2d/(d+2) otherwise).
  double two_star = 1.5;
  double volume = 1.0;
};

/// Constants of the Moser iteration leading to the L-infinity bound.
struct MoserConstants {
  double d0 = 0.0;
  double sigma = 0.0;
  double s = 0.0;    // 2 d0 / (d0 - 2)
  double N1 = 0.0;   // Sobolev constant for the exponent s
  double K1 = 0.0;   // interpolation constant
  double theta = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
  double K4 = 0.0;
  double K5_exponent = 0.0;  // sum_{j >= 0} j / sigma^j = sigma / (sigma - 1)^2
  double K5 = 0.0;
  double K6 = 0.0;
  double C2 = 0.0;  // = K6
};

struct EstimateConstants {
  int d = 2;
  double q = 2.0;
  double two_star = 1.5;
  double two_star_conj = 3.0;  // upper Sobolev exponent
  double volume = 1.0;
  double lambda = 1.0;
  double N = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;  // |U|^{1/2} C1
  MoserConstants moser;
};

/// Lower Sobolev exponent: 2d/(d+2) for d >= 3, the given value in (1, 2) for d = 2.
double lower_sobolev_exponent(int d, double two_star);
/// Upper Sobolev exponent: 2d/(d-2) for d >= 3, two_star/(two_star - 1) for d = 2.
double upper_sobolev_exponent(int d, double two_star);

/// Sobolev constant: 2(d-1)/(d-2) for d >= 3, (2^*/2) |U|^{1/2^*} for d = 2.
double sobolev_N(int d, double two_star, double volume);

/// Energy constant: ||u||_{H^1_0} <= C1 (||f||_{L^{2_*}} + ||F||_{L^2}).
///
/// Testing the weak form with u gives
///   lambda |grad u|^2 <= (N^2 + 1) eps |grad u|^2 + (4 eps)^{-1} (|f|^2 + |F|^2),
/// and eps = lambda / (2 (N^2 + 1)) yields |grad u| <= sqrt(N^2 + 1)/lambda (|f| + |F|).
/// Hoelder plus the Sobolev inequality bound |u|_2 <= |U|^{1/2 - 1/2^*} N |grad u|, so
///   C1 = sqrt(N^2 + 1) sqrt(1 + N^2 |U|^{1 - 2/2^*}) / lambda.
double energy_C1(double lambda, int d, double two_star, double volume);

/// The epsilon used in the energy argument, lambda / (2 (N^2 + 1)).
double energy_epsilon(double lambda, int d, double two_star, double volume);

/// Moser chain d0, sigma, K1..K6 and C2 = K6.
///
/// theta and K2 come from combining the Caccioppoli-type inequality
///   lambda b^{-1} |grad v|^2 <= (1 + b/lambda) |v|^2_{2q/(q-1)},  b = beta + 2 >= 2,
/// with the interpolation bound |v|_{2q/(q-1)} <= N1 eps |grad v| + (eps |U|^{1/s-1/2} + K1 eps^{-mu}) |v|_2,
/// mu = d0/(2q - d0), at eps = c0 / b, c0 = lambda / (2 N1 sqrt(lambda + 1)). Squaring and absorbing the
/// gradient term gives
///   |grad v|^2 <= (4 b / lambda) (1 + b / lambda) (eps a + K1 eps^{-mu})^2 |v|_2^2,
/// and with b >= 2: 1 + b/lambda <= (1/2 + 1/lambda) b, eps a + K1 eps^{-mu} <= (c0 a + K1 c0^{-mu}) b^mu.
/// Hence theta = 2 + 2 mu = 4q / (2q - d0) and K2 = (4/lambda)(1/2 + 1/lambda)(c0 a + K1 c0^{-mu})^2.
MoserConstants moser_constants(double lambda, int d, double q, double two_star, double volume);

/// Every constant for one parameter set; throws std::invalid_argument on inadmissible input.
EstimateConstants compute_constants(const EstimateParams& params);

/// C2 (||f||_{L^q} + ||F||_{L^{2q}}).
double linf_bound(const EstimateConstants& constants, double f_norm_q, double F_norm_2q);

/// Perturbation sizes entering the L^1 stability bound.
struct StabilityTerms {
  double dB2 = 0.0;        // ||B - B_n||_{L^2}
  double dc = 0.0;         // ||c - c_n||_{L^{2_*}}
  double dA_grad_u = 0.0;  // ||(A_n - A) grad u||_{L^2}
  double df1 = 0.0;        // ||f - f_n||_{L^1}
  double dF2 = 0.0;        // ||F - F_n||_{L^2}
};

/// alpha^{-1} C4 (dB2 + N dc) + C3 dA_grad_u + alpha^{-1} df1 + C3 dF2 with
/// C4 = C1 (||f||_{L^{2_*}} + ||F||_{L^2}) and C3 = |U|^{1/2} C1.
double stability_rhs(const EstimateConstants& constants, const StabilityTerms& terms, double alpha,
                     double f_norm_2star, double F_norm_2);

/// Key-value table of all constants, 17 significant digits.
void write_constants_table(std::ostream& os, const EstimateConstants& constants);

}  // namespace roughfem
