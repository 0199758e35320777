#include "roughfem/estimates.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace roughfem {

namespace {

void require_dimension(int d) {
  if (d < 2) throw std::invalid_argument("dimension d must be >= 2 (got " + std::to_string(d) + ")");
}

void require_volume(double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume)) throw std::invalid_argument("domain volume must be positive");
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
}

}  // namespace

double lower_sobolev_exponent(int d, double two_star) {
  require_dimension(d);
  if (d >= 3) return 2.0 * d / (d + 2.0);
  if (!(two_star > 1.0 && two_star < 2.0)) {
    throw std::invalid_argument("two_star must lie in (1, 2) when d = 2");
  }
  return two_star;
}

double upper_sobolev_exponent(int d, double two_star) {
  require_dimension(d);
  if (d >= 3) return 2.0 * d / (d - 2.0);
  const double ts = lower_sobolev_exponent(d, two_star);
  return ts / (ts - 1.0);
}

double sobolev_N(int d, double two_star, double volume) {
  require_dimension(d);
  require_volume(volume);
  if (d >= 3) return 2.0 * (d - 1.0) / (d - 2.0);
  const double upper = upper_sobolev_exponent(d, two_star);
  return 0.5 * upper * std::pow(volume, 1.0 / upper);
}

double energy_epsilon(double lambda, int d, double two_star, double volume) {
  require_lambda(lambda);
  const double N = sobolev_N(d, two_star, volume);
  return lambda / (2.0 * (N * N + 1.0));
}

double energy_C1(double lambda, int d, double two_star, double volume) {
  require_lambda(lambda);
  const double N = sobolev_N(d, two_star, volume);
  const double upper = upper_sobolev_exponent(d, two_star);
  const double gradient_factor = std::sqrt(N * N + 1.0) / lambda;
  const double poincare_sq = N * N * std::pow(volume, 1.0 - 2.0 / upper);
  return gradient_factor * std::sqrt(1.0 + poincare_sq);
}

MoserConstants moser_constants(double lambda, int d, double q, double two_star, double volume) {
  require_lambda(lambda);
  require_dimension(d);
  require_volume(volume);
  const double lower = lower_sobolev_exponent(d, two_star);
  if (!(q > 0.5 * d)) {
    throw std::invalid_argument("integrability exponent q must exceed d/2");
  }
  if (!(q >= lower)) {
    throw std::invalid_argument("integrability exponent q must be >= two_star");
  }
  const double upper = upper_sobolev_exponent(d, two_star);
  const double N = sobolev_N(d, two_star, volume);

  MoserConstants m;
  m.d0 = d >= 3 ? static_cast<double>(d) : 1.0 + q;
  m.sigma = d >= 3 ? d / (d - 2.0) : 0.5 * upper;
  m.s = 2.0 * m.d0 / (m.d0 - 2.0);
  m.N1 = d >= 3 ? 2.0 * (d - 1.0) / (d - 2.0) : 0.5 * m.s * std::pow(volume, 1.0 / m.s);
  const double gap = 2.0 * q - m.d0;
  m.K1 = gap / (2.0 * q) * std::pow(2.0 * q / m.d0, -m.d0 / gap);

  const double mu = m.d0 / gap;
  const double c0 = lambda / (2.0 * m.N1 * std::sqrt(lambda + 1.0));
  const double a = std::pow(volume, 1.0 / m.s - 0.5);
  const double lead = c0 * a + m.K1 * std::pow(c0, -mu);
  m.theta = 2.0 + 2.0 * mu;
  m.K2 = 4.0 / lambda * (0.5 + 1.0 / lambda) * lead * lead;

  m.K3 = std::pow(volume, 1.0 / upper - 0.5) + N * std::sqrt(m.K2);
  m.K4 = (m.K3 * m.K3 * std::pow(2.0, m.theta) + 1.0) * std::pow(m.sigma, m.theta);
  m.K5_exponent = m.sigma / ((m.sigma - 1.0) * (m.sigma - 1.0));
  m.K5 = std::exp(m.K5_exponent * std::log(m.K4));

  const double C1 = energy_C1(lambda, d, two_star, volume);
  const double sqrt_K5 = std::sqrt(m.K5);
  m.K6 = C1 * sqrt_K5 * (std::pow(volume, 1.0 / lower - 1.0 / q) + std::pow(volume, 0.5 - 0.5 / q)) +
         sqrt_K5 * std::sqrt(volume);
  m.C2 = m.K6;
  return m;
}

EstimateConstants compute_constants(const EstimateParams& p) {
  EstimateConstants c;
  c.d = p.d;
  c.q = p.q;
  c.two_star = lower_sobolev_exponent(p.d, p.two_star);
  c.two_star_conj = upper_sobolev_exponent(p.d, p.two_star);
  c.volume = p.volume;
  c.lambda = p.lambda;
  c.N = sobolev_N(p.d, p.two_star, p.volume);
  c.C1 = energy_C1(p.lambda, p.d, p.two_star, p.volume);
  c.C3 = std::sqrt(p.volume) * c.C1;
  c.moser = moser_constants(p.lambda, p.d, p.q, p.two_star, p.volume);
  c.C2 = c.moser.C2;
  return c;
}

double linf_bound(const EstimateConstants& constants, double f_norm_q, double F_norm_2q) {
  if (f_norm_q < 0.0 || F_norm_2q < 0.0) throw std::invalid_argument("norms must be nonnegative");
  const double data = f_norm_q + F_norm_2q;
  // C2 may overflow to +inf when sigma is close to 1; zero data still bounds by zero
  return data == 0.0 ? 0.0 : constants.C2 * data;
}

double stability_rhs(const EstimateConstants& constants, const StabilityTerms& t, double alpha, double f_norm_2star,
                     double F_norm_2) {
  if (!(alpha > 0.0)) throw std::invalid_argument("stability bound needs alpha > 0");
  if (t.dB2 < 0.0 || t.dc < 0.0 || t.dA_grad_u < 0.0 || t.df1 < 0.0 || t.dF2 < 0.0 || f_norm_2star < 0.0 ||
      F_norm_2 < 0.0) {
    throw std::invalid_argument("stability bound needs nonnegative inputs");
  }
  const double C4 = constants.C1 * (f_norm_2star + F_norm_2);
  return C4 / alpha * (t.dB2 + constants.N * t.dc) + constants.C3 * t.dA_grad_u + t.df1 / alpha +
         constants.C3 * t.dF2;
}

void write_constants_table(std::ostream& os, const EstimateConstants& c) {
  const auto old = os.precision(17);
  const auto& m = c.moser;
  os << "d=" << c.d << '\n'
     << "q=" << c.q << '\n'
     << "two_star=" << c.two_star << '\n'
     << "two_star_conj=" << c.two_star_conj << '\n'
     << "volume=" << c.volume << '\n'
     << "lambda=" << c.lambda << '\n'
     << "N=" << c.N << '\n'
     << "C1=" << c.C1 << '\n'
     << "C3=" << c.C3 << '\n'
     << "d0=" << m.d0 << '\n'
     << "sigma=" << m.sigma << '\n'
     << "s=" << m.s << '\n'
     << "N1=" << m.N1 << '\n'
     << "K1=" << m.K1 << '\n'
     << "theta=" << m.theta << '\n'
     << "K2=" << m.K2 << '\n'
     << "K3=" << m.K3 << '\n'
     << "K4=" << m.K4 << '\n'
     << "K5_exponent=" << m.K5_exponent << '\n'
     << "K5=" << m.K5 << '\n'
     << "K6=" << m.K6 << '\n'
     << "C2=" << c.C2 << '\n';
  os.precision(old);
}

}  // namespace roughfem
