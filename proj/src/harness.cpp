#include "roughfem/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "roughfem/quadrature.hpp"

namespace roughfem {

namespace {

constexpr double kPi = std::numbers::pi;

std::string r_label(double r) { return std::isinf(r) ? "inf" : format_number(r); }

Solution solve_system(const AssembledSystem& sys, const SolveOptions& solve) {
  auto report = solve_sparse(sys.K, sys.b, solve);
  Solution sol;
  sol.mesh = sys.mesh;
  sol.values = sys.dofs.prolong(report.solution);
  sol.residual = report.relative_residual;
  return sol;
}

}  // namespace

double Solution::h1() const {
  const double a = l2();
  const double b = grad_l2();
  return std::sqrt(a * a + b * b);
}

Solution solve_primal(const CoefficientSet& coeffs, const MeshPtr& mesh, const SolveOptions& solve,
                      const AssemblyOptions& assembly) {
  return solve_system(assemble_primal(coeffs, mesh, assembly), solve);
}

Solution solve_dual(const CoefficientSet& coeffs, const MeshPtr& mesh, const SolveOptions& solve,
                    const AssemblyOptions& assembly) {
  return solve_system(assemble_dual(coeffs, mesh, assembly), solve);
}

EstimateConstants constants_for(const CoefficientSet& coeffs, double volume) {
  EstimateParams p;
  p.lambda = coeffs.lambda;
  p.d = 2;
  p.q = coeffs.q;
  p.two_star = coeffs.two_star;
  p.volume = volume;
  return compute_constants(p);
}

ManufacturedCase manufactured_case(const std::string& name) {
  ManufacturedCase m;
  m.name = name;
  if (name == "zero") {
    m.exact = [](const Point2&) { return 0.0; };
    m.exact_gradient = [](const Point2&) { return Vec2(0.0, 0.0); };
    return m;
  }
  m.exact = [](const Point2& p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); };
  m.exact_gradient = [](const Point2& p) {
    return Vec2(kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y), kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y));
  };
  if (name == "diffusion") {
    m.coeffs.f = ScalarField::analytic(
        [](const Point2& p) { return 2.0 * kPi * kPi * std::sin(kPi * p.x) * std::sin(kPi * p.y); },
        "2 pi^2 sin(pi x) sin(pi y)");
  } else if (name == "drift") {
    m.coeffs.B = VectorField::constant(Vec2(1.0, 0.0), "(1,0)");
    m.coeffs.f = ScalarField::analytic(
        [](const Point2& p) {
          return 2.0 * kPi * kPi * std::sin(kPi * p.x) * std::sin(kPi * p.y) +
                 kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y);
        },
        "2 pi^2 sin(pi x) sin(pi y) + pi cos(pi x) sin(pi y)");
  } else {
    throw std::invalid_argument("unknown manufactured case '" + name + "' (expected diffusion, drift or zero)");
  }
  return m;
}

bool ConvergenceTable::meets(double l2_min, double h1_min) const {
  if (rows.size() < 2) return true;
  const auto& last = rows.back();
  // an exactly reproduced solution has no measurable order
  if (last.l2_error < 1e-13 && last.h1_error < 1e-13) return true;
  return last.l2_order >= l2_min && last.h1_order >= h1_min;
}

ConvergenceTable mms_convergence_study(const ManufacturedCase& mcase, const std::vector<int>& levels,
                                       const Rect& domain) {
  ConvergenceTable table;
  table.case_name = mcase.name;
  for (int n : levels) {
    const auto mesh = build_structured_mesh(n, n, domain);
    const Solution sol = solve_primal(mcase.coeffs, mesh);
    const ScalarField uh = sol.field();
    const VectorField guh = sol.gradient();
    double e2 = 0.0, g2 = 0.0;
    for_each_quadrature_point(*mesh, [&](const SamplePoint& s, double w) {
      const double e = uh(s) - mcase.exact(s.x);
      const Vec2 ge = guh(s) - mcase.exact_gradient(s.x);
      e2 += w * e * e;
      g2 += w * ge.squaredNorm();
    });
    ConvergenceRow row;
    row.n = n;
    row.h = mesh->diameter();
    row.l2_error = std::sqrt(e2);
    row.h1_error = std::sqrt(g2);
    row.l2_order = std::numeric_limits<double>::quiet_NaN();
    row.h1_order = std::numeric_limits<double>::quiet_NaN();
    if (!table.rows.empty()) {
      const auto& prev = table.rows.back();
      const double ratio = std::log(prev.h / row.h);
      row.l2_order = std::log(prev.l2_error / row.l2_error) / ratio;
      row.h1_order = std::log(prev.h1_error / row.h1_error) / ratio;
    }
    table.rows.push_back(row);
  }
  return table;
}

EstimateReport verify_estimates(const CoefficientSet& coeffs, const MeshPtr& mesh, const std::vector<double>& r_values,
                                double slack, const std::string& case_id) {
  const double volume = mesh->domain().area();
  const auto constants = constants_for(coeffs, volume);
  const Solution sol = solve_primal(coeffs, mesh);

  const double f_lower = lp_norm(coeffs.f, coeffs.two_star, *mesh);
  const double F_2 = lp_norm(coeffs.F, 2.0, *mesh);
  const double f_q = lp_norm(coeffs.f, coeffs.q, *mesh);
  const double F_2q = lp_norm(coeffs.F, 2.0 * coeffs.q, *mesh);

  EstimateReport report;
  report.add_bound(case_id, "energy", "energy estimate", sol.h1(), constants.C1 * (f_lower + F_2), slack);
  report.add_bound(case_id, "linf", "L-infinity estimate", sol.linf(), linf_bound(constants, f_q, F_2q), slack);
  if (coeffs.alpha > 0.0) {
    for (double r : r_values) {
      const double vol_factor = std::isinf(r) ? 1.0 : std::pow(volume, 1.0 / r);
      const double flux_term = F_2q == 0.0 ? 0.0 : constants.C2 * vol_factor * F_2q;
      const double bound = lp_norm(coeffs.f, r, *mesh) / coeffs.alpha + flux_term;
      report.add_bound(case_id, "lr_r=" + r_label(r), "L^r contraction", sol.lr(r), bound, slack);
    }
  }
  return report;
}

double duality_check(const CoefficientSet& coeffs, const MeshPtr& mesh, const ScalarField& psi) {
  const auto primal = assemble_primal(coeffs, mesh);
  const Vector u = solve_sparse(primal.K, primal.b).solution;

  CoefficientSet dual_coeffs = with_transposed_diffusion(coeffs);
  dual_coeffs.f = ScalarField();
  dual_coeffs.F = VectorField();
  const auto dual = assemble_dual(dual_coeffs, mesh);
  const Vector m_psi = assemble_load(psi, VectorField(), *mesh, dual.dofs);
  const Vector w = solve_sparse(dual.K, m_psi).solution;

  const double lhs = m_psi.dot(u);
  const double rhs = w.dot(primal.b);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

EstimateReport extended_l1_check(const CoefficientSet& coeffs, const MeshPtr& mesh, const ScalarField& g,
                                 const VectorField& G, double slack, const std::string& case_id) {
  if (!(coeffs.alpha > 0.0)) throw std::invalid_argument("extended L1 check needs alpha > 0");
  CoefficientSet data = coeffs;
  data.f = g;
  data.F = G;
  const double volume = mesh->domain().area();
  const auto constants = constants_for(coeffs, volume);
  const Solution sol = solve_primal(data, mesh);
  const double bound = lp_norm(g, 1.0, *mesh) / coeffs.alpha + std::sqrt(volume) * constants.C1 * lp_norm(G, 2.0, *mesh);
  EstimateReport report;
  report.add_bound(case_id, "extended_l1", "extended L1 contraction", sol.l1(), bound, slack);
  return report;
}

StabilityResult stability_sweep(const CoefficientSet& base, const MeshPtr& mesh, const PerturbationSchedule& schedule,
                                int n_max, double slack, double rel_threshold) {
  if (!(base.alpha > 0.0)) throw std::invalid_argument("stability sweep needs alpha > 0");
  if (n_max < 1) throw std::invalid_argument("stability sweep needs n_max >= 1");
  const double volume = mesh->domain().area();
  const auto constants = constants_for(base, volume);
  const Solution u = solve_primal(base, mesh);
  const ScalarField u_field = u.field();
  const VectorField grad_u = u.gradient();

  const double f_lower = lp_norm(base.f, base.two_star, *mesh);
  const double F_2 = lp_norm(base.F, 2.0, *mesh);

  StabilityResult result;
  result.base_l1 = u.l1();
  AssemblyOptions perturbed_opts;
  perturbed_opts.skip_validation = true;
  for (int n = 1; n <= n_max; ++n) {
    const CoefficientSet pert = schedule(n);
    const auto ell = check_ellipticity(pert.A, *mesh, base.lambda, std::max(pert.Lambda, base.Lambda));
    if (!ell.pass) {
      throw AssumptionViolation("ellipticity", "perturbed diffusion matrix n=" + std::to_string(n) +
                                                   " violates the base lambda: " + ell.detail);
    }
    CoefficientSet solved = pert;
    solved.alpha = base.alpha;
    const Solution un = solve_primal(solved, mesh, {}, perturbed_opts);

    StabilityRow row;
    row.n = n;
    row.measured = lp_norm(difference(un.field(), u_field), 1.0, *mesh);
    row.terms.dB2 = lp_norm(difference(base.B, pert.B), 2.0, *mesh);
    row.terms.dc = lp_norm(difference(base.c, pert.c), base.two_star, *mesh);
    const MatrixField A = base.A;
    const MatrixField An = pert.A;
    row.terms.dA_grad_u = lp_norm(
        VectorField::from_sample([A, An, grad_u](const SamplePoint& s) { return Vec2((An(s) - A(s)) * grad_u(s)); },
                                 "(A_n - A) grad u"),
        2.0, *mesh);
    row.terms.df1 = lp_norm(difference(base.f, pert.f), 1.0, *mesh);
    row.terms.dF2 = lp_norm(difference(base.F, pert.F), 2.0, *mesh);
    // the energy bound of u_n is taken over the larger of the base and perturbed data
    const double f_n_lower = std::max(f_lower, lp_norm(pert.f, base.two_star, *mesh));
    const double F_n_2 = std::max(F_2, lp_norm(pert.F, 2.0, *mesh));
    row.bound = stability_rhs(constants, row.terms, base.alpha, f_n_lower, F_n_2);
    result.report.add_bound("n=" + std::to_string(n), "l1_stability", "L1 stability", row.measured, row.bound, slack);
    result.rows.push_back(row);
  }
  const double first = result.rows.front().measured;
  const double last = result.rows.back().measured;
  result.report.add_bound("sweep", "decrease", "L1 stability", last, first, 0.0);
  result.report.add_bound("sweep", "decay_below_threshold", "L1 stability", last, rel_threshold * result.base_l1, 0.0);
  return result;
}

PerturbationSchedule mollified_drift_schedule(const CoefficientSet& base, const MeshPtr& mesh, double delta) {
  return [base, mesh, delta](int n) {
    CoefficientSet c = base;
    c.B = mollify_field(base.B, n, delta, mesh);
    return c;
  };
}

std::vector<SuiteCase> make_random_suite(std::uint64_t seed, int count, const Rect& domain) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const std::array<Point2, 4> corners{{{domain.x0, domain.y0}, {domain.x1, domain.y0}, {domain.x1, domain.y1},
                                       {domain.x0, domain.y1}}};
  const Point2 mid{0.5 * (domain.x0 + domain.x1), 0.5 * (domain.y0 + domain.y1)};

  std::vector<SuiteCase> cases;
  for (int i = 0; i < count; ++i) {
    SuiteCase sc;
    char id[16];
    std::snprintf(id, sizeof(id), "case%02d", i);
    sc.id = id;
    std::ostringstream desc;
    desc.precision(6);
    CoefficientSet& k = sc.coeffs;

    // diffusion: kappa(x) R diag(e1, e2) R^T + s J, kappa jumps from 1 to kappa_hi across x = mid.x
    const double e1 = uniform(1.0, 3.0), e2 = uniform(1.0, 3.0), angle = uniform(0.0, kPi);
    const double skew = uniform(-1.0, 1.0);
    const double kappa_hi = (i % 3 == 0) ? uniform(1.5, 4.0) : 1.0;
    Mat2 R;
    R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    const Mat2 S = R * Vec2(e1, e2).asDiagonal() * R.transpose();
    Mat2 J;
    J << 0.0, skew, -skew, 0.0;
    const double split = mid.x;
    k.A = MatrixField::analytic(
        [S, J, kappa_hi, split](const Point2& p) { return Mat2((p.x > split ? kappa_hi : 1.0) * S + J); },
        "rotated anisotropic + skew");
    k.lambda = std::min(e1, e2);
    k.Lambda = kappa_hi * std::max(e1, e2) + std::abs(skew);
    desc << "A: eig(" << e1 << "," << e2 << ") kappa " << kappa_hi << " skew " << skew << "; ";

    switch (i % 4) {
      case 0:
        desc << "B: 0; ";
        break;
      case 1: {
        const Vec2 b(uniform(-2.0, 2.0), uniform(-2.0, 2.0));
        k.B = VectorField::constant(b, "constant drift");
        desc << "B: const(" << b[0] << "," << b[1] << "); ";
        break;
      }
      case 2: {
        const double s = uniform(0.5, 3.0);
        const Point2 x0{uniform(domain.x0, domain.x1), uniform(domain.y0, domain.y1)};
        k.B = VectorField::analytic([s, x0](const Point2& p) { return Vec2(-s * (p.x - x0.x), -s * (p.y - x0.y)); },
                                    "linear compressive drift");
        desc << "B: -" << s << "(x-x0); ";
        break;
      }
      default: {
        const double gamma = uniform(1.2, 1.8);
        const double amp = uniform(0.5, 2.0);
        const Point2 corner = corners[static_cast<std::size_t>(rng() % 4)];
        const VectorField sing = make_singular_drift(gamma, corner);
        k.B = VectorField::from_sample([sing, amp](const SamplePoint& s) { return Vec2(amp * sing(s)); },
                                       "scaled " + sing.description(), {corner});
        desc << "B: singular gamma " << gamma << " amp " << amp << " at (" << corner.x << "," << corner.y << "); ";
        break;
      }
    }

    switch (i % 5) {
      case 0:
        desc << "c: 0; ";
        break;
      case 1: {
        const double c0 = uniform(0.0, 5.0);
        k.c = ScalarField::constant(c0, "constant");
        desc << "c: " << c0 << "; ";
        break;
      }
      case 2: {
        const double amp = uniform(0.1, 1.0);
        const Point2 corner = corners[static_cast<std::size_t>(rng() % 4)];
        k.c = make_radial_power(1.0, corner, amp);
        desc << "c: " << amp << "|x-corner|^-1; ";
        break;
      }
      case 3:
        k.c = ScalarField::analytic(
            [](const Point2& p) { return 1.0 + std::pow(std::sin(3.0 * kPi * p.x * p.y), 2); }, "1 + sin^2");
        desc << "c: 1+sin^2; ";
        break;
      default: {
        const double c0 = uniform(1.0, 5.0);
        k.c = ScalarField::analytic([c0, split](const Point2& p) { return p.x > split ? c0 : 0.0; }, "jump");
        desc << "c: jump " << c0 << "; ";
        break;
      }
    }

    k.alpha = std::exp(uniform(std::log(0.5), std::log(10.0)));
    desc << "alpha " << k.alpha << "; ";

    const double amp = uniform(-5.0, 5.0);
    const int f_kind = static_cast<int>(rng() % 5);
    switch (f_kind) {
      case 0:
        k.f = ScalarField::constant(amp, "constant");
        desc << "f: " << amp;
        break;
      case 1:
        k.f = ScalarField::analytic([amp](const Point2& p) { return amp * std::sin(kPi * p.x) * std::sin(kPi * p.y); },
                                    "sin sin");
        desc << "f: " << amp << " sin sin";
        break;
      case 2: {
        const Point2 c{uniform(domain.x0, domain.x1), uniform(domain.y0, domain.y1)};
        k.f = ScalarField::analytic(
            [amp, c](const Point2& p) {
              return amp * std::exp(-40.0 * ((p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y)));
            },
            "gaussian");
        desc << "f: " << amp << " gaussian";
        break;
      }
      case 3:
        k.f = ScalarField::analytic([amp](const Point2& p) { return amp * std::cos(2.0 * kPi * p.x) * (1.0 + p.y); },
                                    "sign-changing");
        desc << "f: " << amp << " cos(2 pi x)(1+y)";
        break;
      default: {
        const Rect box{domain.x0 + 0.25 * domain.width(), domain.y0 + 0.25 * domain.height(),
                       domain.x0 + 0.6 * domain.width(), domain.y0 + 0.7 * domain.height()};
        k.f = ScalarField::analytic([amp, box](const Point2& p) { return box.contains(p) ? amp : 0.0; }, "indicator");
        desc << "f: " << amp << " indicator";
        break;
      }
    }
    if (i % 2 == 1) {
      const double a = uniform(-2.0, 2.0), b = uniform(-2.0, 2.0);
      k.F = VectorField::analytic([a, b](const Point2& p) { return Vec2(a * std::sin(kPi * p.y), b * std::cos(kPi * p.x)); },
                                  "smooth flux");
      desc << "; F: (" << a << " sin(pi y), " << b << " cos(pi x))";
    } else {
      desc << "; F: 0";
    }
    sc.description = desc.str();
    cases.push_back(std::move(sc));
  }
  return cases;
}

EstimateReport run_suite(const std::vector<SuiteCase>& cases, const MeshPtr& mesh, const std::vector<double>& r_values,
                         double slack, int jobs) {
  std::vector<EstimateReport> partial(cases.size());
  std::vector<std::exception_ptr> errors(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        const auto& sc = cases[i];
        partial[i] = verify_estimates(sc.coeffs, mesh, r_values, slack, sc.id);
        const ScalarField psi = ScalarField::analytic(
            [](const Point2& p) { return 1.0 + p.x * p.y + std::sin(5.0 * p.x); }, "1 + xy + sin(5x)");
        partial[i].add_identity(sc.id, "duality", "duality identity", duality_check(sc.coeffs, mesh, psi), 1e-9);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(cases.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  EstimateReport report;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    report.append(partial[i]);
    report.set_metadata(cases[i].id, cases[i].description);
  }
  report.sort_by_case();
  return report;
}

}  // namespace roughfem
