#include "roughfem/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "roughfem/assembly.hpp"
#include "roughfem/estimates.hpp"
#include "roughfem/harness.hpp"
#include "roughfem/linsolve.hpp"
#include "roughfem/report.hpp"
#include "roughfem/resolvent.hpp"

namespace roughfem {

namespace {

namespace fs = std::filesystem;

const std::set<std::string> kSubcommands{"solve", "mms", "verify", "stability", "resolvent", "constants"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  const char* begin = v.c_str();
  char* end = nullptr;
  const double d = std::strtod(begin, &end);
  if (v.empty() || end != begin + v.size() || std::isnan(d)) {
    throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
  }
  return d;
}

long long parse_integer(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  if (d != std::floor(d) || std::abs(d) > 9e15) throw ConfigError("config key '" + key + "': expected an integer");
  return static_cast<long long>(d);
}

std::vector<double> parse_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (trim(value).empty()) return out;
  for (const auto& item : split(value, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::vector<int> parse_ints(const std::string& key, const std::string& value) {
  std::vector<int> out;
  if (trim(value).empty()) return out;
  for (const auto& item : split(value, ',')) out.push_back(static_cast<int>(parse_integer(key, item)));
  return out;
}

Expression parse_expression(const std::string& key, const std::string& value) {
  try {
    return Expression::parse(value);
  } catch (const ExpressionError& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, int>) {
      out += std::to_string(values[i]);
    } else {
      out += format_number(values[i]);
    }
  }
  return out;
}

ScalarField scalar_field(const Expression& e, const std::vector<Point2>& singular) {
  if (e.is_constant()) return ScalarField::constant(e.constant_value(), e.str());
  return ScalarField::analytic([e](const Point2& p) { return e(p.x, p.y); }, e.str(), singular);
}

VectorField vector_field(const Expression& e1, const Expression& e2, const std::vector<Point2>& singular) {
  const std::string desc = "(" + e1.str() + ", " + e2.str() + ")";
  if (e1.is_constant() && e2.is_constant()) return VectorField::constant(Vec2(e1.constant_value(), e2.constant_value()), desc);
  return VectorField::analytic([e1, e2](const Point2& p) { return Vec2(e1(p.x, p.y), e2(p.x, p.y)); }, desc, singular);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("config key '" + key + "' given twice");

    if (key == "subcommand") {
      if (!kSubcommands.count(value)) throw ConfigError("config key 'subcommand': unknown subcommand '" + value + "'");
      cfg.subcommand = value;
    } else if (key == "domain") {
      const auto v = parse_doubles(key, value);
      if (v.size() != 4 || !(v[2] > v[0]) || !(v[3] > v[1])) {
        throw ConfigError("config key 'domain': expected x0,y0,x1,y1 with x1 > x0 and y1 > y0");
      }
      cfg.domain = Rect{v[0], v[1], v[2], v[3]};
    } else if (key == "mesh") {
      cfg.mesh = static_cast<int>(parse_integer(key, value));
      if (cfg.mesh < 1) throw ConfigError("config key 'mesh': must be >= 1");
    } else if (key == "A11") {
      cfg.A11 = parse_expression(key, value);
    } else if (key == "A12") {
      cfg.A12 = parse_expression(key, value);
    } else if (key == "A21") {
      cfg.A21 = parse_expression(key, value);
    } else if (key == "A22") {
      cfg.A22 = parse_expression(key, value);
    } else if (key == "B1") {
      cfg.B1 = parse_expression(key, value);
    } else if (key == "B2") {
      cfg.B2 = parse_expression(key, value);
    } else if (key == "c") {
      cfg.c = parse_expression(key, value);
    } else if (key == "f") {
      cfg.f = parse_expression(key, value);
    } else if (key == "F1") {
      cfg.F1 = parse_expression(key, value);
    } else if (key == "F2") {
      cfg.F2 = parse_expression(key, value);
    } else if (key == "singular") {
      cfg.singular.clear();
      if (!value.empty()) {
        for (const auto& pt : split(value, ';')) {
          const auto v = parse_doubles(key, pt);
          if (v.size() != 2) throw ConfigError("config key 'singular': expected points 'x,y; x,y'");
          cfg.singular.push_back({v[0], v[1]});
        }
      }
    } else if (key == "alpha") {
      cfg.alpha = parse_double(key, value);
    } else if (key == "lambda") {
      cfg.lambda = parse_double(key, value);
    } else if (key == "Lambda") {
      cfg.Lambda = parse_double(key, value);
    } else if (key == "two_star") {
      cfg.two_star = parse_double(key, value);
    } else if (key == "q") {
      cfg.q = parse_double(key, value);
    } else if (key == "r") {
      cfg.r = parse_doubles(key, value);
      for (double r : cfg.r) {
        if (!(r >= 1.0)) throw ConfigError("config key 'r': exponents must be >= 1");
      }
    } else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw ConfigError("config key 'seed': must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "suite") {
      cfg.suite = static_cast<int>(parse_integer(key, value));
      if (cfg.suite < 0) throw ConfigError("config key 'suite': must be >= 0");
    } else if (key == "slack") {
      cfg.slack = parse_double(key, value);
      if (!(cfg.slack >= 0.0)) throw ConfigError("config key 'slack': must be >= 0");
    } else if (key == "tol") {
      cfg.tol = parse_double(key, value);
      if (!(cfg.tol > 0.0)) throw ConfigError("config key 'tol': must be > 0");
    } else if (key == "levels") {
      cfg.levels = parse_ints(key, value);
      for (int n : cfg.levels) {
        if (n < 1) throw ConfigError("config key 'levels': mesh sizes must be >= 1");
      }
    } else if (key == "case") {
      cfg.mms_case = value;
    } else if (key == "n_max") {
      cfg.n_max = static_cast<int>(parse_integer(key, value));
      if (cfg.n_max < 1) throw ConfigError("config key 'n_max': must be >= 1");
    } else if (key == "delta") {
      cfg.delta = parse_double(key, value);
      if (!(cfg.delta > 0.0)) throw ConfigError("config key 'delta': must be > 0");
    } else if (key == "threshold") {
      cfg.threshold = parse_double(key, value);
    } else if (key == "alphas") {
      cfg.alphas = parse_doubles(key, value);
    } else if (key == "continuity_threshold") {
      cfg.continuity_threshold = parse_double(key, value);
    } else if (key == "output") {
      cfg.output = value;
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::canonical() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("subcommand", subcommand);
  kv.emplace_back("domain", join(std::vector<double>{domain.x0, domain.y0, domain.x1, domain.y1}));
  kv.emplace_back("mesh", std::to_string(mesh));
  kv.emplace_back("A11", A11.str());
  kv.emplace_back("A12", A12.str());
  kv.emplace_back("A21", A21.str());
  kv.emplace_back("A22", A22.str());
  kv.emplace_back("B1", B1.str());
  kv.emplace_back("B2", B2.str());
  kv.emplace_back("c", c.str());
  kv.emplace_back("f", f.str());
  kv.emplace_back("F1", F1.str());
  kv.emplace_back("F2", F2.str());
  std::string pts;
  for (std::size_t i = 0; i < singular.size(); ++i) {
    if (i) pts += "; ";
    pts += format_number(singular[i].x) + "," + format_number(singular[i].y);
  }
  kv.emplace_back("singular", pts);
  kv.emplace_back("alpha", format_number(alpha));
  kv.emplace_back("lambda", format_number(lambda));
  kv.emplace_back("Lambda", format_number(Lambda));
  kv.emplace_back("two_star", format_number(two_star));
  kv.emplace_back("q", format_number(q));
  kv.emplace_back("r", join(r));
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("suite", std::to_string(suite));
  kv.emplace_back("slack", format_number(slack));
  kv.emplace_back("tol", format_number(tol));
  kv.emplace_back("levels", join(levels));
  kv.emplace_back("case", mms_case);
  kv.emplace_back("n_max", std::to_string(n_max));
  kv.emplace_back("delta", format_number(delta));
  kv.emplace_back("threshold", format_number(threshold));
  kv.emplace_back("alphas", join(alphas));
  kv.emplace_back("continuity_threshold", format_number(continuity_threshold));
  kv.emplace_back("output", output);
  std::string out;
  for (const auto& [k, v] : kv) {
    // an empty subcommand is left out so that parse() accepts the echo
    if (k == "subcommand" && v.empty()) continue;
    out += k;
    out += v.empty() ? " =" : " = ";
    out += v;
    out += '\n';
  }
  return out;
}

CoefficientSet RunConfig::coefficients() const {
  CoefficientSet k;
  const std::string adesc = "[[" + A11.str() + ", " + A12.str() + "], [" + A21.str() + ", " + A22.str() + "]]";
  if (A11.is_constant() && A12.is_constant() && A21.is_constant() && A22.is_constant()) {
    Mat2 a;
    a << A11.constant_value(), A12.constant_value(), A21.constant_value(), A22.constant_value();
    k.A = MatrixField::constant(a, adesc);
  } else {
    const Expression a11 = A11, a12 = A12, a21 = A21, a22 = A22;
    k.A = MatrixField::analytic(
        [a11, a12, a21, a22](const Point2& p) {
          Mat2 a;
          a << a11(p.x, p.y), a12(p.x, p.y), a21(p.x, p.y), a22(p.x, p.y);
          return a;
        },
        adesc, singular);
  }
  k.B = vector_field(B1, B2, singular);
  k.c = scalar_field(c, singular);
  k.f = scalar_field(f, singular);
  k.F = vector_field(F1, F2, singular);
  k.alpha = alpha;
  k.lambda = lambda;
  k.Lambda = Lambda;
  k.two_star = two_star;
  k.q = q;
  return k;
}

namespace {

struct Context {
  RunConfig cfg;
  fs::path out;
  int jobs = 1;
};

std::ofstream open_output(const Context& ctx, const std::string& name) {
  std::ofstream os(ctx.out / name);
  if (!os) throw std::runtime_error("cannot write " + (ctx.out / name).string());
  return os;
}

int finish_report(const Context& ctx, EstimateReport& report) {
  report.set_metadata("mesh", std::to_string(ctx.cfg.mesh));
  report.set_metadata("seed", std::to_string(ctx.cfg.seed));
  {
    auto os = open_output(ctx, "report.csv");
    report.write_csv(os, utc_timestamp());
  }
  {
    auto os = open_output(ctx, "summary.txt");
    report.write_summary(os);
  }
  report.write_summary(std::cout);
  return report.all_pass() ? 0 : 2;
}

ScalarField duality_test_function() {
  return ScalarField::analytic([](const Point2& p) { return 1.0 + p.x * p.y + std::sin(5.0 * p.x); },
                               "1 + xy + sin(5x)");
}

int cmd_solve(const Context& ctx) {
  const auto coeffs = ctx.cfg.coefficients();
  const auto mesh = build_structured_mesh(ctx.cfg.mesh, ctx.cfg.mesh, ctx.cfg.domain);
  const auto sys = assemble_primal(coeffs, mesh);
  for (const auto& w : sys.warnings) std::cerr << "warning: " << w << '\n';
  const SolveOptions opts;
  const auto solved = solve_sparse(sys.K, sys.b, opts);
  Solution sol;
  sol.mesh = mesh;
  sol.values = sys.dofs.prolong(solved.solution);
  sol.residual = solved.relative_residual;

  {
    auto os = open_output(ctx, "mesh.txt");
    write_mesh_table(os, *mesh);
  }
  {
    auto os = open_output(ctx, "stiffness.csv");
    write_coordinate_table(os, sys.K);
  }
  {
    auto os = open_output(ctx, "load.csv");
    write_vector_table(os, sys.b);
  }
  {
    auto os = open_output(ctx, "solution.csv");
    os << "vertex,x,y,u\n";
    for (std::size_t i = 0; i < mesh->num_vertices(); ++i) {
      const auto& p = mesh->vertex(static_cast<int>(i));
      os << i << ',' << format_number(p.x) << ',' << format_number(p.y) << ','
         << format_number(sol.values[static_cast<Eigen::Index>(i)]) << '\n';
    }
  }
  EstimateReport report;
  report.set_metadata("coefficients", coeffs.fingerprint());
  report.set_metadata("solver", to_string(solved.method));
  report.set_metadata("norm_l1", format_number(sol.l1()));
  report.set_metadata("norm_l2", format_number(sol.l2()));
  report.set_metadata("norm_h1", format_number(sol.h1()));
  report.set_metadata("norm_linf", format_number(sol.linf()));
  report.add_identity("config", "solver_residual", "linear solve", sol.residual, opts.tol);
  return finish_report(ctx, report);
}

int cmd_verify(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto coeffs = cfg.coefficients();
  const auto mesh = build_structured_mesh(cfg.mesh, cfg.mesh, cfg.domain);
  EstimateReport report = verify_estimates(coeffs, mesh, cfg.r, cfg.slack, "config");
  report.add_identity("config", "duality", "duality identity", duality_check(coeffs, mesh, duality_test_function()),
                      cfg.tol);
  if (coeffs.alpha > 0.0) report.append(extended_l1_check(coeffs, mesh, coeffs.f, coeffs.F, cfg.slack, "config"));
  report.set_metadata("config", coeffs.fingerprint());
  if (cfg.suite > 0) {
    const auto cases = make_random_suite(cfg.seed, cfg.suite, cfg.domain);
    report.append(run_suite(cases, mesh, cfg.r, cfg.slack, ctx.jobs));
  }
  report.sort_by_case();
  return finish_report(ctx, report);
}

int cmd_mms(const Context& ctx) {
  const auto mcase = manufactured_case(ctx.cfg.mms_case);
  if (ctx.cfg.levels.empty()) throw ConfigError("config key 'levels': at least one mesh size needed");
  const auto table = mms_convergence_study(mcase, ctx.cfg.levels, ctx.cfg.domain);
  std::ostringstream os;
  os << "n,h,l2_error,l2_order,h1_error,h1_order\n";
  for (const auto& row : table.rows) {
    os << row.n << ',' << format_number(row.h) << ',' << format_number(row.l2_error) << ','
       << format_number(row.l2_order) << ',' << format_number(row.h1_error) << ',' << format_number(row.h1_order)
       << '\n';
  }
  auto file = open_output(ctx, "convergence.csv");
  file << os.str();
  std::cout << "case " << table.case_name << '\n' << os.str();
  const bool ok = table.meets();
  std::cout << (ok ? "orders meet" : "orders BELOW") << " the thresholds (L2 >= 1.8, H1 >= 0.9)\n";
  return ok ? 0 : 2;
}

int cmd_stability(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto coeffs = cfg.coefficients();
  const auto mesh = build_structured_mesh(cfg.mesh, cfg.mesh, cfg.domain);
  auto result = stability_sweep(coeffs, mesh, mollified_drift_schedule(coeffs, mesh, cfg.delta), cfg.n_max, cfg.slack,
                                cfg.threshold);
  {
    auto os = open_output(ctx, "stability.csv");
    os << "n,measured,bound,dB2,dc,dA_grad_u,df1,dF2\n";
    for (const auto& row : result.rows) {
      os << row.n << ',' << format_number(row.measured) << ',' << format_number(row.bound) << ','
         << format_number(row.terms.dB2) << ',' << format_number(row.terms.dc) << ','
         << format_number(row.terms.dA_grad_u) << ',' << format_number(row.terms.df1) << ','
         << format_number(row.terms.dF2) << '\n';
    }
  }
  result.report.set_metadata("config", coeffs.fingerprint());
  result.report.set_metadata("base_l1", format_number(result.base_l1));
  result.report.set_metadata("delta", format_number(cfg.delta));
  return finish_report(ctx, result.report);
}

int cmd_resolvent(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  auto coeffs = cfg.coefficients();
  const auto mesh = build_structured_mesh(cfg.mesh, cfg.mesh, cfg.domain);
  const DiscreteResolvent R(coeffs, mesh);
  Vector fv(R.size());
  for (int i = 0; i < R.size(); ++i) fv[i] = coeffs.f.at(mesh->vertex(R.dofs().dof_to_vertex[i]));

  EstimateReport report;
  report.set_metadata("config", coeffs.fingerprint());
  report.set_metadata("k0_m_matrix", R.k0_is_m_matrix() ? "yes" : "no");
  const bool unit_range = fv.size() > 0 && fv.minCoeff() >= 0.0 && fv.maxCoeff() <= 1.0;
  for (double alpha : cfg.alphas) {
    const std::string id = "alpha=" + format_number(alpha);
    if (unit_range) {
      const auto sm = check_submarkov(R, alpha, fv);
      report.add_identity(id, "submarkov_lower", "sub-Markov property", std::max(0.0, -sm.min_value), sm.tol);
      report.add_identity(id, "submarkov_upper", "sub-Markov property", std::max(0.0, sm.max_value - 1.0), sm.tol);
    }
    for (double r : cfg.r) {
      const auto cr = check_lr_contraction(R, alpha, coeffs.f, r, cfg.slack);
      report.add_bound(id, "contraction_r=" + format_number(r), "L^r contraction", cr.solution_norm, cr.bound,
                       cfg.slack);
    }
  }
  if (!unit_range) report.set_metadata("submarkov", "skipped: nodal f not within [0, 1]");
  report.add_identity("sweep", "resolvent_identity", "resolvent identity",
                      resolvent_identity_defect(R, cfg.alphas, fv), cfg.tol);

  const auto rows = strong_continuity_sweep(R, coeffs.f, cfg.alphas);
  {
    auto os = open_output(ctx, "continuity.csv");
    os << "alpha,l1_error\n";
    for (const auto& row : rows) os << format_number(row.alpha) << ',' << format_number(row.error) << '\n';
  }
  if (!rows.empty()) {
    double worst_increase = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) worst_increase = std::max(worst_increase, rows[i].error - rows[i - 1].error);
    report.add_identity("sweep", "continuity_nonincreasing", "strong continuity", worst_increase, 1e-12);
    report.add_bound("sweep", "continuity_final", "strong continuity", rows.back().error, cfg.continuity_threshold, 0.0);
  }
  return finish_report(ctx, report);
}

struct ConstantsFlags {
  int d = 2;
  double q = 0, lambda = 0, volume = 0, two_star = 0;
};

int cmd_constants(const Context& ctx, const CLI::App& sub, const ConstantsFlags& flags) {
  EstimateParams p;
  p.d = flags.d;
  p.q = sub.count("--q") ? flags.q : ctx.cfg.q;
  p.lambda = sub.count("--lambda") ? flags.lambda : ctx.cfg.lambda;
  p.volume = sub.count("--volume") ? flags.volume : ctx.cfg.domain.area();
  p.two_star = sub.count("--two-star") ? flags.two_star : ctx.cfg.two_star;
  if (p.d < 2) throw AssumptionViolation("dimension", "d must be >= 2");
  if (!(p.lambda > 0.0)) throw AssumptionViolation("ellipticity", "lambda must be positive");
  if (!(p.q > 0.5 * p.d)) {
    throw AssumptionViolation("integrability exponent", "q = " + format_number(p.q) + " must exceed d/2 = " +
                                                            format_number(0.5 * p.d));
  }
  if (p.d == 2 && !(p.two_star > 1.0 && p.two_star < 2.0)) {
    throw AssumptionViolation("lower Sobolev exponent", "two_star must lie in (1, 2) in two dimensions");
  }
  if (!(p.q >= lower_sobolev_exponent(p.d, p.two_star))) {
    throw AssumptionViolation("integrability exponent", "q must be >= the lower Sobolev exponent");
  }
  write_constants_table(std::cout, compute_constants(p));
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Finite-element solver and a-priori estimate checks for non-symmetric elliptic Dirichlet problems"};
  app.require_subcommand(1);

  std::string config_path, out_dir, levels, mms_case;
  int jobs = 1;
  long long seed = -1;
  ConstantsFlags cflags;

  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> help{
      {"solve", "solve the primal problem and export mesh, matrix and solution"},
      {"mms", "manufactured-solution convergence study"},
      {"verify", "energy, L-infinity, L^r, duality and extended L1 checks"},
      {"stability", "stability sweep with mollified drifts"},
      {"resolvent", "sub-Markov, contraction, resolvent identity and strong continuity checks"},
      {"constants", "print the estimate constants"}};
  for (const auto& name : kSubcommands) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker threads for suite cases")->check(CLI::PositiveNumber);
    subs[name] = sub;
  }
  subs["mms"]->add_option("--levels", levels, "comma-separated mesh sizes");
  subs["mms"]->add_option("--case", mms_case, "diffusion, drift or zero");
  subs["verify"]->add_option("--seed", seed, "random suite seed");
  auto* csub = subs["constants"];
  csub->add_option("--d", cflags.d, "dimension");
  csub->add_option("--q", cflags.q, "integrability exponent");
  csub->add_option("--lambda", cflags.lambda, "ellipticity constant");
  csub->add_option("--volume", cflags.volume, "domain volume");
  csub->add_option("--two-star", cflags.two_star, "lower Sobolev exponent (d = 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    Context ctx;
    if (!config_path.empty()) ctx.cfg = RunConfig::load(config_path);
    std::string name;
    for (const auto& [n, sub] : subs) {
      if (sub->parsed()) name = n;
    }
    if (!ctx.cfg.subcommand.empty() && ctx.cfg.subcommand != name) {
      std::cerr << "note: config subcommand '" << ctx.cfg.subcommand << "' overridden by '" << name << "'\n";
    }
    ctx.cfg.subcommand = name;
    if (!levels.empty()) ctx.cfg.levels = parse_ints("levels", levels);
    if (!mms_case.empty()) ctx.cfg.mms_case = mms_case;
    if (seed >= 0) ctx.cfg.seed = static_cast<std::uint64_t>(seed);
    ctx.jobs = jobs;

    if (name == "constants") return cmd_constants(ctx, *csub, cflags);

    std::string dir = ctx.cfg.output;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) dir = env;
    if (!out_dir.empty()) dir = out_dir;
    ctx.out = dir;
    fs::create_directories(ctx.out);
    {
      auto os = open_output(ctx, "config.txt");
      os << ctx.cfg.canonical();
    }

    if (name == "solve") return cmd_solve(ctx);
    if (name == "mms") return cmd_mms(ctx);
    if (name == "verify") return cmd_verify(ctx);
    if (name == "stability") return cmd_stability(ctx);
    return cmd_resolvent(ctx);
  } catch (const AssumptionViolation& e) {
    std::cerr << "error: assumption violated (" << e.what() << ")\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace roughfem
