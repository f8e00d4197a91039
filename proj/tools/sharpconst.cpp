// Command-line front end.  Exit codes: 0 all verdicts pass, 1 a verdict
// fails, 2 bad configuration, 3 numerical non-convergence.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sharpconst/capacity.hpp"
#include "sharpconst/errors.hpp"
#include "sharpconst/report.hpp"
#include "sharpconst/sl_eigen.hpp"
#include "sharpconst/specfun.hpp"
#include "sharpconst/verifier.hpp"

namespace {

using namespace sharpconst;
using verify::Provenance;

struct Config {
  std::string problem = "corollary2";
  std::string weight = "one";
  double tol = 1e-4;
  std::string name;
  double p = 2.0, a = 0.0, b = 0.0, q = 0.0, m = 1.0, ratio = 1.0, tau = 0.0, radius = 1.0;
  int n = 3;
  std::vector<double> matrix = {1.0, 0.0, 0.0, -1.0};
  std::vector<std::string> cases = {"all"};
  double quad_tol = 1e-8;
  double log_scale = 0.0;
  std::vector<double> schedule;
  unsigned threads = 0;
  std::string out;
  std::string format = "json";
};

const std::vector<std::string> kConstantNames = {"sphere_area", "qf",      "z10",     "capacitary_Apq",
                                                 "isocap",      "hs",      "hs_critical", "sobolev",
                                                 "hardy_remainder"};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

verify::CaseParams case_params(const Config& c) {
  verify::CaseParams p;
  p.p = c.p;
  p.a = c.a;
  p.b = c.b;
  p.n = c.n;
  p.q = c.q;
  p.tau = c.tau;
  p.matrix = c.matrix;
  p.log_scale = c.log_scale;
  p.weight = c.weight;
  p.quad_rel_tol = c.quad_tol;
  p.eigen_tol = c.tol;
  return p;
}

void record_inputs(report::Report& r, const Config& c) {
  r.input("p", c.p);
  r.input("a", c.a);
  r.input("b", c.b);
  r.input("n", c.n);
  r.input("q", c.q);
  r.input("eigen_tol", c.tol);
  r.input("quad_tol", c.quad_tol);
  r.input("weight", c.weight);
}

sl::SLProblem problem_by_name(const Config& c) {
  if (c.problem == "theorem31") {
    sl::ProblemParams pp;
    if (c.weight == "one") pp.q = sl::weights::one();
    else if (c.weight == "log_critical") pp.q = sl::weights::log_critical();
    else if (c.weight == "inverse") pp.q = sl::weights::inverse();
    else if (c.weight == "sqrt_t") pp.q = sl::weights::sqrt_t();
    else if (c.weight == "inverse_log") pp.q = sl::weights::inverse_log();
    return sl::build_problem(sl::ProblemKind::theorem31, pp);
  }
  return sl::named_problem(c.problem);
}

void run_eigen(report::Report& r, const Config& c, const std::string& problem) {
  Config local = c;
  local.problem = problem;
  Stopwatch w;
  const sl::EigenResult e = sl::smallest_eigenvalue(problem_by_name(local), c.tol);
  r.eigen(problem == "theorem31" ? "theorem31[" + c.weight + "]" : problem, e, c.tol);
  r.timing("eigen:" + problem, w.seconds());
}

void run_constant(report::Report& r, const Config& c, const std::string& name) {
  const auto hs = [&] { return specfun::HSParams(c.p, c.a, c.b, c.n); };
  double v = 0.0;
  std::vector<std::pair<std::string, double>> args;
  if (name == "sphere_area") {
    v = specfun::sphere_area(c.n);
    args = {{"n", c.n}};
  } else if (name == "qf") {
    const int dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(c.matrix.size()))));
    if (dim * dim != static_cast<int>(c.matrix.size())) throw DomainError("--matrix needs n*n entries");
    v = specfun::qf_best_constant(specfun::MatrixForm::real(dim, c.matrix));
    args = {{"n", dim}};
  } else if (name == "z10") {
    v = specfun::z10_constant(c.n, c.m, c.ratio);
    args = {{"n", c.n}, {"m", c.m}, {"max_abs_ratio", c.ratio}};
  } else if (name == "capacitary_Apq") {
    v = specfun::capacitary_Apq(c.p, c.q > 0.0 ? c.q : c.p);
    args = {{"p", c.p}, {"q", c.q > 0.0 ? c.q : c.p}};
  } else if (name == "isocap") {
    v = specfun::isocap_constant(hs());
    args = {{"p", c.p}, {"a", c.a}, {"b", c.b}, {"n", c.n}};
  } else if (name == "hs") {
    const auto h = hs();
    const double q = c.q > 0.0 ? c.q : h.critical_q();
    v = specfun::hs_constant(h, q);
    args = {{"p", c.p}, {"a", c.a}, {"b", c.b}, {"n", c.n}, {"q", q}};
  } else if (name == "hs_critical") {
    const auto h = hs();
    v = specfun::hs_constant_critical(h);
    args = {{"p", c.p}, {"a", c.a}, {"b", c.b}, {"n", c.n}, {"q", h.critical_q()}};
  } else if (name == "sobolev") {
    const int m = static_cast<int>(c.m);
    v = specfun::sobolev_constant(m);
    args = {{"m", m}};
  } else if (name == "hardy_remainder") {
    v = specfun::hardy_remainder_constant(c.n);
    args = {{"n", c.n}};
  }
  r.constant(name, v, Provenance::closed_form, args);
}

std::vector<verify::CaseId> selected_cases(const Config& c, const std::vector<verify::CaseId>& pool) {
  std::vector<verify::CaseId> out;
  for (const auto& s : c.cases) {
    if (s == "all") return pool;
    if (s == "COUNTER-X1") continue;
    const auto id = verify::case_from_string(s);
    if (!id) throw CLI::ValidationError("--case", "unknown case " + s);
    if (std::find(pool.begin(), pool.end(), *id) == pool.end())
      throw CLI::ValidationError("--case", "no sharpness sweep registered for " + s);
    out.push_back(*id);
  }
  return out;
}

bool wants_counterexample(const Config& c) {
  for (const auto& s : c.cases)
    if (s == "all" || s == "COUNTER-X1") return true;
  return false;
}

void run_verify(report::Report& r, const Config& c) {
  const auto cases = selected_cases(c, verify::all_cases());
  Stopwatch w;
  for (const auto& rep : verify::run_corpus(cases, case_params(c), c.threads)) r.ratio(rep);
  r.timing("verify", w.seconds());
}

void run_sharpness(report::Report& r, const Config& c) {
  for (verify::CaseId id : selected_cases(c, verify::sweep_cases())) {
    Stopwatch w;
    r.sweep(verify::sharpness_sweep(id, c.schedule, case_params(c)));
    r.timing("sharpness:" + verify::to_string(id), w.seconds());
  }
  if (wants_counterexample(c)) {
    Stopwatch w;
    r.counterexample(verify::counterexample_x1_delta());
    r.timing("counterexample", w.seconds());
  }
}

void run_capacity(report::Report& r, const Config& c) {
  const capacity::CapacityQuery query(c.p, c.a, c.n, c.radius);
  const double cap = capacity::ball_capacity(query);
  r.constant("ball_capacity", cap, Provenance::closed_form,
             {{"p", c.p}, {"a", c.a}, {"n", c.n}, {"radius", c.radius}});
  const specfun::HSParams h(c.p, c.a, c.b, c.n);
  const capacity::IsocapCheck chk = capacity::isocap_check(h, c.radius);
  r.check("isocap_ball_equality",
          {{"mu_b_ball", capacity::mu_b_ball(c.n, c.b, c.radius)},
           {"lhs", chk.lhs},
           {"rhs", chk.rhs},
           {"relative_gap", chk.relative_gap}},
          chk.relative_gap < 1e-10);
}

bool g_nonconverged = false;

void run_all(report::Report& r, Config c) {
  // One stalled eigenproblem should not hide the rest of the run.
  for (const auto& name : sl::problem_names()) {
    try {
      Config local = c;
      // Log-critical endpoints cannot reach 1e-4 on a double-precision mesh.
      if (name == "corollary81") local.tol = std::max(c.tol, 1e-3);
      run_eigen(r, local, name);
    } catch (const ToleranceNotMet& e) {
      r.error(name + ": " + e.what() + " (best " + std::to_string(e.best_estimate()) + ", error " +
              std::to_string(e.error_estimate()) + ")");
      g_nonconverged = true;
    }
  }
  for (const auto& name : kConstantNames) {
    if (name == "sobolev" && c.m < 3) c.m = 3;
    run_constant(r, c, name);
  }
  c.cases = {"all"};
  run_verify(r, c);
  run_sharpness(r, c);
  run_capacity(r, c);
}

void write(const report::Report& r, const Config& c) {
  const std::string text = c.format == "csv" ? r.csv() : r.json();
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Sharp constants of dilation-invariant integral inequalities"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", c.out, "Report path (default stdout)");
  app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", c.threads, "Worker threads (default SHARPCONST_THREADS or all cores)");

  auto hs_opts = [&](CLI::App* s) {
    s->add_option("--p", c.p, "Gradient exponent p");
    s->add_option("--a", c.a, "Gradient weight exponent a");
    s->add_option("--b", c.b, "Measure weight exponent b");
    s->add_option("--n", c.n, "Dimension n");
    s->add_option("--q", c.q, "Exponent q (0: critical)");
  };
  const std::vector<std::string> weight_names = {"one", "log_critical", "inverse", "sqrt_t", "inverse_log"};

  auto* eigen = app.add_subcommand("eigen", "Smallest eigenvalue of a Sturm-Liouville problem");
  std::vector<std::string> problems = sl::problem_names();
  problems.push_back("theorem31");
  eigen->add_option("--problem", c.problem, "Problem name")->check(CLI::IsMember(problems));
  eigen->add_option("--weight", c.weight, "Weight q for --problem theorem31")->check(CLI::IsMember(weight_names));
  eigen->add_option("--tol", c.tol, "Absolute tolerance")->check(CLI::PositiveNumber);

  auto* constant = app.add_subcommand("constant", "Closed-form sharp constant");
  constant->add_option("--name", c.name, "Constant name")->required()->check(CLI::IsMember(kConstantNames));
  hs_opts(constant);
  constant->add_option("--m", c.m, "Order m (z10) or dimension m (sobolev)");
  constant->add_option("--ratio", c.ratio, "max |P|/|Q|^2 on the sphere (z10)");
  constant->add_option("--matrix", c.matrix, "Row-major real matrix (qf)");

  std::vector<std::string> case_names = {"all"};
  for (auto id : verify::all_cases()) case_names.push_back(verify::to_string(id));
  std::vector<std::string> sweep_names = {"all", "COUNTER-X1"};
  for (auto id : verify::sweep_cases()) sweep_names.push_back(verify::to_string(id));

  auto* ver = app.add_subcommand("verify", "Evaluate inequality cases on the standard corpus");
  ver->add_option("--case", c.cases, "Case ids or all")->check(CLI::IsMember(case_names));
  hs_opts(ver);
  ver->add_option("--tau", c.tau, "Lorentz exponent tau for INEQ-60A (0: critical)");
  ver->add_option("--weight", c.weight, "Angular weight for INEQ-1U / INEQ-2U")->check(CLI::IsMember(weight_names));
  ver->add_option("--matrix", c.matrix, "Row-major 2x2 matrix for INEQ-QF")->expected(4);
  ver->add_option("--log-scale", c.log_scale, "Shift c in the INEQ-T1 weight");
  ver->add_option("--tol", c.tol, "Eigenvalue tolerance")->check(CLI::PositiveNumber);
  ver->add_option("--quad-tol", c.quad_tol, "Quadrature relative tolerance")->check(CLI::PositiveNumber);

  auto* sharp = app.add_subcommand("sharpness", "Sharpness sweeps and the counterexample");
  sharp->add_option("--case", c.cases, "Sweep case ids, COUNTER-X1 or all")->check(CLI::IsMember(sweep_names));
  sharp->add_option("--schedule", c.schedule, "Override the default schedule");
  hs_opts(sharp);
  sharp->add_option("--weight", c.weight, "Angular weight for INEQ-1U")->check(CLI::IsMember(weight_names));
  sharp->add_option("--matrix", c.matrix, "Row-major 2x2 matrix for INEQ-QF")->expected(4);
  sharp->add_option("--tol", c.tol, "Eigenvalue tolerance")->check(CLI::PositiveNumber);

  auto* cap = app.add_subcommand("capacity", "Ball capacity and the isocapacitary equality");
  hs_opts(cap);
  cap->add_option("--radius", c.radius, "Ball radius")->check(CLI::PositiveNumber);

  auto* all = app.add_subcommand("all", "Everything above with default settings");
  all->add_option("--tol", c.tol, "Eigenvalue tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  report::Report rep(app.get_subcommands().front()->get_name());
  record_inputs(rep, c);
  Stopwatch total;
  try {
    if (eigen->parsed()) {
      rep.input("problem", c.problem);
      run_eigen(rep, c, c.problem);
    } else if (constant->parsed()) {
      run_constant(rep, c, c.name);
    } else if (ver->parsed()) {
      run_verify(rep, c);
    } else if (sharp->parsed()) {
      run_sharpness(rep, c);
    } else if (cap->parsed()) {
      rep.input("radius", c.radius);
      run_capacity(rep, c);
    } else if (all->parsed()) {
      run_all(rep, c);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InadmissibleField& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ToleranceNotMet& e) {
    std::cerr << "not converged: " << e.what() << " (best " << e.best_estimate() << ", error "
              << e.error_estimate() << ")\n";
    rep.error(e.what());
    write(rep, c);
    return 3;
  } catch (const NoFiniteConstant& e) {
    std::cerr << "no finite constant: " << e.what() << "\n";
    rep.error(e.what());
    write(rep, c);
    return 1;
  }
  rep.timing("total", total.seconds());
  try {
    write(rep, c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (g_nonconverged) return 3;
  return rep.passed() ? 0 : 1;
}
