#pragma once

// Registry of the sharp inequalities as (lhs, rhs) functionals, ratio
// evaluation over field corpora, sharpness sweeps and the counterexample for
// the Laplacian version of the Hessian estimate.

#include <optional>
#include <string>
#include <vector>

#include "sharpconst/fields.hpp"
#include "sharpconst/specfun.hpp"

namespace sharpconst::verify {

enum class CaseId {
  x1,        // int |grad u|^2 <= (1/4pi) (int |Hess u|)^2 in R^2
  qf,        // |int <A grad u, grad u>| <= C (int |Lap u|)^2 in R^2, tr A = 0
  m1,        // |Re int (x.grad u) Lap u / |x|^2| <= int |Lap u|^2
  m1_ortho,  // same with factor 3/4 and sign <= 0 for zero angular mean
  elem,      // |3x - 1 + k^2| <= x^2 + 2(k^2+1)x + (k^2-1)^2 on a grid
  t1,        // log-weighted Garding inequality on the punctured plane
  u1,        // int x_2 |grad u|^2 >= lambda(q) int q(x_2/|x|) |u|^2 / |x|
  u2,        // Hardy remainder with weight q(x_2/|x|) / (x_2 |x|)
  u8,        // Hardy remainder with weight 1 / (x_2^2 (1 - log(x_2/|x|))^2)
  f7,        // angular Hardy inequality with constant 1/2
  a60,       // Lorentz-norm Hardy-Sobolev inequality (level sets)
  c60,       // weighted Hardy-Sobolev inequality at the critical exponent
  x60,       // capacitary integral inequality
  x7,        // Hardy inequality with Sobolev remainder in the half-plane
  x8,        // Sobolev inequality in R^m
};

std::string to_string(CaseId id);
std::optional<CaseId> case_from_string(const std::string& s);
std::vector<CaseId> all_cases();

enum class Provenance { closed_form, eigenvalue, paper_value };
std::string to_string(Provenance p);

struct CaseParams {
  // Hardy-Sobolev family (a60, c60, x60).
  double p = 2.0, a = 0.0, b = 0.0;
  int n = 3;
  double q = 0.0;    // 0: critical exponent (n-b)p/(n-p-a)
  double tau = 0.0;  // a60 only; 0: (n-b)p/(n-p-a)
  // qf: real 2x2 matrix, row major.
  std::vector<double> matrix = {1.0, 0.0, 0.0, -1.0};
  // t1: shift c in the weight log(1/|x|) + c.
  double log_scale = 0.0;
  // u1 / u2: weight q on (0,1) by name (one, log_critical, sqrt_t, inverse_log).
  std::string weight = "one";
  // Tolerances.
  double quad_rel_tol = 1e-8;
  double eigen_tol = 1e-4;
};

struct RatioReport {
  std::string case_id;
  std::string field_id;
  double lhs = 0.0, lhs_err = 0.0;
  double rhs = 0.0, rhs_err = 0.0;
  double ratio = 0.0;
  bool pass = false;
  double constant = 0.0;
  Provenance provenance = Provenance::closed_form;
  /// Case-specific diagnostics (signed quantity, alternative forms, eigen mesh data).
  std::vector<std::pair<std::string, double>> extras;
  std::string note;
};

/// Verdict rule: ratio <= 1 + (lhs_err + rhs_err)/rhs + 1e-9.
bool verdict(double lhs, double lhs_err, double rhs, double rhs_err);

/// Throws InadmissibleField naming the violated predicate.
void check_admissible(CaseId id, const fields::ComplexField& u, const CaseParams& params = {});

/// Ratio lhs/rhs for one field.  elem ignores the field and runs the grid check.
RatioReport evaluate_case(CaseId id, const fields::ComplexField& u, const CaseParams& params = {});

/// Best constant used by a case, with its provenance.
std::pair<double, Provenance> case_constant(CaseId id, const CaseParams& params = {});

/// Smallest eigenvalue of the angular problem for a named weight, cached per process.
struct CachedEigen {
  double lambda = 0.0;
  double error_estimate = 0.0;
  long elements = 0;
  int levels = 0;
};
CachedEigen angular_lambda(const std::string& weight, double tol = 1e-4);

// ---------------------------------------------------------------------------
// Exhaustive check of the elementary inequality behind INEQ-1M

struct ElemPoint {
  int k = 0;
  long i = 0;  // x = i / scale
};

struct ElemReport {
  long points = 0;
  long violations = 0;
  std::vector<ElemPoint> equality;    // lhs == rhs > 0
  std::vector<ElemPoint> degenerate;  // lhs == rhs == 0
  double max_ratio = 0.0;             // over points with rhs > 0
  bool pass = false;                  // no violation, equality only at (0, 0)
};

/// Grid x = i/scale for i in [0, x_max*scale], k in [0, k_max], exact integer arithmetic.
ElemReport elem_grid_check(double x_max = 100.0, int k_max = 50, long scale = 1000);

// ---------------------------------------------------------------------------
// Sharpness sweeps and the counterexample

struct SweepReport {
  std::string case_id;
  std::string family;
  std::vector<double> schedule;
  std::vector<RatioReport> reports;
  bool nondecreasing = false;
  double final_ratio = 0.0;
  bool certified = false;  // final >= 0.95 and nondecreasing within error bars
};

/// Registered sweeps: t1, qf, u1, c60, x8.  An empty schedule selects the default one.
SweepReport sharpness_sweep(CaseId id, std::vector<double> schedule = {}, const CaseParams& params = {});
std::vector<CaseId> sweep_cases();

struct CounterexampleReport {
  std::vector<double> eps;
  std::vector<double> ratios;  // int |grad u|^2 / (int |Lap u|)^2
  double growth = 0.0;         // last / first
  bool increasing = false;
  bool pass = false;           // increasing and growth > 2
};

CounterexampleReport counterexample_x1_delta(std::vector<double> eps_schedule = {0.1, 0.01, 1e-3});

// ---------------------------------------------------------------------------
// Quadratic form versus kernel form for n = 2

struct QFCrossCheck {
  double quadratic_form = 0.0;  // Re int <A grad u, grad u>
  double kernel_form = 0.0;     // (1/2pi) Re int int K(x-y) h(y) conj h(x), h = -Lap u
  double relative_difference = 0.0;
};

QFCrossCheck qf_cross_check(const fields::ComplexField& u, const specfun::MatrixForm& a);

// ---------------------------------------------------------------------------
// Corpus runs

/// At least three admissible fields per case.
std::vector<fields::ComplexField> standard_corpus(CaseId id, const CaseParams& params = {});

/// Evaluates every (case, field) pair on up to `threads` workers (0: SHARPCONST_THREADS
/// or hardware concurrency).  Results are ordered by case id, then field id.
std::vector<RatioReport> run_corpus(const std::vector<CaseId>& cases, const CaseParams& params = {},
                                    unsigned threads = 0);

unsigned worker_count(unsigned requested = 0);

}  // namespace sharpconst::verify
