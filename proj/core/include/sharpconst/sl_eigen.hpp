#pragma once

// Weighted Sturm-Liouville problems
//   lambda = inf (int p |y'|^2 + V |y|^2) / (int w |y|^2)
// solved with P1 finite elements on endpoint-graded nested meshes.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sharpconst::sl {

/// Location inside a segment [seg_lo, seg_hi] with both endpoint distances kept
/// exactly, so weights can resolve singular endpoints far below ulp(x).
struct Where {
  double x = 0.0;
  double seg_lo = 0.0, seg_hi = 0.0;
  double from_lo = 0.0, from_hi = 0.0;
};

/// |sin x| computed from the distance to the nearest multiple of pi among the
/// segment endpoints.
double abs_sin(const Where& w);

/// Local behaviour c d^alpha (1 - log d)^beta at distance d from an endpoint.
struct EndpointClass {
  enum class Kind { regular, power, power_log };
  Kind kind = Kind::regular;
  double alpha = 0.0;
  double beta = 0.0;

  static EndpointClass regular() { return {}; }
  static EndpointClass power(double alpha) { return {Kind::power, alpha, 0.0}; }
  static EndpointClass power_log(double alpha, double beta) { return {Kind::power_log, alpha, beta}; }

  /// d^alpha (1 - log d)^beta (1 for regular).
  double model(double d) const;
  /// Integrability of model * d^extra near d = 0.
  bool integrable(double extra = 0.0) const;
  std::string describe() const;
};

class WeightExpr {
 public:
  using Fn = std::function<double(const Where&)>;

  WeightExpr(Fn f, EndpointClass at_lo, EndpointClass at_hi, std::string name);
  /// Weight f(t) of one variable on (lo, hi); t is rebuilt from the nearer
  /// endpoint distance.  Runs the endpoint self-test.
  static WeightExpr of_t(std::function<double(double)> f, double lo, double hi, EndpointClass at_lo,
                         EndpointClass at_hi, std::string name);
  static WeightExpr constant(double c, std::string name = "");

  double operator()(const Where& w) const { return f_(w); }
  const EndpointClass& at_lo() const noexcept { return lo_; }
  const EndpointClass& at_hi() const noexcept { return hi_; }
  const std::string& name() const noexcept { return name_; }
  const Fn& fn() const noexcept { return f_; }

  /// Self-test: w(d) / model(d) at d = 1e-6 and 1e-9 agree within a factor 2
  /// at each declared singular endpoint of [lo, hi].
  void self_test(double lo, double hi) const;

 private:
  Fn f_;
  EndpointClass lo_, hi_;
  std::string name_;
};

enum class Boundary { natural, dirichlet, periodic };

class SLProblem {
 public:
  /// `breaks` are interior points splitting the interval into segments; the
  /// weights' endpoint classes apply at both ends of every segment.
  SLProblem(double lo, double hi, WeightExpr leading, WeightExpr potential, WeightExpr rhs,
            Boundary boundary, std::vector<double> breaks = {}, std::string name = "");

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const WeightExpr& leading() const noexcept { return leading_; }
  const WeightExpr& potential() const noexcept { return potential_; }
  const WeightExpr& rhs() const noexcept { return rhs_; }
  Boundary boundary() const noexcept { return boundary_; }
  const std::string& name() const noexcept { return name_; }
  /// Segment endpoints lo, breaks..., hi.
  std::vector<double> segment_points() const;

 private:
  double lo_, hi_;
  WeightExpr leading_, potential_, rhs_;
  Boundary boundary_;
  std::vector<double> breaks_;
  std::string name_;
};

struct EigenResult {
  double lambda = 0.0;
  double error_estimate = 0.0;
  std::vector<double> nodes;
  std::vector<double> eigenfunction;
  /// (element count, discrete lambda) per refinement level.
  std::vector<std::pair<long, double>> mesh_levels;
};

struct SolveOptions {
  int base_elements = 32;           // per segment, before grading layers
  long max_elements = 1L << 18;
  int min_levels = 3;
  int graded_layers = 40;           // ratio 0.75 toward singular endpoints
  double log_class_depth = 1e-280;  // smallest element for log-class endpoints
};

/// Smallest eigenvalue with Richardson extrapolation over nested meshes.
/// Throws NoFiniteConstant when the rhs weight is not integrable and
/// ToleranceNotMet when refinement stalls above `tol`.
EigenResult smallest_eigenvalue(const SLProblem& problem, double tol, const SolveOptions& opts = {});

/// Trial function value and derivative.
using Trial = std::function<std::pair<double, double>(const Where&)>;

/// (int p y'^2 + V y^2) / (int w y^2) by adaptive quadrature.
double rayleigh_quotient(const SLProblem& problem, const Trial& trial);

enum class ProblemKind { theorem31, corollary81, corollary2, remark7, remark8 };

struct ProblemParams {
  /// Weight q(t) on (0,1) (theorem31, remark8) or on (-1,1) (remark7).
  std::optional<WeightExpr> q;
  /// Weight p(t) for remark7 / remark8.
  std::optional<WeightExpr> p;
  double mu = 0.0;
  int n = 3;
  /// remark8 only: rhs given directly as a weight of the angle on each half period.
  std::optional<WeightExpr> rhs_angle;
};

SLProblem build_problem(ProblemKind kind, const ProblemParams& params = {});

/// Registered problems by name: corollary2, corollary81, legendre, hlp, remark8_hlp, remark7_n3.
SLProblem named_problem(const std::string& name);
std::vector<std::string> problem_names();

/// sup_{0<t<1} (1 - log t) int_0^t q; +inf when the integral diverges.
double hardy_condition_sup(const WeightExpr& q);

/// Exact upper bounds for lambda of theorem31(q) from the trial functions
/// z = 1 and z = min(xi/eta, 1) after sin(phi) = sech(xi); 0 when q is not integrable.
double lambda_upper_bounds(const WeightExpr& q);

/// Weights on (0,1) used throughout: 1, t^-1 (1 - log t)^-2, t^-1, t^{1/2}, (1 - log t)^-1.
namespace weights {
WeightExpr one();
WeightExpr log_critical();
WeightExpr inverse();
WeightExpr sqrt_t();
WeightExpr inverse_log();
}  // namespace weights

}  // namespace sharpconst::sl
