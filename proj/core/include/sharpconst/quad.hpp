#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for scalar and vector integrands,
// plus nested rules for the coordinate systems used by the verifier.

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "sharpconst/fields.hpp"

namespace sharpconst::quad {

inline constexpr int kMaxComponents = 8;
using Values = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxComponents, 1>;
using ScalarFn = std::function<double(double)>;
using VectorFn = std::function<Values(double)>;

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-10;
  long max_evaluations = 2'000'000;
  bool throw_on_failure = true;
  /// Interior points where the integrand is not smooth.
  std::vector<double> breakpoints;
  /// Split geometrically toward an endpoint with an integrable singularity.
  bool grade_lower = false;
  bool grade_upper = false;
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
};

struct VectorResult {
  Values value;
  Values abs_error_estimate;
  long evaluations = 0;
  bool converged = true;
};

/// Integral over [a, b]; b may be +infinity.  Each component k is accepted once
/// err_k <= max(abs_tol, rel_tol * int |f_k|).
VectorResult integrate(const VectorFn& f, int components, double a, double b,
                       const QuadOptions& opts = {});
QuadResult integrate(const ScalarFn& f, double a, double b, const QuadOptions& opts = {});

// ---------------------------------------------------------------------------
// Multi-dimensional integrands

enum class Coordinates {
  cartesian,    // n = 1 or 2, box [-R, R]^n
  radial,       // f(x) = f(|x| e_1) on R^n
  polar,        // n = 2, full plane, r outer and angle inner
  half_polar,   // n = 2, upper half-plane, angle in (0, pi)
  cylindrical,  // R^n functions of (|x'|, x_n); half-space when `half_space` is set
};

struct Integrand {
  /// Point in R^n -> vector of component values.
  std::function<Values(std::span<const double>)> eval;
  int components = 1;
  int dimension = 2;
  Coordinates coordinates = Coordinates::polar;
  /// Truncation radius; +inf for slowly decaying integrands (handled by a map to [0,1)).
  double support_radius = std::numeric_limits<double>::infinity();
  /// Integrand vanishes for |x| < inner_radius (polar / radial).
  double inner_radius = 0.0;
  bool half_space = false;
  std::vector<double> radial_breakpoints;
  std::vector<double> angular_breakpoints;
  /// Integrable singularity at r = 0 (radial / polar) or at the boundary angle.
  bool singular_origin = false;
  bool singular_boundary = false;
  /// half_polar only: the angular integrand may behave like 1/(phi (1 - log phi)^2) at
  /// phi = 0 and pi; each quarter is mapped by phi = (pi/2) exp(1 - 1/s).
  bool log_singular_boundary = false;
};

VectorResult integrate(const Integrand& f, const QuadOptions& opts = {});

/// Truncation radius used for a field: support radius plus margin 2.
double truncation_radius(double support_radius);

// ---------------------------------------------------------------------------
// Level sets of radial nonincreasing fields

/// Radius of the level set {|u| >= t} of a radial nonincreasing field; 0 above max u.
double level_set_radius(const fields::ScalarField& u, double t);

/// mu_b(M_t) = int_{|u| >= t} |x|^{-b} dx for u radial nonincreasing.
double mu_b_measure(const fields::ScalarField& u, double t, double b);

/// (int_0^inf mu_b(M_t)^{q/tau} d(t^q))^{1/q}.
double lorentz_quasinorm(const fields::ScalarField& u, double tau, double q, double b,
                         const QuadOptions& opts = {});

}  // namespace sharpconst::quad
