#pragma once

// Dual (kernel) form of the quadratic form of the gradient in R^2:
//   int <A grad u, grad u> = (1/2pi) int int K(x - y) h(y) conj h(x) dx dy,
//   h = -Lap u,  K(z) = -(1/2) sum a_ij z_i z_j / |z|^2.
// K is bounded and homogeneous of degree 0, so the double integral converges
// absolutely and is evaluated by a tensor Gauss-Legendre rule in polar
// coordinates for both points.

#include <complex>
#include <functional>

#include "sharpconst/specfun.hpp"

namespace sharpconst::kernel {

using ComplexFn = std::function<std::complex<double>(double x1, double x2)>;

/// Polar box r in [r_lo, r_hi], phi in [phi_lo, phi_hi] containing the support of h.
struct PolarWindow {
  double r_lo = 0.0, r_hi = 1.0;
  double phi_lo = 0.0, phi_hi = 6.283185307179586;
  /// Panels uniform in log r instead of r (needs r_lo > 0).
  bool log_radial = false;
  int radial_panels = 16;
  int angular_panels = 16;
};

struct KernelResult {
  std::complex<double> value;
  /// |value(rule) - value(rule with half the panels per direction)|.
  double abs_error_estimate = 0.0;
};

/// K(z) for the matrix a (n = 2).
std::complex<double> kernel(const specfun::MatrixForm& a, double z1, double z2);

/// (1/2pi) int int K(x - y) h(y) conj h(x) dx dy.
KernelResult kernel_form(const ComplexFn& h, const PolarWindow& w, const specfun::MatrixForm& a);

/// Same double integral for smooth h supported in |x| <= support_radius: the inner
/// integral (K * h)(x) is taken in polar coordinates centred at x, where K depends
/// only on the angle and the integrand is smooth.  `panels` GL panels of order 8 per
/// radial direction; the error estimate compares with half the panels.
KernelResult kernel_form_smooth(const ComplexFn& h, double support_radius, const specfun::MatrixForm& a,
                                int panels = 8);

/// int |h| on the same rule.
double l1_norm(const ComplexFn& h, const PolarWindow& w);

}  // namespace sharpconst::kernel
