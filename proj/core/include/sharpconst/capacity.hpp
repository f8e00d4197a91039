#pragma once

// (p, a)-capacities of balls and the capacitary integral inequality for
// radial functions.

#include "sharpconst/fields.hpp"
#include "sharpconst/specfun.hpp"

namespace sharpconst::capacity {

/// Ball of radius `radius` in R^n with capacity exponents p and a.
/// Construction enforces 1 <= p < n, 0 <= a < n-p, radius > 0.
class CapacityQuery {
 public:
  CapacityQuery(double p, double a, int n, double radius);

  double p() const noexcept { return p_; }
  double a() const noexcept { return a_; }
  int n() const noexcept { return n_; }
  double radius() const noexcept { return radius_; }

 private:
  double p_, a_;
  int n_;
  double radius_;
};

/// cap_{p,a}(B_R, R^n) = |S^{n-1}| ((n-p-a)/(p-1))^{p-1} R^{n-p-a}.
double ball_capacity(const CapacityQuery& q);

/// mu_b(B_R) = int_{B_R} |x|^{-b} dx.
double mu_b_ball(int n, double b, double radius);

struct IsocapCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_gap = 0.0;
};

/// Both sides of mu_b(B)^{(n-p-a)/(n-b)} <= c cap_{p,a}(B) for a ball; equality holds.
IsocapCheck isocap_check(const specfun::HSParams& h, double radius);

/// (int_0^inf cap_{p,a}(M_t)^{q/p} d(t^q))^{1/q} for u radial nonincreasing.
double capacitary_lhs_radial(const fields::ScalarField& u, const specfun::HSParams& h, double q);

/// (int |grad u|^p |x|^{-a} dx)^{1/p} for a radial field.
double gradient_norm_radial(const fields::ScalarField& u, double p, double a);

}  // namespace sharpconst::capacity
