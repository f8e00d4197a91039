#include "sharpconst/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sharpconst/errors.hpp"
#include "sharpconst/quad.hpp"

namespace sharpconst::capacity {

CapacityQuery::CapacityQuery(double p, double a, int n, double radius)
    : p_(p), a_(a), n_(n), radius_(radius) {
  if (!(p >= 1.0 && p < n))
    throw DomainError("capacity: need 1 <= p < n (p=" + std::to_string(p) + ", n=" + std::to_string(n) + ")");
  if (!(a >= 0.0 && a < n - p))
    throw DomainError("capacity: need 0 <= a < n-p (a=" + std::to_string(a) + ")");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("capacity: need a finite radius > 0");
}

double ball_capacity(const CapacityQuery& q) {
  const double p = q.p(), a = q.a();
  const int n = q.n();
  const double k = n - p - a;
  // At p = 1 the factor is 0^0 = 1 (the p -> 1 limit).
  const double factor = p == 1.0 ? 1.0 : specfun::pow0(k / (p - 1.0), p - 1.0);
  return specfun::sphere_area(n) * factor * std::pow(q.radius(), k);
}

double mu_b_ball(int n, double b, double radius) {
  if (n < 1) throw DomainError("mu_b_ball: need n >= 1");
  if (!(b < n)) throw DomainError("mu_b_ball: need b < n");
  if (!(radius > 0.0)) throw DomainError("mu_b_ball: need radius > 0");
  return specfun::sphere_area(n) * std::pow(radius, n - b) / (n - b);
}

IsocapCheck isocap_check(const specfun::HSParams& h, double radius) {
  const int n = h.n();
  const double e = (n - h.p() - h.a()) / (n - h.b());
  IsocapCheck c;
  c.lhs = std::pow(mu_b_ball(n, h.b(), radius), e);
  c.rhs = specfun::isocap_constant(h) * ball_capacity(CapacityQuery(h.p(), h.a(), n, radius));
  c.relative_gap = std::abs(c.lhs - c.rhs) / std::max(std::abs(c.lhs), std::abs(c.rhs));
  return c;
}

double capacitary_lhs_radial(const fields::ScalarField& u, const specfun::HSParams& h, double q) {
  if (!(q >= h.p())) throw DomainError("capacitary_lhs_radial: need q >= p");
  const auto& prof = u.radial_profile();
  if (!prof || !prof->nonincreasing())
    throw DomainError("capacitary_lhs_radial: need a radial nonincreasing field");
  const double top = std::pow(std::max(prof->eval(0.0).f, 0.0), q);
  if (!(top > 0.0)) return 0.0;
  const int n = h.n();
  const double cap1 = ball_capacity(CapacityQuery(h.p(), h.a(), n, 1.0));
  const double k = n - h.p() - h.a();
  quad::QuadOptions o;
  o.grade_lower = true;
  o.grade_upper = true;
  // s = t^q; cap(M_t) = cap1 * r(t)^k.
  const auto r = quad::integrate(
      [&](double s) {
        const double t = std::pow(s, 1.0 / q);
        if (!(t > 0.0)) return 0.0;
        const double rad = quad::level_set_radius(u, t);
        if (rad == 0.0) return 0.0;
        return std::pow(cap1 * std::pow(rad, k), q / h.p());
      },
      0.0, top, o);
  return std::pow(r.value, 1.0 / q);
}

double gradient_norm_radial(const fields::ScalarField& u, double p, double a) {
  const auto& prof = u.radial_profile();
  if (!prof) throw DomainError("gradient_norm_radial: need a radial field");
  if (!(p >= 1.0)) throw DomainError("gradient_norm_radial: need p >= 1");
  const int n = u.dimension();
  if (!(a < n)) throw DomainError("gradient_norm_radial: need a < n");
  quad::QuadOptions o;
  o.grade_lower = true;
  const double R = prof->support_radius();
  const auto f = [&](double r) {
    if (!(r > 0.0)) return 0.0;
    return std::pow(std::abs(prof->eval(r).df), p) * std::pow(r, n - 1 - a);
  };
  double total = 0.0;
  if (std::isfinite(R)) {
    total = quad::integrate(f, 0.0, R, o).value;
  } else {
    total = quad::integrate(f, 0.0, 1.0, o).value + quad::integrate(f, 1.0, INFINITY).value;
  }
  return std::pow(specfun::sphere_area(n) * total, 1.0 / p);
}

}  // namespace sharpconst::capacity
