#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sharpconst/capacity.hpp"
#include "sharpconst/errors.hpp"
#include "sharpconst/fields.hpp"
#include "sharpconst/specfun.hpp"

using namespace sharpconst;
using namespace sharpconst::capacity;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

namespace {

// min sum_i c_i |u_i - u_{i+1}|^p over grid functions with u = 1 at R and 0 at the
// far end.  With conductances c_i the optimum is (sum c_i^{-1/(p-1)})^{1-p}.
double grid_capacity(double p, double a, int n, double R) {
  constexpr int cells = 10000;
  const double span = 40.0;  // log(Rmax / R)
  const double h = span / cells;
  double s = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double r0 = R * std::exp(i * h), r1 = R * std::exp((i + 1) * h), rm = std::sqrt(r0 * r1);
    const double c = std::pow(rm, n - 1 - a) / std::pow(r1 - r0, p - 1);
    s += std::pow(c, -1 / (p - 1));
  }
  return specfun::sphere_area(n) * std::pow(s, 1 - p);
}

}  // namespace

TEST_CASE("ball capacity against a grid minimisation") {
  struct Case {
    double p, a;
    int n;
    double R;
  };
  for (const Case c : {Case{2, 0, 3, 1}, Case{2, 0.5, 3, 2.5}, Case{1.5, 0, 2, 0.7}, Case{3, 1, 5, 1.3},
                       Case{2.5, 0.2, 4, 0.4}}) {
    CAPTURE(c.p);
    CAPTURE(c.n);
    const double exact = ball_capacity(CapacityQuery(c.p, c.a, c.n, c.R));
    CHECK(grid_capacity(c.p, c.a, c.n, c.R) == Approx(exact).epsilon(1e-4));
  }
  CHECK(ball_capacity(CapacityQuery(2, 0, 3, 1)) == Approx(4 * kPi).epsilon(1e-14));
}

TEST_CASE("p = 1 is the weighted perimeter and the p -> 1 limit") {
  const double R = 1.7, a = 0.3;
  const double perim = specfun::sphere_area(3) * std::pow(R, 2 - a);
  CHECK(ball_capacity(CapacityQuery(1, a, 3, R)) == Approx(perim).epsilon(1e-14));
  CHECK(ball_capacity(CapacityQuery(1 + 1e-7, a, 3, R)) == Approx(perim).epsilon(1e-5));
}

TEST_CASE("isocapacitary equality on balls") {
  for (double R : {0.3, 1.0, 7.0}) {
    const auto c = isocap_check(specfun::HSParams(2, 0.5, 1.0, 4), R);
    CHECK(c.relative_gap < 1e-12);
    CHECK(c.lhs == Approx(c.rhs).epsilon(1e-12));
  }
  CHECK(mu_b_ball(3, 1, 2) == Approx(4 * kPi * 2).epsilon(1e-14));
}

TEST_CASE("invalid queries") {
  CHECK_THROWS_AS(CapacityQuery(3, 0, 2, 1), DomainError);
  CHECK_THROWS_AS(CapacityQuery(2, 1, 3, 1), DomainError);
  CHECK_THROWS_AS(CapacityQuery(2, 0, 3, 0), DomainError);
}

TEST_CASE("capacitary side of a tent") {
  // Level sets of max(0, 1 - r/R) are balls of radius R(1 - t).
  const double R = 2.0, p = 2, a = 0, q = 6;
  const int n = 3;
  const specfun::HSParams h(p, a, 0, n);
  const auto u = fields::radial(fields::profiles::tent(R), n);
  const double k = n - p - a, C = ball_capacity(CapacityQuery(p, a, n, 1.0));
  const double beta = std::exp(std::lgamma(q) + std::lgamma(k * q / p + 1) - std::lgamma(q + k * q / p + 1));
  const double want = std::pow(std::pow(C, q / p) * std::pow(R, k * q / p) * q * beta, 1 / q);
  CHECK(capacitary_lhs_radial(u, h, q) == Approx(want).epsilon(1e-8));
}

TEST_CASE("gradient norm of a gaussian") {
  const double w = 0.9;
  const auto u = fields::gaussian_bump(3, {}, w).re;
  CHECK(gradient_norm_radial(u, 2, 0) == Approx(std::sqrt(1.5 * std::pow(kPi, 1.5) * w)).epsilon(1e-9));
}

TEST_CASE("capacitary inequality holds for radial fields") {
  const specfun::HSParams h(2, 0, 0, 3);
  for (double w : {0.5, 1.0, 2.0}) {
    const auto u = fields::gaussian_bump(3, {}, w).re;
    for (double q : {2.0, 4.0, 6.0}) {
      const double lhs = capacitary_lhs_radial(u, h, q);
      const double rhs = specfun::capacitary_Apq(2, q) * gradient_norm_radial(u, 2, 0);
      CHECK(lhs <= rhs);
    }
  }
}
