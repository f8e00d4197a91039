#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "sharpconst/errors.hpp"
#include "sharpconst/fields.hpp"
#include "sharpconst/quad.hpp"
#include "sharpconst/specfun.hpp"

using namespace sharpconst;
using namespace sharpconst::quad;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {

Values one(double v) {
  Values out(1);
  out << v;
  return out;
}

double gauss(std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::exp(-r2);
}

}  // namespace

TEST_CASE("one-dimensional rules") {
  CHECK(integrate([](double x) { return x * x * x; }, 0, 1).value == Approx(0.25).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0, kInf).value == Approx(1).epsilon(1e-12));
  CHECK(integrate([](double x) { return 1 / (1 + x * x); }, 0, kInf).value == Approx(kPi / 2).epsilon(1e-12));

  QuadOptions o;
  o.grade_lower = true;
  CHECK(integrate([](double x) { return std::log(x); }, 0, 1, o).value == Approx(-1).epsilon(1e-10));
  CHECK(integrate([](double x) { return 1 / std::sqrt(x); }, 0, 1, o).value == Approx(2).epsilon(1e-10));

  QuadOptions kink;
  kink.breakpoints = {1.0 / 3};
  CHECK(integrate([](double x) { return std::abs(x - 1.0 / 3); }, 0, 1, kink).value ==
        Approx(5.0 / 18).epsilon(1e-14));
}

TEST_CASE("vector integrand accepts each component separately") {
  const auto r = integrate(
      [](double x) {
        Values v(2);
        v << std::sin(x), 1e-8 * std::cos(x);
        return v;
      },
      2, 0, kPi);
  CHECK(r.value(0) == Approx(2).epsilon(1e-12));
  CHECK(std::abs(r.value(1)) < 1e-15);
  CHECK(r.converged);
}

TEST_CASE("failure to converge") {
  QuadOptions o;
  o.max_evaluations = 60;
  const auto f = [](double x) { return std::sin(1 / x); };
  CHECK_THROWS_AS(integrate(f, 1e-6, 1, o), ToleranceNotMet);
  o.throw_on_failure = false;
  CHECK_FALSE(integrate(f, 1e-6, 1, o).converged);
}

TEST_CASE("plane and space integrals of a gaussian") {
  Integrand g;
  g.eval = [](std::span<const double> x) { return one(gauss(x)); };
  g.support_radius = 7.0;

  g.coordinates = Coordinates::polar;
  CHECK(integrate(g).value(0) == Approx(kPi).epsilon(1e-9));
  g.coordinates = Coordinates::half_polar;
  CHECK(integrate(g).value(0) == Approx(kPi / 2).epsilon(1e-9));
  g.coordinates = Coordinates::cartesian;
  CHECK(integrate(g).value(0) == Approx(kPi).epsilon(1e-9));
  g.coordinates = Coordinates::radial;
  g.dimension = 3;
  CHECK(integrate(g).value(0) == Approx(std::pow(kPi, 1.5)).epsilon(1e-9));
  g.dimension = 5;
  CHECK(integrate(g).value(0) == Approx(std::pow(kPi, 2.5)).epsilon(1e-9));
  g.coordinates = Coordinates::cylindrical;
  g.dimension = 3;
  CHECK(integrate(g).value(0) == Approx(std::pow(kPi, 1.5)).epsilon(1e-8));
  g.half_space = true;
  CHECK(integrate(g).value(0) == Approx(std::pow(kPi, 1.5) / 2).epsilon(1e-8));
}

TEST_CASE("singular integrands") {
  // int_{R^2} e^{-r^2} / r = pi^{3/2}
  Integrand f;
  f.eval = [](std::span<const double> x) { return one(gauss(x) / std::hypot(x[0], x[1])); };
  f.coordinates = Coordinates::polar;
  f.singular_origin = true;
  f.support_radius = 7.0;
  CHECK(integrate(f).value(0) == Approx(std::pow(kPi, 1.5)).epsilon(1e-8));

  // int_0^pi dphi / (phi' (1 - log phi')^2), phi' = min(phi, pi - phi)/(pi/2), radial factor 2 r e^{-r^2}
  Integrand h;
  h.coordinates = Coordinates::half_polar;
  h.log_singular_boundary = true;
  h.support_radius = 7.0;
  h.eval = [](std::span<const double> x) {
    const double r = std::hypot(x[0], x[1]);
    const double d = std::atan2(x[1], std::abs(x[0])) / (kPi / 2);
    if (d == 0.0) return one(0.0);  // x_2 underflows for tiny r
    return one(2 * std::exp(-r * r) / (d * std::pow(1 - std::log(d), 2)));
  };
  // Each quarter gives (pi/2) int_0^1 dd / (d (1 - log d)^2) = pi/2.  Angles below 1e-150
  // are dropped, which can remove at most (pi/2) / (1 - log(1e-150 / (pi/2))) per quarter.
  const double cut = 1.0 / (1.0 - std::log(1e-150 / (kPi / 2)));
  const double v = integrate(h).value(0);
  CHECK(v >= kPi * (1 - cut) * (1 - 1e-8));
  CHECK(v <= kPi * (1 + 1e-8));
}

TEST_CASE("level sets and Lorentz quasinorm") {
  const double w = 0.8;
  const auto u = fields::gaussian_bump(3, {}, w).re;
  CHECK(level_set_radius(u, 0.5) == Approx(w * std::sqrt(2 * std::log(2.0))).epsilon(1e-10));
  CHECK(level_set_radius(u, 1.5) == 0.0);
  const double R = level_set_radius(u, 0.3), b = 0.5;
  CHECK(mu_b_measure(u, 0.3, b) == Approx(specfun::sphere_area(3) * std::pow(R, 3 - b) / (3 - b)).epsilon(1e-10));

  // tau = q: layer cake gives the weighted L^q norm.
  for (double q : {2.0, 3.0, 6.0}) {
    const double direct = std::pow(
        specfun::sphere_area(3) *
            integrate([&](double r) { return std::pow(std::exp(-r * r / (2 * w * w)), q) * std::pow(r, 2 - b); },
                      0, kInf)
                .value,
        1 / q);
    CHECK(lorentz_quasinorm(u, q, q, b) == Approx(direct).epsilon(1e-8));
  }
}
