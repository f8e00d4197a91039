#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "sharpconst/fields.hpp"

using namespace sharpconst::fields;
using doctest::Approx;

namespace {

// `step` is 1e-5 in the units of the field's own length scale.
void check_field(const ScalarField& f, double step = 1e-5) {
  CAPTURE(f.name());
  const auto d = check_derivatives(f, 100, 7, step);
  CHECK(d.max_grad_rel_error < 1e-6);
  CHECK(d.max_laplacian_rel_error < 1e-4);
  CHECK(d.max_hessian_asymmetry == 0.0);
}

}  // namespace

TEST_CASE("finite differences agree with analytic derivatives") {
  const double c[2] = {0.3, -0.2}, xi[2] = {3.0, 1.0};
  check_field(gaussian_bump(2, c, 0.7).re);
  check_field(gaussian_bump(3, {}, 1.3).re);
  check_field(smooth_cutoff_radial(2, 0.5, 1.5).re);
  const auto pw = plane_wave_bump(xi, radial(profiles::gaussian(1.0), 2));
  check_field(pw.re);
  check_field(*pw.im);
  const auto am = angular_mode(2, profiles::gaussian(1.0));
  check_field(am.re);
  check_field(*am.im);
  check_field(mollified_log(0.1).re);
  check_field(talenti_profile(4, 5.0).re);
  check_field(radial(profiles::annular_bump(0.5, 1.5), 2));
  check_field(dilate(radial(profiles::annular_bump(0.5, 1.5), 2), 3.0), 1e-5 / 3.0);
  check_field(product(harmonic_polynomial(3, 1), radial(profiles::gaussian(0.8), 2)));
}

TEST_CASE("gaussian Laplacian at the centre") {
  const double w = 0.6, x[2] = {0.0, 0.0};
  const auto g = gaussian_bump(2, {}, w).re;
  CHECK(g.value(x) == Approx(1));
  CHECK(g.laplacian(x) == Approx(-2 / (w * w)).epsilon(1e-12));
}

TEST_CASE("mollified log equals log|x| away from the origin") {
  const double eps = 1e-3;
  const auto f = mollified_log(eps, 1.0).re;
  for (double r : {2.5 * eps, 0.01, 0.1, 0.3, 0.49}) {
    const double x[2] = {r * 0.6, r * 0.8};
    CHECK(f.value(x) == Approx(0.5 * std::log(r * r + eps * eps)).epsilon(1e-14));
    CHECK(std::abs(f.value(x) - std::log(r)) <= eps * eps / (2 * r * r));
  }
}

TEST_CASE("angular mean") {
  const auto am = angular_mode(1, profiles::gaussian(1.0));
  for (double r : {0.1, 1.0, 2.5}) {
    CHECK(std::abs(angular_mean(am.re, r)) < 1e-14);
    CHECK(std::abs(angular_mean(*am.im, r)) < 1e-14);
  }
  const auto g = gaussian_bump(2, {}, 1.0).re;
  const double x[2] = {1.2, 0.0};
  CHECK(angular_mean(g, 1.2) == Approx(g.value(x)).epsilon(1e-14));
  const double c[2] = {0.5, 0.5}, o[2] = {0.0, 0.0};
  const auto h = gaussian_bump(2, c, 1.0).re;
  CHECK(angular_mean(h, 0.0) == Approx(h.value(o)));
}

TEST_CASE("dilation chain rule") {
  const double c[2] = {0.2, 0.1};
  const auto u = gaussian_bump(2, c, 0.9).re;
  const double s = 2.5;
  const auto us = dilate(u, s);
  const double x[2] = {0.13, -0.07}, sx[2] = {s * x[0], s * x[1]};
  CHECK(us.value(x) == Approx(u.value(sx)));
  CHECK((us.gradient(x) - s * u.gradient(sx)).norm() < 1e-14);
  CHECK(us.laplacian(x) == Approx(s * s * u.laplacian(sx)).epsilon(1e-13));
}

TEST_CASE("support radius bounds the field") {
  for (const auto& f : {gaussian_bump(2, {}, 0.5).re, smooth_cutoff_radial(2, 0.5, 1.0).re,
                        radial(profiles::annular_bump(0.5, 1.5), 2)}) {
    CAPTURE(f.name());
    const double R = f.support_radius();
    REQUIRE(std::isfinite(R));
    for (int i = 0; i < 16; ++i) {
      const double t = 2 * std::numbers::pi * i / 16, x[2] = {1.01 * R * std::cos(t), 1.01 * R * std::sin(t)};
      CHECK(std::abs(f.value(x)) < 1e-16);
    }
  }
}

TEST_CASE("half-space lift vanishes on the boundary") {
  const double c[2] = {0.0, 1.0};
  const auto v = gaussian_bump(2, c, 0.5);
  const auto lifted = halfspace_lift(v, 0.5);
  CHECK(lifted.re.boundary_vanishing());
  for (double x1 : {-1.0, 0.0, 0.7}) {
    const double x[2] = {x1, 0.0};
    CHECK(lifted.re.value(x) == 0.0);
  }
}

TEST_CASE("punctured-plane fields vanish near the origin") {
  const auto f = radial(profiles::annular_bump(0.5, 1.5), 2);
  const double x[2] = {0.3, 0.2};
  CHECK(f.value(x) == 0.0);
  CHECK(profiles::annular_bump(0.5, 1.5)->vanishes_below() == Approx(0.5));
}

TEST_CASE("unsupported combinations are rejected") {
  CHECK_THROWS(angular_mode(-1, profiles::gaussian(1.0)));
  CHECK_THROWS(profiles::talenti(2));
  FamilyParams fp;
  fp.dimension = 5;
  CHECK_THROWS(make_family(FamilyKind::angular_mode, fp));
}
