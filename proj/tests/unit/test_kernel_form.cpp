#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sharpconst/kernel_form.hpp"
#include "sharpconst/quad.hpp"

using namespace sharpconst;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

namespace {

// u = (x1^2 - x2^2 + c x1 x2) e^{-r^2}; P harmonic, so -Lap u = P e^{-r^2} (12 - 4 r^2).
struct Quadrupole {
  double c = 0.0;
  double P(double x1, double x2) const { return x1 * x1 - x2 * x2 + c * x1 * x2; }
  std::complex<double> h(double x1, double x2) const {
    const double r2 = x1 * x1 + x2 * x2;
    return P(x1, x2) * std::exp(-r2) * (12 - 4 * r2);
  }
  // int <A grad u, grad u> by polar quadrature.
  double form(const specfun::MatrixForm& a) const {
    quad::Integrand f;
    f.coordinates = quad::Coordinates::polar;
    f.support_radius = 7.0;
    f.eval = [&](std::span<const double> x) {
      const double e = std::exp(-(x[0] * x[0] + x[1] * x[1])), p = P(x[0], x[1]);
      const double g[2] = {(2 * x[0] + c * x[1] - 2 * x[0] * p) * e, (-2 * x[1] + c * x[0] - 2 * x[1] * p) * e};
      quad::Values v(1);
      v << a.evaluate(g).real();
      return v;
    };
    return quad::integrate(f).value(0);
  }
};

}  // namespace

TEST_CASE("kernel is homogeneous of degree zero") {
  const auto a = specfun::MatrixForm::real(2, {1, 0, 0, -1});
  CHECK(kernel::kernel(a, 1, 0).real() == Approx(-0.5));
  CHECK(kernel::kernel(a, 0, 2).real() == Approx(0.5));
  CHECK(std::abs(kernel::kernel(a, 1, 1)) < 1e-15);
  CHECK(std::abs(kernel::kernel(a, 3.0, -1.2) - kernel::kernel(a, 0.3, -0.12)) < 1e-15);
}

TEST_CASE("kernel form equals the quadratic form") {
  for (const double c : {0.0, 0.7}) {
    const Quadrupole u{c};
    for (const auto& a : {specfun::MatrixForm::real(2, {1, 0, 0, -1}), specfun::MatrixForm::real(2, {0, 1, 1, 0}),
                          specfun::MatrixForm::real(2, {0.4, 2.0, -0.5, -0.4})}) {
      const double want = u.form(a);
      const auto got = kernel::kernel_form_smooth([&](double x1, double x2) { return u.h(x1, x2); }, 6.5, a, 8);
      CHECK(got.value.real() == Approx(want).epsilon(1e-6).scale(1e-3));
      CHECK(got.abs_error_estimate < 1e-4 * std::abs(want) + 1e-8);
    }
  }
}

TEST_CASE("polar tensor rule on an annular h") {
  // h = b(r) cos 2phi with b supported in (1, 2): both rules must agree.
  const auto a = specfun::MatrixForm::real(2, {1, 0, 0, -1});
  auto b = [](double r) { return r > 1 && r < 2 ? std::exp(-1 / ((r - 1) * (2 - r))) : 0.0; };
  auto h = [&](double x1, double x2) {
    const double r = std::hypot(x1, x2);
    return std::complex<double>(b(r) * (x1 * x1 - x2 * x2) / (r * r), 0.0);
  };
  kernel::PolarWindow w;
  w.r_lo = 1.0;
  w.r_hi = 2.0;
  w.radial_panels = 24;
  w.angular_panels = 24;
  const auto coarse = kernel::kernel_form(h, w, a);
  const auto smooth = kernel::kernel_form_smooth(h, 2.0, a, 12);
  CHECK(coarse.value.real() == Approx(smooth.value.real()).epsilon(1e-3));
}

TEST_CASE("l1 norm") {
  kernel::PolarWindow w;
  w.r_hi = 9.0;
  w.radial_panels = 32;
  const double width = 0.8;
  const double v = kernel::l1_norm(
      [&](double x1, double x2) { return std::exp(-(x1 * x1 + x2 * x2) / (2 * width * width)); }, w);
  CHECK(v == Approx(2 * kPi * width * width).epsilon(1e-10));
}
