#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sharpconst/errors.hpp"
#include "sharpconst/specfun.hpp"

using namespace sharpconst;
using namespace sharpconst::specfun;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

TEST_CASE("sphere area") {
  CHECK(sphere_area(2) == Approx(2 * kPi).epsilon(1e-15));
  CHECK(sphere_area(3) == Approx(4 * kPi).epsilon(1e-15));
  CHECK(sphere_area(4) == Approx(2 * kPi * kPi).epsilon(1e-15));
  for (int n = 3; n <= 30; ++n)
    CHECK(sphere_area(n) == Approx(2 * kPi * sphere_area(n - 2) / (n - 2)).epsilon(1e-14));
  CHECK_THROWS_AS(sphere_area(0), DomainError);
}

TEST_CASE("quadratic form constant") {
  const double c = 1.0 / (4 * kPi);
  CHECK(qf_best_constant(MatrixForm::real(2, {1, 0, 0, -1})) == Approx(c).epsilon(1e-12));
  CHECK(qf_best_constant(MatrixForm::real(2, {0, 1, 1, 0})) == Approx(c).epsilon(1e-12));
  CHECK(qf_best_constant(MatrixForm(2)) == 0.0);
  CHECK_THROWS_AS(qf_best_constant(MatrixForm::real(2, {1, 0, 0, 1})), NoFiniteConstant);

  // Independent oracle for the sphere maximum: a dense angle sweep.
  const auto a = MatrixForm::real(2, {0.3, 1.7, -0.4, -0.3});
  double m = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double t = kPi * i / 200000.0, w[2] = {std::cos(t), std::sin(t)};
    m = std::max(m, std::abs(a.evaluate(w)));
  }
  CHECK(sphere_max_abs(a) == Approx(m).epsilon(1e-9));

  SUBCASE("transpose and scaling") {
    const auto b = MatrixForm::real(3, {1, 2, 0, -1, 0.5, 3, 0.2, 0.1, -1.5});
    CHECK(qf_best_constant(b.transposed()) == Approx(qf_best_constant(b)).epsilon(1e-10));
    CHECK(qf_best_constant(b.scaled(2.5)) == Approx(2.5 * qf_best_constant(b)).epsilon(1e-10));
  }
}

TEST_CASE("z10") {
  CHECK(z10_constant(2, 1, 1) == Approx(1 / (4 * kPi)).epsilon(1e-14));
  CHECK(z10_constant(2, 2, 1) == Approx(1 / (8 * kPi)).epsilon(1e-14));
  CHECK(z10_constant(2, 1, 0) == 0.0);
  CHECK_THROWS_AS(z10_constant(2, 0, 1), DomainError);
  const auto a = MatrixForm::real(2, {0.3, 1.7, -0.4, -0.3});
  CHECK(z10_constant(2, 1, sphere_max_abs(a)) == Approx(qf_best_constant(a)).epsilon(1e-12));
}

TEST_CASE("capacitary A_pq") {
  CHECK(capacitary_Apq(2, 2) == Approx(2).epsilon(1e-14));
  CHECK(capacitary_Apq(1, 2) == Approx(1).epsilon(1e-14));
  CHECK(capacitary_Apq(2, 4) == Approx(std::pow(3.0, 0.25)).epsilon(1e-14));
  CHECK(capacitary_Apq(1, 1) == Approx(1).epsilon(1e-14));
  CHECK_THROWS_AS(capacitary_Apq(2, 1.5), DomainError);
}

TEST_CASE("isocapacitary and Hardy-Sobolev constants") {
  CHECK(isocap_constant(HSParams(2, 0, 0, 3)) ==
        Approx(std::pow(4 * kPi, -2.0 / 3) * std::pow(3.0, -1.0 / 3)).epsilon(1e-13));
  CHECK(isocap_constant(HSParams(1, 0, 0, 2)) == Approx(1 / (2 * std::sqrt(kPi))).epsilon(1e-13));
  CHECK(isocap_constant(HSParams(2, 0, 2, 3)) == Approx(1).epsilon(1e-13));

  CHECK(hs_constant(HSParams(1, 0, 0, 2), 2) == Approx(1 / (2 * std::sqrt(kPi))).epsilon(1e-13));
  CHECK(hs_constant(HSParams(2, 0, 0, 3), 6) == Approx(1 / std::sqrt(sobolev_constant(3))).epsilon(1e-12));
  CHECK(hs_constant(HSParams(2, 0, 2, 3), 2) == Approx(2).epsilon(1e-13));
  CHECK(hs_constant_critical(HSParams(1, 0, 0, 2)) == Approx(0.28209479177387814).epsilon(1e-14));
  CHECK(hs_constant_critical(HSParams(2, 0, 0, 3)) == Approx(0.42727).epsilon(1e-4));
  CHECK(hs_constant_critical(HSParams(2, 0, 2, 3)) == Approx(2).epsilon(1e-13));
  CHECK_THROWS_AS(hs_constant(HSParams(2, 0, 0, 3), 1.5), DomainError);
}

TEST_CASE("HSParams validation names the condition") {
  std::string why;
  CHECK_FALSE(HSParams::valid(3, 0, 0, 2, &why));
  CHECK(why.find("p") != std::string::npos);
  CHECK_FALSE(HSParams::valid(2, 0, 3, 3, &why));
  CHECK_THROWS_AS(HSParams(2, 1.5, 0, 3), DomainError);
  CHECK(HSParams(2, 0, 0, 3).critical_q() == Approx(6));
}

TEST_CASE("Sobolev and Hardy remainder constants") {
  CHECK(sobolev_constant(3) == Approx(3 * std::pow(kPi / 2, 4.0 / 3)).epsilon(1e-13));
  CHECK(sobolev_constant(3) == Approx(5.4779).epsilon(1e-4));
  // Regression value from the closed form; see the ledger for the 7.796 discrepancy.
  CHECK(sobolev_constant(4) == Approx(8 * kPi / std::sqrt(6.0)).epsilon(1e-13));
  CHECK_THROWS_AS(sobolev_constant(2), DomainError);

  CHECK(hardy_remainder_constant(2) == Approx(3 * std::pow(kPi, 2.0 / 3) / 4).epsilon(1e-13));
  CHECK(hardy_remainder_constant(3) == Approx(2 * std::pow(kPi, 0.75) / std::sqrt(std::tgamma(2.5))).epsilon(1e-13));
  for (int n = 2; n <= 10; ++n)
    CHECK(hardy_remainder_constant(n) ==
          Approx(std::pow(2 * kPi, -2.0 / (n + 1)) * sobolev_constant(n + 1)).epsilon(1e-12));
  CHECK_THROWS_AS(hardy_remainder_constant(1), DomainError);
}

TEST_CASE("pow0") {
  CHECK(pow0(0, 0) == 1.0);
  CHECK(pow0(0, 2) == 0.0);
  CHECK(pow0(4, 0.5) == Approx(2));
}
