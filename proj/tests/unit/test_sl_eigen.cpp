#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sharpconst/errors.hpp"
#include "sharpconst/sl_eigen.hpp"

using namespace sharpconst;
using namespace sharpconst::sl;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

TEST_CASE("rayleigh quotients of trial functions") {
  const auto p3 = named_problem("corollary2");
  const double one = rayleigh_quotient(p3, [](const Where&) { return std::pair{1.0, 0.0}; });
  CHECK(one == Approx(1 / (2 * kPi)).epsilon(1e-10));
  const double cosine =
      rayleigh_quotient(p3, [](const Where& w) { return std::pair{std::cos(w.x), -std::sin(w.x)}; });
  CHECK(cosine == Approx(3 / kPi).epsilon(1e-10));
  const double hlp = rayleigh_quotient(named_problem("hlp"), [](const Where& w) {
    return std::pair{w.x * (kPi - w.x), kPi - 2 * w.x};
  });
  CHECK(hlp == Approx(2).epsilon(1e-8));
}

TEST_CASE("smallest eigenvalues") {
  const auto c2 = smallest_eigenvalue(named_problem("corollary2"), 1e-4);
  CHECK(std::abs(c2.lambda - 0.1564) <= 2e-3);
  CHECK(c2.lambda <= 1 / (2 * kPi) + 1e-4);
  CHECK(c2.error_estimate <= 1e-4);

  CHECK(smallest_eigenvalue(named_problem("legendre"), 1e-10).lambda == Approx(0.25).epsilon(1e-8));
  CHECK(smallest_eigenvalue(named_problem("hlp"), 1e-6).lambda == Approx(2).epsilon(5e-5));
  CHECK(smallest_eigenvalue(named_problem("remark7_n3"), 1e-8).lambda == Approx(0.25).epsilon(1e-7));
  CHECK(smallest_eigenvalue(named_problem("remark8_hlp"), 1e-4).lambda == Approx(2).epsilon(1e-3));
}

TEST_CASE("refinement levels are nonincreasing") {
  for (const char* name : {"corollary2", "legendre", "hlp"}) {
    const auto r = smallest_eigenvalue(named_problem(name), 1e-6);
    REQUIRE(r.mesh_levels.size() >= 3);
    for (size_t i = 1; i < r.mesh_levels.size(); ++i) {
      CHECK(r.mesh_levels[i].first > r.mesh_levels[i - 1].first);
      CHECK(r.mesh_levels[i].second <= r.mesh_levels[i - 1].second + 1e-10);
    }
  }
}

TEST_CASE("theorem31 with q = 1 is corollary2") {
  ProblemParams pp;
  pp.q = weights::one();
  const double a = smallest_eigenvalue(build_problem(ProblemKind::theorem31, pp), 1e-5).lambda;
  const double b = smallest_eigenvalue(named_problem("corollary2"), 1e-5).lambda;
  CHECK(a == Approx(b).epsilon(2e-5));
}

TEST_CASE("errors") {
  ProblemParams pp;
  pp.q = weights::inverse();
  CHECK_THROWS_AS(smallest_eigenvalue(build_problem(ProblemKind::theorem31, pp), 1e-4), NoFiniteConstant);
  try {
    smallest_eigenvalue(named_problem("corollary81"), 1e-9);
    FAIL("expected ToleranceNotMet");
  } catch (const ToleranceNotMet& e) {
    CHECK(std::abs(e.best_estimate() - 0.1505) < 2e-3);
    CHECK(e.error_estimate() > 1e-9);
  }
  CHECK_THROWS_AS(named_problem("nope"), DomainError);
}

TEST_CASE("Hardy condition") {
  CHECK(hardy_condition_sup(weights::one()) == Approx(1).epsilon(1e-6));
  CHECK(hardy_condition_sup(weights::log_critical()) == Approx(1).epsilon(1e-6));
  CHECK(std::isinf(hardy_condition_sup(weights::inverse())));
}

TEST_CASE("upper bounds dominate the eigenvalue") {
  CHECK(lambda_upper_bounds(weights::one()) <= 1 / (2 * kPi) + 1e-12);
  CHECK(lambda_upper_bounds(weights::inverse()) == 0.0);
  for (const auto& q : {weights::one(), weights::sqrt_t(), weights::inverse_log(), weights::log_critical()}) {
    ProblemParams pp;
    pp.q = q;
    const double tol = 1e-3;
    const double lambda = smallest_eigenvalue(build_problem(ProblemKind::theorem31, pp), tol).lambda;
    CHECK(lambda > 0.0);
    CHECK(lambda <= lambda_upper_bounds(q) + tol);
  }
}
