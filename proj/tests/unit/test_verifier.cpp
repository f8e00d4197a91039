#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "sharpconst/errors.hpp"
#include "sharpconst/fields.hpp"
#include "sharpconst/verifier.hpp"

using namespace sharpconst;
using namespace sharpconst::verify;
using doctest::Approx;
namespace pf = fields::profiles;

namespace {

double extra(const RatioReport& r, const std::string& key) {
  for (const auto& [k, v] : r.extras)
    if (k == key) return v;
  FAIL("missing extra " << key);
  return 0.0;
}

fields::ComplexField real(const fields::ScalarField& f, const std::string& id) { return {f, std::nullopt, id}; }

}  // namespace

TEST_CASE("case names round-trip") {
  for (auto id : all_cases()) CHECK(case_from_string(to_string(id)) == id);
  CHECK_FALSE(case_from_string("INEQ-NOPE").has_value());
  CHECK(to_string(CaseId::qf) == "INEQ-QF");
}

TEST_CASE("verdict rule") {
  CHECK(verdict(1.0, 0.0, 1.0, 0.0));
  CHECK(verdict(1.0 + 1e-10, 0.0, 1.0, 0.0));
  CHECK_FALSE(verdict(1.0 + 1e-6, 0.0, 1.0, 0.0));
  CHECK(verdict(1.0 + 1e-6, 1e-6, 1.0, 1e-6));
}

TEST_CASE("inadmissible fields are rejected") {
  const auto g = fields::gaussian_bump(2, {}, 1.0);
  CHECK_THROWS_AS(check_admissible(CaseId::m1_ortho, g), InadmissibleField);
  CHECK_THROWS_AS(check_admissible(CaseId::t1, g), InadmissibleField);
  CHECK_THROWS_AS(check_admissible(CaseId::u2, g), InadmissibleField);
  CHECK_THROWS_AS(check_admissible(CaseId::x8, fields::gaussian_bump(2, {}, 1.0)), InadmissibleField);
  CHECK_THROWS_AS(check_admissible(CaseId::c60, fields::gaussian_bump(3, {}, 1.0), CaseParams{.n = 4}),
                  InadmissibleField);
  CHECK_THROWS_AS(evaluate_case(CaseId::x1, fields::gaussian_bump(3, {}, 1.0)), InadmissibleField);
  try {
    check_admissible(CaseId::t1, g);
  } catch (const InadmissibleField& e) {
    CHECK(std::string(e.what()).find("origin") != std::string::npos);
  }
}

TEST_CASE("quadratic form vanishes on radial fields") {
  const auto r = evaluate_case(CaseId::qf, fields::gaussian_bump(2, {}, 1.0));
  CHECK(std::abs(r.ratio) < 1e-12);
  CHECK(r.pass);
}

TEST_CASE("Talenti profile attains the weighted Hardy-Sobolev constant") {
  CaseParams p;
  p.p = 2;
  p.n = 3;
  const auto t = real(fields::radial(pf::p_talenti(2, 3), 3), "p_talenti");
  const auto r = evaluate_case(CaseId::c60, t, p);
  CHECK(r.ratio == Approx(1).epsilon(1e-4));
  CHECK(r.pass);
}

TEST_CASE("Lorentz case at tau = q matches the L^q case") {
  CaseParams p;
  p.p = 2;
  p.n = 3;
  const auto g = fields::gaussian_bump(3, {}, 1.0);
  const auto c = evaluate_case(CaseId::c60, g, p);
  const auto a = evaluate_case(CaseId::a60, g, p);
  CHECK(a.ratio == Approx(c.ratio).epsilon(1e-7));
  CHECK(a.ratio < 1.0);
}

TEST_CASE("half-plane Hardy remainder at v = x_2^{1/2} u equals the weighted case") {
  const double c[2] = {0.3, 1.0};
  const auto u = fields::gaussian_bump(2, c, 0.4);
  const auto v = fields::halfspace_lift(u, 0.5);
  for (const char* w : {"one", "sqrt_t"}) {
    CaseParams p;
    p.weight = w;
    const auto r1 = evaluate_case(CaseId::u1, u, p);
    const auto r2 = evaluate_case(CaseId::u2, v, p);
    CHECK(r2.ratio == Approx(r1.ratio).epsilon(1e-6));
    CHECK(r1.pass);
    CHECK(r2.pass);
  }
}

TEST_CASE("zero angular mean: signed form is nonpositive") {
  for (int k = 1; k <= 3; ++k) {
    const auto r = evaluate_case(CaseId::m1_ortho, fields::angular_mode(k, pf::gaussian(1.0)));
    CHECK(extra(r, "sign_nonpositive") == 1.0);
    CHECK(extra(r, "signed_lhs") <= 0.0);
    CHECK(r.pass);
  }
}

TEST_CASE("elementary inequality on a grid") {
  const auto e = elem_grid_check(10.0, 10, 100);
  CHECK(e.points == 1001L * 11);
  CHECK(e.violations == 0);
  REQUIRE(e.equality.size() == 1);
  CHECK(e.equality[0].k == 0);
  CHECK(e.equality[0].i == 0);
  REQUIRE(e.degenerate.size() == 1);
  CHECK(e.degenerate[0].k == 1);
  CHECK(e.max_ratio <= 1.0);
  CHECK(e.pass);
}

TEST_CASE("quadratic form against the kernel form") {
  const auto m2 = fields::angular_mode(2, pf::gaussian(1.0));
  const auto a = specfun::MatrixForm::real(2, {1, 0, 0, -1});
  // Re z^2 g alone gives Q = 0 by symmetry; adding a radial part does not.
  const auto zero = qf_cross_check(real(m2.re, "re"), a);
  CHECK(std::abs(zero.quadratic_form) < 1e-12);
  CHECK(zero.relative_difference < 1e-6);
  const auto mixed =
      qf_cross_check(real(fields::sum(m2.re, fields::gaussian_bump(2, {}, 0.7).re), "mixed"), a);
  CHECK(std::abs(mixed.quadratic_form) > 1e-3);
  CHECK(mixed.relative_difference < 1e-6);
  CHECK(mixed.kernel_form == Approx(mixed.quadratic_form).epsilon(1e-6));
}

TEST_CASE("counterexample ratios grow") {
  const auto c = counterexample_x1_delta({0.1, 0.01, 1e-3});
  CHECK(c.increasing);
  CHECK(c.growth > 2.0);
  CHECK(c.pass);
  CHECK_THROWS_AS(counterexample_x1_delta({0.7}), DomainError);
}

TEST_CASE("constants and provenance") {
  CHECK(case_constant(CaseId::x1).first == Approx(1 / (4 * std::numbers::pi)));
  CHECK(case_constant(CaseId::x1).second == Provenance::closed_form);
  CHECK(case_constant(CaseId::u1).second == Provenance::eigenvalue);
  CHECK(case_constant(CaseId::f7).first == Approx(0.5));
}

TEST_CASE("corpus runs are deterministic and ordered") {
  const std::vector<CaseId> cases = {CaseId::x1, CaseId::m1, CaseId::qf};
  const auto one = run_corpus(cases, {}, 1);
  const auto three = run_corpus(cases, {}, 3);
  REQUIRE(one.size() == three.size());
  for (size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].case_id == three[i].case_id);
    CHECK(one[i].field_id == three[i].field_id);
    CHECK(one[i].ratio == three[i].ratio);
  }
  // Ordered by case id, then by field id.
  auto pos = [](const std::string& id) { return static_cast<int>(*case_from_string(id)); };
  for (size_t i = 1; i < one.size(); ++i) CHECK(pos(one[i - 1].case_id) <= pos(one[i].case_id));
  for (auto id : all_cases())
    if (id != CaseId::elem) CHECK(standard_corpus(id).size() >= 3);
}

TEST_CASE("worker count") {
  CHECK(worker_count(5) == 5);
  setenv("SHARPCONST_THREADS", "2", 1);
  CHECK(worker_count() == 2);
  setenv("SHARPCONST_THREADS", "junk", 1);
  CHECK(worker_count() >= 1);
  unsetenv("SHARPCONST_THREADS");
}
