#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "sharpconst/fields.hpp"
#include "sharpconst/kernel_form.hpp"
#include "sharpconst/sl_eigen.hpp"
#include "sharpconst/specfun.hpp"
#include "sharpconst/verifier.hpp"

using namespace sharpconst;

static void BM_EigenCorollary2(benchmark::State& st) {
  const auto p = sl::named_problem("corollary2");
  const double tol = std::pow(10.0, -static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sl::smallest_eigenvalue(p, tol).lambda);
}
BENCHMARK(BM_EigenCorollary2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_EigenLogCritical(benchmark::State& st) {
  const auto p = sl::named_problem("corollary81");
  for (auto _ : st) benchmark::DoNotOptimize(sl::smallest_eigenvalue(p, 1e-3).lambda);
}
BENCHMARK(BM_EigenLogCritical)->Unit(benchmark::kMillisecond);

static void BM_Constants(benchmark::State& st) {
  const specfun::HSParams h(2, 0.5, 1.0, 4);
  const auto a = specfun::MatrixForm::real(3, {1, 2, 0, -1, 0.5, 3, 0.2, 0.1, -1.5});
  for (auto _ : st) {
    benchmark::DoNotOptimize(specfun::hs_constant_critical(h));
    benchmark::DoNotOptimize(specfun::sobolev_constant(7));
    benchmark::DoNotOptimize(specfun::qf_best_constant(a));
  }
}
BENCHMARK(BM_Constants);

static void BM_CorpusCase(benchmark::State& st) {
  const auto id = static_cast<verify::CaseId>(st.range(0));
  const auto corpus = verify::standard_corpus(id);
  for (auto _ : st)
    for (const auto& u : corpus) benchmark::DoNotOptimize(verify::evaluate_case(id, u).ratio);
  st.SetLabel(verify::to_string(id));
}
BENCHMARK(BM_CorpusCase)
    ->Arg(static_cast<int>(verify::CaseId::x1))
    ->Arg(static_cast<int>(verify::CaseId::m1))
    ->Arg(static_cast<int>(verify::CaseId::u2))
    ->Arg(static_cast<int>(verify::CaseId::c60))
    ->Unit(benchmark::kMillisecond);

static void BM_KernelForm(benchmark::State& st) {
  const auto a = specfun::MatrixForm::real(2, {1, 0, 0, -1});
  auto h = [](double x1, double x2) {
    const double r2 = x1 * x1 + x2 * x2;
    return std::complex<double>((x1 * x1 - x2 * x2 + x1) * std::exp(-r2), 0.0);
  };
  const int panels = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(kernel::kernel_form_smooth(h, 6.5, a, panels).value);
}
BENCHMARK(BM_KernelForm)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
