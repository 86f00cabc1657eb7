#include <benchmark/benchmark.h>

#include "cornex/data.hpp"
#include "cornex/expansion.hpp"
#include "cornex/ft_check.hpp"
#include "cornex/matcher.hpp"
#include "cornex/oracle.hpp"

using namespace cornex;

namespace {

ProductDomainSpec paraboloid() { return make_domain({"paraboloid:1", "flat"}, {2, 1}, 0.5); }

void BM_PartialFt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = TensorGrid::uniform(3, 2, n, 2.0);
  auto f = GridFunction::sample(g, [](const double* y) { return cplx(std::exp(-y[0] * y[0] - y[1] * y[1] - y[2] * y[2])); });
  for (auto _ : state) benchmark::DoNotOptimize(partial_ft(f, {0, 1}));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_PartialFt)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BuildSeries(benchmark::State& state) {
  auto dom = paraboloid();
  ExpansionContext ctx(dom, ExpansionGridSpec{static_cast<int>(state.range(0)), 32, 0, 0});
  auto f = make_data("one", dom);
  for (auto _ : state) benchmark::DoNotOptimize(build_series(ctx, f, 3));
}
BENCHMARK(BM_BuildSeries)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AssembleExpansion(benchmark::State& state) {
  auto dom = paraboloid();
  auto f = make_data("manufactured", dom);
  AssembleOptions opt;
  opt.certify = false;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_expansion(f, dom, static_cast<int>(state.range(0)), opt));
}
BENCHMARK(BM_AssembleExpansion)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_PhiEvaluate(benchmark::State& state) {
  auto phi = phi_antiderivative(phi_base({0, 1}, 2, {1, 1}), {1, 2});
  double y[2] = {0.3, 0.2};
  for (auto _ : state) {
    y[0] += 1e-9;
    benchmark::DoNotOptimize(phi(y));
  }
}
BENCHMARK(BM_PhiEvaluate);

void BM_TensorSolveSquare(benchmark::State& state) {
  auto f = OracleData::function([](const double* x) { return std::exp(-(x[0] * x[0] + x[1] * x[1]) / 0.0625); });
  for (auto _ : state)
    benchmark::DoNotOptimize(tensor_solve(OracleDomain::square(), f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TensorSolveSquare)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SingularFit(benchmark::State& state) {
  auto u = tensor_solve(OracleDomain::square(), OracleData::uniform(1)).transverse();
  auto phi = phi_antiderivative(phi_base({0, 1}, 1, {1, 1}), {1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(fit_singular_coefficients(u, {phi}, FitWindow{}));
}
BENCHMARK(BM_SingularFit)->Unit(benchmark::kMillisecond);

void BM_FtFit2d(benchmark::State& state) {
  auto phi = phi_base({0, 1}, 1, {1, 1});
  auto cfg = default_ft_config(2);
  for (auto _ : state) benchmark::DoNotOptimize(ft_fit(phi, cfg, cfg.coarse, false));
}
BENCHMARK(BM_FtFit2d)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
