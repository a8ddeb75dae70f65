#include "thetanorm/groebner.hpp"
#include "thetanorm/moment.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace thetanorm;

namespace {

Shape cube(int n, int order) { return Shape(std::vector<int>(static_cast<std::size_t>(order), n)); }

Monomial random_monomial(std::mt19937_64& rng, const Shape& s, int degree) {
  Monomial m;
  for (int i = 0; i < degree; ++i)
    m = m * Monomial::variable(static_cast<Variable>(rng() % s.size()));
  return m;
}

void BM_BuildGroebner(benchmark::State& state) {
  const Shape s = cube(static_cast<int>(state.range(0)), 3);
  const PNorm p = state.range(1) == 0 ? PNorm::infinity() : PNorm::finite(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(build_groebner(IdealSpec::for_norm(s, p)));
}
BENCHMARK(BM_BuildGroebner)->ArgsProduct({{2, 3, 4}, {0, 2}})->Unit(benchmark::kMicrosecond);

void BM_BuchbergerCheck(benchmark::State& state) {
  const GroebnerBasis g = build_groebner(IdealSpec::for_norm(cube(static_cast<int>(state.range(0)), 3), PNorm::finite(2)));
  for (auto _ : state) benchmark::DoNotOptimize(buchberger_check(g));
}
BENCHMARK(BM_BuchbergerCheck)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_NormalFormFast(benchmark::State& state) {
  const Shape s = cube(4, 3);
  std::mt19937_64 rng(1);
  std::vector<Monomial> ms;
  for (int i = 0; i < 256; ++i) ms.push_back(random_monomial(rng, s, 6));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(normal_form_infinity(ms[i++ % ms.size()], s));
}
BENCHMARK(BM_NormalFormFast);

void BM_NormalFormDivision(benchmark::State& state) {
  const Shape s = cube(4, 3);
  const GroebnerBasis g = build_groebner(IdealSpec::for_norm(s, PNorm::infinity()));
  std::mt19937_64 rng(1);
  std::vector<Polynomial> ps;
  for (int i = 0; i < 256; ++i) ps.push_back(Polynomial::monomial(random_monomial(rng, s, 6)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(reduce(ps[i++ % ps.size()], g));
}
BENCHMARK(BM_NormalFormDivision);

void BM_MomentLayout(benchmark::State& state) {
  const GroebnerBasis g = build_groebner(IdealSpec::for_norm(cube(static_cast<int>(state.range(0)), 3), PNorm::finite(2)));
  for (auto _ : state) benchmark::DoNotOptimize(build_moment_layout(g, 1));
}
BENCHMARK(BM_MomentLayout)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
