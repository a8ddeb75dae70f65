#include "thetanorm/gwidth.hpp"
#include "thetanorm/recovery.hpp"
#include "thetanorm/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace thetanorm;

namespace {

void BM_ProjectPsd(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  const Eigen::MatrixXd s = (a + a.transpose()) / 2;
  for (auto _ : state) benchmark::DoNotOptimize(project_psd(s));
}
BENCHMARK(BM_ProjectPsd)->Arg(28)->Arg(65)->Arg(126)->Unit(benchmark::kMicrosecond);

void BM_ThetaNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PNorm p = state.range(1) == 0 ? PNorm::infinity() : PNorm::finite(2);
  const Shape s{n, n, n};
  const MomentLayout layout = norm_layout(s, p, 1);
  const Tensor x = random_gaussian(s, 3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_theta_norm(layout, x));
}
BENCHMARK(BM_ThetaNorm)->ArgsProduct({{2, 3}, {0, 2}})->Unit(benchmark::kMillisecond);

void BM_Recovery(benchmark::State& state) {
  const Shape s{3, 3, 3};
  const Tensor truth = random_low_rank(s, 1, TensorKind::signed_entries, 4);
  const MeasurementEnsemble e = gaussian_ensemble(truth, static_cast<std::size_t>(state.range(0)), 5);
  const MomentLayout layout = norm_layout(s, PNorm::infinity(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(recover(layout, e.measurements, {}, &truth));
}
BENCHMARK(BM_Recovery)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Gauge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NormalConeGauge gauge(Shape{n, n, n});
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  Eigen::VectorXd g(static_cast<Eigen::Index>(gauge.sets().rest.size()));
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(gauge.evaluate(g));
}
BENCHMARK(BM_Gauge)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
