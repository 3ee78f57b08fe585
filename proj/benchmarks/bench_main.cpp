// Copyright 2026 The invkrr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "invkrr/domain.hpp"
#include "invkrr/effdim.hpp"
#include "invkrr/experiment.hpp"
#include "invkrr/kernel.hpp"
#include "invkrr/krr.hpp"

namespace {

using namespace invkrr;

void BM_GramRbf(benchmark::State& state) {
  const Points x = sample_sphere(SphereDomain{5, 1}, state.range(0));
  const Kernel k = Kernel::rbf(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gram(k, x).entries.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GramRbf)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

// Batched averaged cross Gram versus the pointwise orbit loop.
void BM_AveragedCrossGram(benchmark::State& state) {
  const GroupRep s5 = make_symmetric_group(5);
  const Points a = sample_sphere(SphereDomain{5, 2}, 500);
  const Points b = sample_sphere(SphereDomain{5, 3}, 100);
  const AveragedKernel avg(Kernel::rbf(1.0), s5);
  for (auto _ : state) benchmark::DoNotOptimize(cross_gram(avg, a, b).data());
}
BENCHMARK(BM_AveragedCrossGram)->Unit(benchmark::kMillisecond);

void BM_AveragedCrossGramPointwise(benchmark::State& state) {
  const GroupRep s5 = make_symmetric_group(5);
  const Points a = sample_sphere(SphereDomain{5, 2}, 500);
  const Points b = sample_sphere(SphereDomain{5, 3}, 100);
  const AveragedKernel avg(Kernel::rbf(1.0), s5);
  const CustomKernel slow{[&](const VecRef& x, const VecRef& y) { return avg(x, y); }, "slow"};
  for (auto _ : state) benchmark::DoNotOptimize(cross_gram(slow, a, b).data());
}
BENCHMARK(BM_AveragedCrossGramPointwise)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Points x = sample_sphere(SphereDomain{5, 4}, n);
  const Vector y = x.colwise().sum().transpose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(Kernel::rbf(1.0), x, y, RidgeConfig{1.0}).alpha().data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Fit)->RangeMultiplier(4)->Range(64, 1024)->Complexity()->Unit(benchmark::kMillisecond);

void BM_EffdimPerpMc(benchmark::State& state) {
  const PerpKernel perp(Kernel::linear(), make_symmetric_group(5));
  for (auto _ : state) benchmark::DoNotOptimize(effdim_mc(perp, 5, state.range(0), 7).value);
}
BENCHMARK(BM_EffdimPerpMc)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_GapTrial(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.group = "sym:5";
  cfg.kernel = "linear";
  cfg.d = 5;
  cfg.n = 100;
  cfg.n_test = 2000;
  cfg.trials = 1;
  cfg.rho = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_gap_experiment(cfg, 1).aggregate.mean_gap);
}
BENCHMARK(BM_GapTrial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
