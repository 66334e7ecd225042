// Copyright 2026 The mvsde Authors.
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

#include <cstddef>

#include "mvsde/lyapunov.hpp"
#include "mvsde/model.hpp"
#include "mvsde/sampling.hpp"
#include "mvsde/simulate.hpp"

namespace {

void step_throughput(benchmark::State& st, const mvsde::CoefficientPair& coeffs, mvsde::Taming taming) {
  const auto n = static_cast<std::size_t>(st.range(0));
  mvsde::ParticleEnsemble ens(mvsde::gaussian_cloud(n, coeffs.dim(), 0.0, 1.0, 1), 2);
  for (auto _ : st) mvsde::advance(ens, coeffs, 1e-3, taming);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_StepMeanFieldOu(benchmark::State& st) { step_throughput(st, mvsde::preset_mean_field_ou(1.0), mvsde::Taming::none); }
BENCHMARK(BM_StepMeanFieldOu)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_StepCubicTamed(benchmark::State& st) { step_throughput(st, mvsde::preset_cubic(1.0, 2.0), mvsde::Taming::tamed); }
BENCHMARK(BM_StepCubicTamed)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_StepTruncatedOu(benchmark::State& st) {
  step_throughput(st, mvsde::truncate(mvsde::preset_mean_field_ou(1.0), 4.0), mvsde::Taming::none);
}
BENCHMARK(BM_StepTruncatedOu)->Arg(10000)->Unit(benchmark::kMicrosecond);

// The integrated generator is O(N^2) for measure-dependent functionals.
void BM_IntegratedGenerator(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto mu = mvsde::gaussian_cloud(n, 1, 0.0, 1.0, 3);
  const auto bundle = mvsde::example2_bundle(0.25);
  const auto coeffs = mvsde::preset_landau_linear(0.25);
  for (auto _ : st) benchmark::DoNotOptimize(mvsde::integrated_generator(bundle, coeffs, 0.0, mu));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_IntegratedGenerator)->RangeMultiplier(4)->Range(64, 1024)->Complexity(benchmark::oNSquared);

}  // namespace
