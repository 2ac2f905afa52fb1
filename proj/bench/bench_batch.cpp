// Copyright 2026 The vnelab Authors.
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

// Serial reference against the OpenMP batch kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "vnelab/batch.hpp"
#include "vnelab/induction.hpp"

using namespace vnelab;

namespace {

GroupPtr group_of_order(int n) {
  if (n == 16)
    return build_group(GroupSpec::direct_product({GroupSpec::cyclic(4), GroupSpec::cyclic(4)}));
  return build_group(GroupSpec::cyclic(n));
}

std::vector<GroupFunction> sample(const GroupPtr& g, int count) {
  std::mt19937_64 rng(42);
  std::vector<GroupFunction> out;
  for (int i = 0; i < count; ++i) out.push_back(random_multiplier(g, rng));
  return out;
}

Execution mode(const benchmark::State& s) {
  return s.range(1) ? Execution::kParallel : Execution::kSerial;
}

void BM_B2Norms(benchmark::State& state) {
  const auto fs = sample(group_of_order(static_cast<int>(state.range(0))), 16);
  for (auto _ : state) benchmark::DoNotOptimize(batch::b2_norms(fs, {}, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(fs.size()));
}

void BM_QNorms(benchmark::State& state) {
  const auto fs = sample(group_of_order(static_cast<int>(state.range(0))), 16);
  for (auto _ : state) benchmark::DoNotOptimize(batch::q_norms(fs, {}, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(fs.size()));
}

void BM_Kernel(benchmark::State& state) {
  const auto c = build_wstar_coupling(
      build_group(GroupSpec::cyclic(static_cast<int>(state.range(0)))),
      build_group(GroupSpec::direct_product(
          {GroupSpec::cyclic(2), GroupSpec::cyclic(static_cast<int>(state.range(0)) / 2)})));
  for (auto _ : state) benchmark::DoNotOptimize(induction_kernel(c, mode(state)));
}

void BM_VerifyAll(benchmark::State& state) {
  const auto k = induction_kernel(build_wstar_coupling(
      build_group(GroupSpec::cyclic(4)),
      build_group(GroupSpec::direct_product({GroupSpec::cyclic(2), GroupSpec::cyclic(2)}))));
  const auto fs = sample(k.lambda(), 8);
  for (auto _ : state)
    benchmark::DoNotOptimize(batch::verify_all(k, fs, 1e-6, {}, mode(state)));
}

}  // namespace

BENCHMARK(BM_B2Norms)->ArgsProduct({{8, 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QNorms)->ArgsProduct({{8, 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kernel)->ArgsProduct({{8, 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyAll)->ArgsProduct({{4}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
