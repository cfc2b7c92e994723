// Copyright 2026 The fracq Authors.
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

#include <vector>

#include <benchmark/benchmark.h>

#include "fracq/processes.hpp"
#include "fracq/queue.hpp"
#include "fracq/samplers.hpp"
#include "fracq/special_functions.hpp"

namespace {

using namespace fracq;

void BM_MittagLefflerSeries(benchmark::State& state) {
  double z = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mittag_leffler({0.5, 1.0}, z));
    z = z == -1.0 ? -1.0000001 : -1.0;
  }
}
BENCHMARK(BM_MittagLefflerSeries);

void BM_MittagLefflerIntegral(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mittag_leffler({0.7, 1.0}, -50.0));
}
BENCHMARK(BM_MittagLefflerIntegral);

void BM_FppPmfTable(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fpp_pmf_table({0.7, 1.0}, t));
}
BENCHMARK(BM_FppPmfTable)->Arg(1)->Arg(10)->Arg(100);

void BM_PositiveStable(benchmark::State& state) {
  RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_positive_stable(0.7, rng));
}
BENCHMARK(BM_PositiveStable);

void BM_MittagLefflerSampler(benchmark::State& state) {
  RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_mittag_leffler({0.7, 1.0}, rng));
}
BENCHMARK(BM_MittagLefflerSampler);

void BM_MittagLefflerTrigSampler(benchmark::State& state) {
  RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_mittag_leffler_trig({0.7, 1.0}, rng));
}
BENCHMARK(BM_MittagLefflerTrigSampler);

void BM_RenewalFpp(benchmark::State& state) {
  RngStream rng(1, 0);
  const double horizon = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_fpp_renewal({0.7, 1.0}, horizon, rng));
}
BENCHMARK(BM_RenewalFpp)->Arg(100)->Arg(10000);

void BM_TimeChangeFpp(benchmark::State& state) {
  RngStream rng(1, 0);
  const double horizon = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_fpp_timechange({0.7, 1.0}, horizon, 0.0, rng));
  }
}
BENCHMARK(BM_TimeChangeFpp)->Arg(100)->Arg(10000);

void BM_MulticlassQueue(benchmark::State& state) {
  RngStream rng(1, 0);
  const double horizon = static_cast<double>(state.range(0));
  const auto arrivals = thin_events(simulate_fpp_renewal({0.6, 2.0}, horizon, rng),
                                    ClassProbabilities({0.2, 0.3, 0.5}), rng);
  const auto departures = simulate_fpp_renewal({0.6, 1.0}, horizon, rng);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_multiclass_queue(arrivals, departures));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(arrivals.size() + departures.size()));
}
BENCHMARK(BM_MulticlassQueue)->Arg(10000)->Arg(1000000);

void BM_ContinuumQueue(benchmark::State& state) {
  RngStream rng(1, 0);
  const auto arrivals = simulate_fpp_renewal({0.9, 1.0}, 10000.0, rng);
  const auto departures = simulate_fpp_renewal({0.5, 1.0}, 10000.0, rng);
  const auto locations = LocationSampler::parse("uniform:1,2");
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_continuum_queue(arrivals, locations, departures, rng));
  }
}
BENCHMARK(BM_ContinuumQueue);

}  // namespace

BENCHMARK_MAIN();
