// Copyright 2026 The RadKit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "benchmark/benchmark.h"
#include "radkit/mechanisms.hpp"

namespace {

using namespace radkit;

void BM_GrrSample(benchmark::State& state) {
  GrrMechanism mech(static_cast<std::size_t>(state.range(0)), 1.0);
  Pcg32 rng(1);
  Output out;
  for (auto _ : state) {
    mech.sample(3, rng, out);
    benchmark::DoNotOptimize(out.record);
  }
}
BENCHMARK(BM_GrrSample)->Arg(100)->Arg(1000);

void BM_OueSample(benchmark::State& state) {
  OueMechanism mech(static_cast<std::size_t>(state.range(0)), 1.0);
  Pcg32 rng(2);
  Output out;
  for (auto _ : state) {
    mech.sample(3, rng, out);
    benchmark::DoNotOptimize(out.items.size());
  }
}
BENCHMARK(BM_OueSample)->Arg(100)->Arg(256)->Arg(1000);

void BM_SsSample(benchmark::State& state) {
  SsMechanism mech(static_cast<std::size_t>(state.range(0)), 1.0);
  Pcg32 rng(3);
  Output out;
  for (auto _ : state) {
    mech.sample(3, rng, out);
    benchmark::DoNotOptimize(out.items.size());
  }
}
BENCHMARK(BM_SsSample)->Arg(100)->Arg(256)->Arg(1000);

void BM_OueLikelihood(benchmark::State& state) {
  std::size_t m = static_cast<std::size_t>(state.range(0));
  OueMechanism mech(m, 1.0);
  Pcg32 rng(4);
  Output out;
  mech.sample(3, rng, out);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mech.likelihood(out, 5));
  }
}
BENCHMARK(BM_OueLikelihood)->Arg(100)->Arg(1000);

void BM_ExponentialSample(benchmark::State& state) {
  ExponentialMechanism1D mech(1.0);
  Pcg32 rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mech.sample(0.37, rng));
  }
}
BENCHMARK(BM_ExponentialSample);

}  // namespace
