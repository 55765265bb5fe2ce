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
#include "radkit/bounds.hpp"
#include "radkit/stats.hpp"

namespace {

using namespace radkit;

void BM_NormQuantile(benchmark::State& state) {
  double p = 1e-6;
  for (auto _ : state) {
    p += 1e-9;
    benchmark::DoNotOptimize(norm_quantile(p));
  }
}
BENCHMARK(BM_NormQuantile);

void BM_GdpCalibration(benchmark::State& state) {
  double gamma = 0.05;
  for (auto _ : state) {
    gamma = gamma > 0.4 ? 0.05 : gamma + 1e-4;
    benchmark::DoNotOptimize(calibrate_gdp_sigma(gamma, 10, 100));
  }
}
BENCHMARK(BM_GdpCalibration);

void BM_OueCalibration(benchmark::State& state) {
  double gamma = 0.05;
  for (auto _ : state) {
    gamma = gamma > 0.4 ? 0.05 : gamma + 1e-4;
    benchmark::DoNotOptimize(calibrate_oue_epsilon(gamma, 10));
  }
}
BENCHMARK(BM_OueCalibration);

}  // namespace
