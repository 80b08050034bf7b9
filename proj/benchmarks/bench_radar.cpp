// SPDX-License-Identifier: Apache-2.0
//
// risim — RIS-assisted radar and communication coexistence simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risim/radar.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace risim;

static void FisherInformation(benchmark::State &state)
{
    RadarConfig cfg = RadarConfig::default_array();
    cfg.noise_sigma2 = 1e-16;
    RadarTarget t;
    t.x_m = 0.3;
    t.y_m = 2.0;
    for (auto _ : state) {
        auto j = fim(cfg, t);
        benchmark::DoNotOptimize(j.data());
    }
}
BENCHMARK(FisherInformation);

static void BoundSweepRow(benchmark::State &state)
{
    RadarConfig cfg = RadarConfig::default_array();
    cfg.noise_sigma2 = 1e-16;
    for (auto _ : state) {
        double acc = 0.0;
        for (int i = 0; i < 32; ++i) {
            RadarTarget t;
            t.x_m = -1.0 + 2.0 * i / 31.0;
            t.y_m = 2.0;
            acc += crlb(cfg, t);
        }
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BoundSweepRow);

static void MlGridEstimate(benchmark::State &state)
{
    RadarConfig cfg = RadarConfig::default_array();
    RadarTarget t;
    t.x_m = 0.0;
    t.y_m = 2.0;
    auto mu = received_means(cfg, t);
    double mp = 0.0;
    for (const auto &m : mu)
        mp += std::norm(m);
    cfg.noise_sigma2 = mp / mu.size() / db2lin(25.0);
    std::mt19937_64 rng(9);
    const auto z = synth_snapshot(cfg, t, rng);
    const SearchBox box{-0.06, 0.06, 2.0 - 0.0006, 2.0 + 0.0006};
    for (auto _ : state) {
        auto est = ml_estimate_grid(cfg, z, box, 1e-5);
        benchmark::DoNotOptimize(est);
    }
}
BENCHMARK(MlGridEstimate);

BENCHMARK_MAIN();
