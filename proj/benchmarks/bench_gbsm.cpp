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

#include "risim/gbsm.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace risim;

static void ClusterGeneration(benchmark::State &state)
{
    GbsmConfig cfg;
    cfg.clusters = static_cast<int>(state.range(0));
    cfg.rays_per_cluster = 17;
    std::mt19937_64 rng(1);
    for (auto _ : state) {
        ClusterSet set = generate_clusters(cfg, rng);
        benchmark::DoNotOptimize(set.clusters.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ClusterGeneration)->Range(2, 64)->Complexity(benchmark::oN);

static void ReflectedLegSynthesis(benchmark::State &state)
{
    GbsmScene scene;
    GbsmConfig cfg;
    cfg.clusters = static_cast<int>(state.range(0));
    std::mt19937_64 rng(2);
    const ClusterSet clusters = generate_clusters(cfg, rng);
    for (auto _ : state) {
        Cir cir = ris_ue_cir(scene, RisPattern::unit_pattern(), clusters, 12.6);
        benchmark::DoNotOptimize(cir.taps.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ReflectedLegSynthesis)->Range(2, 64)->Complexity(benchmark::oN);

static void CascadeAndBin(benchmark::State &state)
{
    GbsmScene scene;
    GbsmConfig cfg;
    std::mt19937_64 rng(3);
    const ClusterSet clusters = generate_clusters(cfg, rng);
    const ClusterSet direct = generate_bs_ue_clusters(cfg, rng);
    const Cir leg_bs = bs_ris_cir(scene, AntennaPattern::isotropic(), AntennaPattern::isotropic());
    const Cir leg_ue = ris_ue_cir(scene, RisPattern::unit_pattern(), clusters, 12.6);
    const Cir leg_direct = bs_ue_cir(scene, direct);
    for (auto _ : state) {
        Cir full = cascade_cir(leg_bs, leg_ue, leg_direct);
        benchmark::DoNotOptimize(full.taps.data());
    }
}
BENCHMARK(CascadeAndBin);

BENCHMARK_MAIN();
