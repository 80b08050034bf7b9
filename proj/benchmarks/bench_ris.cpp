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

#include "risim/ris.hpp"

#include <benchmark/benchmark.h>

using namespace risim;

namespace {
constexpr double lambda = 0.0857;
}

static void NfCodebookSynthesis(benchmark::State &state)
{
    RisSpec spec;
    const Vec3 bs{0.0, 0.0, 5.0};
    const Vec3 focal = spherical_to_cartesian({deg2rad(40.0), deg2rad(90.0), 2.0});
    for (auto _ : state) {
        Codebook cb = nf_codebook(spec, bs, focal, lambda);
        benchmark::DoNotOptimize(cb.phases.data());
    }
}
BENCHMARK(NfCodebookSynthesis);

static void ApertureFieldSum(benchmark::State &state)
{
    RisSpec spec;
    const Vec3 bs{0.0, 0.0, 5.0};
    const Vec3 obs = spherical_to_cartesian({deg2rad(40.0), deg2rad(90.0), 2.0});
    const Codebook cb = nf_codebook(spec, bs, obs, lambda);
    for (auto _ : state) {
        auto field = aperture_field(spec, cb, bs, obs, lambda);
        benchmark::DoNotOptimize(field);
    }
}
BENCHMARK(ApertureFieldSum);

static void ReradiationGrid(benchmark::State &state)
{
    RisSpec spec;
    const Vec3 bs{0.0, 0.0, 5.0};
    const Codebook cb = ff_codebook(spec, deg2rad(40.0), deg2rad(90.0), lambda);
    std::vector<Spherical> grid;
    for (double deg = 1.0; deg <= 80.0; deg += static_cast<double>(state.range(0)))
        grid.push_back({deg2rad(deg), deg2rad(90.0), 10.0});
    for (auto _ : state) {
        auto pattern = reradiation_pattern(spec, cb, bs, grid, lambda);
        benchmark::DoNotOptimize(pattern.samples.data());
    }
    state.SetComplexityN(static_cast<int64_t>(grid.size()));
}
BENCHMARK(ReradiationGrid)->Arg(4)->Arg(2)->Arg(1)->Complexity(benchmark::oN);

static void QuantizeFullBoard(benchmark::State &state)
{
    RisSpec spec;
    const Codebook cb = ff_codebook(spec, deg2rad(40.0), deg2rad(90.0), lambda);
    for (auto _ : state) {
        Codebook q = quantize_codebook(cb, 4);
        benchmark::DoNotOptimize(q.phases.data());
    }
}
BENCHMARK(QuantizeFullBoard);

BENCHMARK_MAIN();
