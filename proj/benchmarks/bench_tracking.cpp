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

#include "risim/tracking.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace risim;

static void DbscanUniform(benchmark::State &state)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::vector<Vec3> points(static_cast<std::size_t>(state.range(0)));
    for (Vec3 &p : points)
        p = {u(rng), u(rng), u(rng) / 3.0};
    for (auto _ : state) {
        auto labels = dbscan(points, 0.25, 5);
        benchmark::DoNotOptimize(labels.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(DbscanUniform)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oNSquared);

static void KalmanStepTriplet(benchmark::State &state)
{
    TrackerConfig cfg;
    TrackState track;
    track.initialized = true;
    Measurement meas{0.7, 1.57, 2.0};
    for (auto _ : state) {
        track = kalman_step(track, meas, 0.127, cfg);
        benchmark::DoNotOptimize(&track);
    }
}
BENCHMARK(KalmanStepTriplet);

static void FullLoopFrame(benchmark::State &state)
{
    Trajectory truth;
    truth.waypoints = {{0.0, {0.0, 1.3, 1.5}}, {60.0, {0.0, 1.9, 0.8}}};
    PointCloudSynth synth;
    synth.clutter_rate = 4.0;
    std::mt19937_64 rng(7);
    const auto frames = synth_point_cloud(truth, synth, rng);
    TrackerConfig cfg;
    cfg.suppress_static = false;
    for (auto _ : state) {
        auto records = run_tracking_loop(frames, cfg, 12);
        benchmark::DoNotOptimize(records.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(frames.size()));
}
BENCHMARK(FullLoopFrame);

BENCHMARK_MAIN();
