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

#pragma once

#include "risim/gbsm.hpp"
#include "risim/propagation.hpp"
#include "risim/radar.hpp"
#include "risim/ris.hpp"
#include "risim/tracking.hpp"

#include <cstdint>
#include <string>

namespace risim {

// Terminal (BS or UE) placement, array, and pattern. Positions are in the
// surface local frame; when a trajectory is present it overrides the static
// position over its time span.
struct TerminalConfig {
    Vec3 position{0.0, 0.0, 5.0};
    Trajectory trajectory; // empty waypoints = static terminal
    ArrayLayout array = ArrayLayout::single();
    std::string pattern_kind = "isotropic"; // isotropic | horn
    double gain_dbi = 0.0;

    bool moving() const { return trajectory.waypoints.size() > 1; }
    Vec3 position_at(double t) const
    {
        return trajectory.waypoints.empty() ? position : trajectory.position(t);
    }
    AntennaPattern pattern_toward(const Vec3 &aim) const;
};

// Direct (blocked LoS) leg large-scale model.
struct DirectPathParams {
    double gamma = 4.5;
    double blockage_db = 25.0;
};

// Full experiment configuration. Field names carry explicit units in the
// JSON schema; all angles cross the file boundary in degrees.
struct Scenario {
    int schema_version = 1;
    double carrier_hz = 3.5e9;
    double bandwidth_hz = 800e6;
    std::uint64_t seed = 1;
    double sweep_plane_phi_deg = 90.0; // azimuth of the in-plane measurement sweep
    RisSpec ris;
    TerminalConfig bs;
    TerminalConfig ue;
    GbsmConfig gbsm;
    PathLossParams pathloss{2.0, 1.7, 1.0, 0.0, std::nullopt};
    DirectPathParams direct;
    LinkBudget link{20.0, 20.0, 10.0, 1e-9};
    TrackerConfig tracker;
    RadarConfig radar = RadarConfig::default_array();
    Vec3 room_min_m{-7.3, -5.4, 0.0}; // scatterer volume for clutter synthesis
    Vec3 room_max_m{7.3, 5.4, 3.0};
    double throughput_bandwidth_hz = 100e6; // NR carrier driving the rate numbers
    double max_throughput_mbps = 571.1;

    double lambda0_m() const { return speed_of_light / carrier_hz; }
    void validate() const;
    static Scenario defaults();
};

Scenario load_scenario(const std::string &path);
void save_scenario(const Scenario &s, const std::string &path);

// Canonical single-line JSON of the full configuration; basis of the hash.
std::string scenario_canonical_json(const Scenario &s);

// FNV-1a over the canonical JSON, embedded in every emitted report.
std::uint64_t config_hash(const Scenario &s);

} // namespace risim
