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

#include "risim/io.hpp"
#include "risim/metrics.hpp"
#include "risim/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace risim {

// Point on the angular/distance evaluation grid with its channel statistics.
struct PointReport {
    double angle_deg = 0.0;
    double dist_m = 0.0;
    double pl_db = 0.0;
    double k_db = 0.0;
    double tau_rms_ns = 0.0;
    double b_c_mhz = 0.0;
    std::optional<ClusterDecayFit> decay_fit;
    std::vector<double> pdp; // normalized, one entry per delay bin
    double pdp_resolution_ns = 1.25;
    double pdp_peak_db = 0.0; // absolute peak after the link budget
};

struct RunReport {
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    bool ris_on = true;
    std::vector<PointReport> points;
};

// Assembled cascaded channel of one evaluation point, with the link budget
// already applied to the tap amplitudes.
struct PointChannel {
    Cir cir;
    double pl_ris_db = 0.0;    // two-hop budget (when the surface is on)
    double pl_direct_db = 0.0; // blocked direct leg budget
};

// Builds the cascaded (surface on) or direct-only (surface off, null pattern)
// channel for a terminal at `ue_pos`, reusing a fixed cluster realization.
// The surface pattern is expensive to derive from a codebook; build it once
// via `cached_codebook_pattern` and share it across realizations.
PointChannel build_point_channel(const Scenario &sc, const Vec3 &ue_pos, const Vec3 &ue_vel,
                                 const RisPattern *pattern, const ClusterSet &ris_ue_clusters,
                                 const ClusterSet &bs_ue_clusters,
                                 const std::vector<double> &time_grid);

// Aperture pattern of a codebook with a precomputed direction cache.
RisPattern cached_codebook_pattern(const Scenario &sc, const Codebook &cb);

// Near-field or far-field steering bank over the 5..60 degree grid in the
// sweep plane; near-field entries focus at `focal_dist_m`.
std::vector<Codebook> build_steering_bank(const Scenario &sc, bool near_field,
                                          double focal_dist_m);

// `codebook` subcommand: writes the phase matrix and its re-radiation pattern.
struct CodebookOutputs {
    std::string codebook_csv;
    std::string pattern_csv;
};
CodebookOutputs cmd_codebook(const Scenario &sc, const std::string &regime, double theta_deg,
                             double phi_deg, double dist_m, bool quantize,
                             const std::string &out_dir);

// `simulate` subcommand core: channel statistics over an angle x distance grid.
RunReport cmd_simulate(const Scenario &sc, const std::vector<double> &angles_deg,
                       const std::vector<double> &distances_m, bool ris_on);
void write_run_report(const RunReport &report, const std::string &out_dir,
                      const std::string &format);

// `harden` subcommand: tracked-surface vs no-surface throughput on a circular
// arc preset.
struct HardenSeries {
    std::vector<double> t_s;
    std::vector<double> mbps_on;
    std::vector<double> mbps_off;
};

struct HardenReport {
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::string preset;
    bool tracking = true;
    double mean_on_mbps = 0.0, std_on_mbps = 0.0;
    double mean_off_mbps = 0.0, std_off_mbps = 0.0;
    double mean_improvement = 0.0; // relative
    double std_reduction = 0.0;    // relative
    std::vector<double> cdf_percentiles; // 10..90 deciles of the on-series
    HardenSeries series;
    int phase_updates = 0;
};

HardenReport cmd_harden(const Scenario &sc, const std::string &preset, bool tracking);
void write_harden_report(const HardenReport &report, const std::string &out_dir);

// `crlb` subcommand: bound sweep over a planar grid.
struct CrlbGrid {
    double x_min = -2.0, x_max = 2.0;
    double y_min = 0.5, y_max = 4.0;
    int nx = 21, ny = 21;
};
std::vector<CrlbSample> cmd_crlb(const Scenario &sc, const CrlbGrid &grid);

// `track` subcommand: synthesize (or replay) a frame stream and run the loop.
struct TrackOutputs {
    std::vector<TrackRecordRow> rows;
    std::vector<Frame> frames;
};
TrackOutputs cmd_track(const Scenario &sc, const std::optional<std::string> &frames_path);

// `fit` subcommand: dispatch to the estimators, returns a JSON report string.
std::string cmd_fit(const std::string &what, const std::string &input_path,
                    bool estimate_intercept, double lambda_m);

// Circular-arc constant-speed trajectory preset in the sweep plane.
Trajectory arc_trajectory(double radius_m, double speed_m_s, double theta_start_deg,
                          double theta_end_deg, double phi_deg, int passes = 2);

} // namespace risim
