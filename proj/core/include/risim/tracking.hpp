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

#include "risim/geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace risim {

struct RadarPoint {
    double x = 0.0, y = 0.0, z = 0.0; // m
    double azimuth = 0.0;             // rad
    double snr_db = 0.0;
    double velocity = 0.0; // radial, m/s
};

struct Frame {
    double timestamp = 0.0; // s
    std::vector<RadarPoint> points;
};

struct KalmanNoise {
    double q = 1e-3; // process noise intensity
    double r = 1e-2; // measurement variance
};

struct TrackerConfig {
    double snr_min_db = 10.0;
    bool suppress_static = true;
    double static_velocity_threshold = 0.05; // m/s, zero-Doppler gate
    double eps_m = 0.3;
    int min_pts = 5;
    int agg_frames = 3;     // rolling buffer depth
    int confirm_frames = 3; // N stable frames before a phase update
    KalmanNoise kalman_angle;
    KalmanNoise kalman_range;
    double dt_nominal_s = 0.127;

    void validate() const;
};

// One constant-velocity scalar filter: state (value, rate).
struct CoordinateFilter {
    Eigen::Vector2d state = Eigen::Vector2d::Zero();
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();

    double value() const { return state(0); }
    double rate() const { return state(1); }
};

// Per-coordinate track over (theta, phi, r) plus phase-update bookkeeping.
struct TrackState {
    CoordinateFilter theta;
    CoordinateFilter phi;
    CoordinateFilter range;
    bool initialized = false;
    double last_update_s = 0.0;
    std::optional<int> confirmed_index;
    int confirm_count = 0;
    int candidate_index = -1;
};

struct Measurement {
    double theta = 0.0; // rad
    double phi = 0.0;   // rad
    double range = 0.0; // m
};

// Predict-only or predict+update step of one scalar constant-velocity filter
// (Joseph-form update). Throws numerical_error if the covariance leaves the
// PSD cone.
void kalman_predict(CoordinateFilter &f, double dt, double q);
void kalman_update(CoordinateFilter &f, double measurement, double r);

// Full per-coordinate step: always predict, update only when a measurement is
// present (coast on miss).
TrackState kalman_step(const TrackState &state, const std::optional<Measurement> &meas, double dt,
                       const TrackerConfig &cfg);

// Synthetic stimulus configuration for the radar stream.
struct PointCloudSynth {
    double frame_period_min_s = 0.097; // default jitter preset, 127 ms mean
    double frame_period_max_s = 0.157;
    double target_points_mean = 12.0;
    double position_noise_std_m = 0.05;
    double target_snr_db = 25.0;
    double target_snr_std_db = 2.0;
    double clutter_rate = 0.0; // expected clutter points per frame
    double clutter_snr_db = 5.0;
    Vec3 room_min{-5.0, -5.0, 0.0};
    Vec3 room_max{5.0, 5.0, 5.0};

    // Wide jitter preset spanning the full observed frame-latency range.
    static PointCloudSynth wide_jitter();
};

// Draws frames along the truth trajectory: Poisson-many noisy target points
// plus uniform low-SNR clutter, frame period jittered uniformly.
std::vector<Frame> synth_point_cloud(const Trajectory &truth, const PointCloudSynth &synth,
                                     std::mt19937_64 &rng);

// Drops low-SNR points and, when suppression is on, zero-Doppler points.
Frame filter_points(const Frame &frame, const TrackerConfig &cfg);

// Density-based clustering. Returns one label per point: cluster ids starting
// at 0 in first-seen order, -1 for noise. Border points attach to the cluster
// of their lowest-index core neighbor.
std::vector<int> dbscan(const std::vector<Vec3> &points, double eps, int min_pts);

struct ClusterSelection {
    std::vector<std::size_t> member_indices;
    Vec3 centroid{};
    double mean_speed = 0.0;
    double mean_snr_db = 0.0;
};

// Largest moving cluster; ties break to the higher mean SNR. Empty when no
// cluster clears the motion gate.
std::optional<ClusterSelection> select_cluster(const std::vector<int> &labels,
                                               const std::vector<RadarPoint> &points,
                                               const TrackerConfig &cfg);

// Nearest index on the 5..60 degree steering grid (5 degree pitch, 12 cells);
// angles outside the grid clamp to the border cells.
int aoa_to_index(double theta_rad);
double index_to_aoa(int index); // rad, grid cell center

struct LoopRecord {
    double timestamp = 0.0;
    TrackState state;
    int index = -1;
    bool phase_update = false;
};

// Closed tracking loop: filter, aggregate, cluster, select, per-coordinate
// Kalman, grid mapping, and the N-stable-frames phase-update rule.
std::vector<LoopRecord> run_tracking_loop(const std::vector<Frame> &frames,
                                          const TrackerConfig &cfg, std::size_t bank_size = 12);

} // namespace risim
