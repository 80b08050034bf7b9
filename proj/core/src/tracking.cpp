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

#include "risim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace risim {

namespace {

constexpr double grid_min_deg = 5.0;
constexpr double grid_max_deg = 60.0;
constexpr double grid_step_deg = 5.0;

void check_psd(const Eigen::Matrix2d &p)
{
    if (std::abs(p(0, 1) - p(1, 0)) > 1e-9 * (1.0 + std::abs(p(0, 1))))
        throw numerical_error("kalman: covariance lost symmetry");
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(p);
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, es.eigenvalues().maxCoeff()))
        throw numerical_error("kalman: covariance left the PSD cone");
}

} // namespace

void TrackerConfig::validate() const
{
    if (!(eps_m > 0.0))
        throw std::invalid_argument("tracker config: eps must be positive");
    if (min_pts < 1 || confirm_frames < 1 || agg_frames < 1)
        throw std::invalid_argument("tracker config: counts must be >= 1");
}

void kalman_predict(CoordinateFilter &f, double dt, double q)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("kalman_predict: time step must be positive");
    Eigen::Matrix2d fm;
    fm << 1.0, dt, 0.0, 1.0;
    Eigen::Matrix2d qm;
    qm << dt * dt * dt / 3.0, dt * dt / 2.0, dt * dt / 2.0, dt;
    qm *= q;
    f.state = fm * f.state;
    f.covariance = fm * f.covariance * fm.transpose() + qm;
    check_psd(f.covariance);
}

void kalman_update(CoordinateFilter &f, double measurement, double r)
{
    const Eigen::RowVector2d h(1.0, 0.0);
    const double s = (h * f.covariance * h.transpose())(0) + r;
    if (!(s > 0.0)) {
        // exact prior + exact measurement: consistent data is a no-op
        if (std::abs(measurement - f.state(0)) < 1e-12)
            return;
        throw numerical_error("kalman_update: non-positive innovation variance");
    }
    const Eigen::Vector2d k = f.covariance * h.transpose() / s;
    f.state += k * (measurement - f.state(0));
    const Eigen::Matrix2d ikh = Eigen::Matrix2d::Identity() - k * h;
    f.covariance = ikh * f.covariance * ikh.transpose() + k * r * k.transpose();
    f.covariance = 0.5 * (f.covariance + f.covariance.transpose().eval());
    check_psd(f.covariance);
}

TrackState kalman_step(const TrackState &state, const std::optional<Measurement> &meas, double dt,
                       const TrackerConfig &cfg)
{
    TrackState out = state;
    kalman_predict(out.theta, dt, cfg.kalman_angle.q);
    kalman_predict(out.phi, dt, cfg.kalman_angle.q);
    kalman_predict(out.range, dt, cfg.kalman_range.q);
    if (meas) {
        kalman_update(out.theta, meas->theta, cfg.kalman_angle.r);
        kalman_update(out.phi, meas->phi, cfg.kalman_angle.r);
        kalman_update(out.range, meas->range, cfg.kalman_range.r);
    }
    return out;
}

PointCloudSynth PointCloudSynth::wide_jitter()
{
    PointCloudSynth s;
    s.frame_period_min_s = 0.027;
    s.frame_period_max_s = 0.297;
    return s;
}

std::vector<Frame> synth_point_cloud(const Trajectory &truth, const PointCloudSynth &synth,
                                     std::mt19937_64 &rng)
{
    truth.validate();
    std::uniform_real_distribution<double> period(synth.frame_period_min_s,
                                                  synth.frame_period_max_s);
    std::normal_distribution<double> pos_noise(0.0, synth.position_noise_std_m);
    std::normal_distribution<double> snr_noise(0.0, synth.target_snr_std_db);
    std::poisson_distribution<int> target_count(synth.target_points_mean);
    std::poisson_distribution<int> clutter_count(synth.clutter_rate);

    std::vector<Frame> frames;
    double t = truth.start_time();
    while (t <= truth.end_time()) {
        Frame frame;
        frame.timestamp = t;
        const Vec3 pos = truth.position(t);
        const Vec3 vel = truth.velocity(t);

        const int n_target = std::max(1, target_count(rng));
        for (int i = 0; i < n_target; ++i) {
            RadarPoint p;
            p.x = pos.x + (synth.position_noise_std_m > 0.0 ? pos_noise(rng) : 0.0);
            p.y = pos.y + (synth.position_noise_std_m > 0.0 ? pos_noise(rng) : 0.0);
            p.z = pos.z + (synth.position_noise_std_m > 0.0 ? pos_noise(rng) : 0.0);
            const Vec3 loc{p.x, p.y, p.z};
            const double range = loc.norm();
            p.azimuth = range > 0.0 ? std::atan2(p.y, p.x) : 0.0;
            p.velocity = range > 0.0 ? vel.dot(loc) / range : 0.0;
            p.snr_db = synth.target_snr_db + snr_noise(rng);
            frame.points.push_back(p);
        }
        const int n_clutter = synth.clutter_rate > 0.0 ? clutter_count(rng) : 0;
        for (int i = 0; i < n_clutter; ++i) {
            RadarPoint p;
            std::uniform_real_distribution<double> ux(synth.room_min.x, synth.room_max.x);
            std::uniform_real_distribution<double> uy(synth.room_min.y, synth.room_max.y);
            std::uniform_real_distribution<double> uz(synth.room_min.z, synth.room_max.z);
            p.x = ux(rng);
            p.y = uy(rng);
            p.z = uz(rng);
            p.azimuth = std::atan2(p.y, p.x);
            p.velocity = 0.0; // static scene clutter
            p.snr_db = synth.clutter_snr_db + snr_noise(rng);
            frame.points.push_back(p);
        }
        frames.push_back(std::move(frame));
        t += period(rng);
    }
    return frames;
}

Frame filter_points(const Frame &frame, const TrackerConfig &cfg)
{
    Frame out;
    out.timestamp = frame.timestamp;
    for (const RadarPoint &p : frame.points) {
        if (p.snr_db < cfg.snr_min_db)
            continue;
        if (cfg.suppress_static && std::abs(p.velocity) < cfg.static_velocity_threshold)
            continue;
        out.points.push_back(p);
    }
    return out;
}

std::vector<int> dbscan(const std::vector<Vec3> &points, double eps, int min_pts)
{
    if (!(eps > 0.0))
        throw std::invalid_argument("dbscan: eps must be positive");
    const std::size_t n = points.size();
    std::vector<int> labels(n, -1);
    if (n == 0)
        return labels;

    const double eps2 = eps * eps;
    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 d = points[i] - points[j];
            if (d.dot(d) <= eps2) {
                neighbors[i].push_back(j);
                neighbors[j].push_back(i);
            }
        }
    std::vector<bool> core(n, false);
    for (std::size_t i = 0; i < n; ++i)
        core[i] = neighbors[i].size() + 1 >= static_cast<std::size_t>(min_pts);

    // Expand clusters over core points in first-seen order.
    int next_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!core[i] || labels[i] != -1)
            continue;
        const int label = next_label++;
        std::deque<std::size_t> queue{i};
        labels[i] = label;
        while (!queue.empty()) {
            const std::size_t p = queue.front();
            queue.pop_front();
            for (std::size_t q : neighbors[p])
                if (core[q] && labels[q] == -1) {
                    labels[q] = label;
                    queue.push_back(q);
                }
        }
    }
    // Border points attach to the cluster of their lowest-index core neighbor.
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i] || labels[i] != -1)
            continue;
        for (std::size_t q : neighbors[i])
            if (core[q]) {
                labels[i] = labels[q];
                break;
            }
    }
    return labels;
}

std::optional<ClusterSelection> select_cluster(const std::vector<int> &labels,
                                               const std::vector<RadarPoint> &points,
                                               const TrackerConfig &cfg)
{
    if (labels.size() != points.size())
        throw std::invalid_argument("select_cluster: label/point size mismatch");
    int max_label = -1;
    for (int l : labels)
        max_label = std::max(max_label, l);
    if (max_label < 0)
        return std::nullopt;

    std::optional<ClusterSelection> best;
    for (int l = 0; l <= max_label; ++l) {
        ClusterSelection sel;
        double speed = 0.0, snr = 0.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] != l)
                continue;
            sel.member_indices.push_back(i);
            sel.centroid = sel.centroid + Vec3{points[i].x, points[i].y, points[i].z};
            speed += std::abs(points[i].velocity);
            snr += points[i].snr_db;
        }
        if (sel.member_indices.empty())
            continue;
        const double count = static_cast<double>(sel.member_indices.size());
        sel.centroid = sel.centroid / count;
        sel.mean_speed = speed / count;
        sel.mean_snr_db = snr / count;
        if (cfg.suppress_static && sel.mean_speed < cfg.static_velocity_threshold)
            continue;
        if (!best || sel.member_indices.size() > best->member_indices.size() ||
            (sel.member_indices.size() == best->member_indices.size() &&
             sel.mean_snr_db > best->mean_snr_db))
            best = std::move(sel);
    }
    return best;
}

int aoa_to_index(double theta_rad)
{
    const double deg = std::clamp(rad2deg(theta_rad), grid_min_deg, grid_max_deg);
    return static_cast<int>(std::lround((deg - grid_min_deg) / grid_step_deg));
}

double index_to_aoa(int index) { return deg2rad(grid_min_deg + grid_step_deg * index); }

std::vector<LoopRecord> run_tracking_loop(const std::vector<Frame> &frames,
                                          const TrackerConfig &cfg, std::size_t bank_size)
{
    cfg.validate();
    const std::size_t index_cells =
        static_cast<std::size_t>((grid_max_deg - grid_min_deg) / grid_step_deg) + 1;
    if (bank_size < index_cells)
        throw config_error("run_tracking_loop: codebook bank smaller than the steering grid");

    std::vector<LoopRecord> records;
    std::deque<Frame> buffer;
    TrackState track;
    double prev_time = 0.0;

    for (const Frame &raw : frames) {
        if (!records.empty() && raw.timestamp <= prev_time)
            throw std::invalid_argument("run_tracking_loop: timestamps must strictly increase");

        const Frame filtered = filter_points(raw, cfg);
        buffer.push_back(filtered);
        while (buffer.size() > static_cast<std::size_t>(cfg.agg_frames))
            buffer.pop_front();

        std::vector<RadarPoint> agg;
        for (const Frame &f : buffer)
            agg.insert(agg.end(), f.points.begin(), f.points.end());
        std::vector<Vec3> positions;
        positions.reserve(agg.size());
        for (const RadarPoint &p : agg)
            positions.push_back({p.x, p.y, p.z});

        const auto labels = dbscan(positions, cfg.eps_m, cfg.min_pts);
        const auto selection = select_cluster(labels, agg, cfg);

        const double dt = records.empty() ? cfg.dt_nominal_s
                                          : std::max(1e-6, raw.timestamp - prev_time);
        prev_time = raw.timestamp;

        LoopRecord rec;
        rec.timestamp = raw.timestamp;

        if (selection) {
            Measurement meas;
            const Spherical sph = cartesian_to_spherical(selection->centroid);
            meas.theta = sph.theta;
            meas.phi = sph.phi;
            meas.range = sph.r;
            if (!track.initialized) {
                track.theta.state << meas.theta, 0.0;
                track.phi.state << meas.phi, 0.0;
                track.range.state << meas.range, 0.0;
                const double big_rate_var = 1.0;
                track.theta.covariance << cfg.kalman_angle.r, 0.0, 0.0, big_rate_var;
                track.phi.covariance << cfg.kalman_angle.r, 0.0, 0.0, big_rate_var;
                track.range.covariance << cfg.kalman_range.r, 0.0, 0.0, big_rate_var;
                track.initialized = true;
            } else {
                track = kalman_step(track, meas, dt, cfg);
            }
            track.last_update_s = raw.timestamp;
        } else if (track.initialized) {
            // coast on the last known rates
            track = kalman_step(track, std::nullopt, dt, cfg);
        }

        if (track.initialized) {
            const int idx = aoa_to_index(track.theta.value());
            rec.index = idx;
            if (idx == track.candidate_index)
                ++track.confirm_count;
            else {
                track.candidate_index = idx;
                track.confirm_count = 1;
            }
            const bool stable = track.confirm_count >= cfg.confirm_frames;
            const bool differs = !track.confirmed_index || *track.confirmed_index != idx;
            if (stable && differs) {
                rec.phase_update = true;
                track.confirmed_index = idx;
                track.confirm_count = 0; // confirmation counter resets after an update
                track.candidate_index = -1;
            }
        }
        rec.state = track;
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace risim
