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

#include "risim/experiments.hpp"

#include "risim/errors.hpp"
#include "risim/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <thread>

namespace risim {

using nlohmann::json;

namespace {

std::mt19937_64 sub_rng(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

std::string join_path(const std::string &dir, const std::string &name)
{
    return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw io_error("cannot create output directory: " + dir);
}

double mean_of(const std::vector<double> &v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double> &v)
{
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v)
        acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

ReflectionGeometry reflection_geometry(const Vec3 &bs, const Vec3 &ue)
{
    const Spherical si = cartesian_to_spherical(bs);
    const Spherical sr = cartesian_to_spherical(ue);
    ReflectionGeometry g;
    g.theta_i = si.theta;
    g.phi_i = si.phi;
    g.theta_r = sr.theta;
    g.phi_r = sr.phi;
    return g;
}

GbsmScene make_scene(const Scenario &sc, const Vec3 &ue_pos, const Vec3 &ue_vel,
                     const std::vector<double> &time_grid)
{
    GbsmScene scene;
    scene.bs_position = sc.bs.position;
    scene.ue_position = ue_pos;
    scene.ue_velocity = ue_vel;
    scene.lambda0_m = sc.lambda0_m();
    scene.bs_array = sc.bs.array;
    scene.ue_array = sc.ue.array;
    scene.bs_pattern = AntennaPattern::isotropic(); // budget gains live in Eq. 10 terms
    scene.ue_pattern = AntennaPattern::isotropic();
    scene.time_grid_s = time_grid;
    return scene;
}

json decay_to_json(const std::optional<ClusterDecayFit> &fit)
{
    if (!fit)
        return nullptr;
    return json{{"a", fit->a}, {"b_per_ns", fit->b}, {"c", fit->c}};
}

} // namespace

RisPattern cached_codebook_pattern(const Scenario &sc, const Codebook &cb)
{
    RisPattern pat = RisPattern::from_codebook(sc.ris, cb, sc.bs.position, sc.lambda0_m(), 10.0);
    pat.build_direction_cache(deg2rad(88.0), 89, 72);
    return pat;
}

PointChannel build_point_channel(const Scenario &sc, const Vec3 &ue_pos, const Vec3 &ue_vel,
                                 const RisPattern *pattern, const ClusterSet &ris_ue_clusters,
                                 const ClusterSet &bs_ue_clusters,
                                 const std::vector<double> &time_grid)
{
    const double lambda = sc.lambda0_m();
    const double d1 = sc.bs.position.norm();
    const double d2 = ue_pos.norm();
    const double d_direct = (ue_pos - sc.bs.position).norm();

    PointChannel out;
    out.pl_direct_db =
        ci_path_loss_single(sc.direct.gamma, sc.pathloss.d0_m, lambda, d_direct,
                            sc.direct.blockage_db);
    const GbsmScene scene = make_scene(sc, ue_pos, ue_vel, time_grid);
    const Cir direct = scale_cir(bs_ue_cir(scene, bs_ue_clusters, sc.gbsm.dual_polarized),
                                 std::pow(10.0, -out.pl_direct_db / 20.0));

    if (!pattern) {
        out.cir = direct;
        out.pl_ris_db = 0.0;
        return out;
    }

    const double sigma = configured_rcs(sc.ris, reflection_geometry(sc.bs.position, ue_pos), lambda);
    const double fspl_db = lin2db(fspl_ris_gain(sc.link, lambda, sigma, d1, d2));
    out.pl_ris_db = ci_path_loss(sc.pathloss, lambda, d1, d2, fspl_db);

    const Cir leg_bs = bs_ris_cir(scene, scene.bs_pattern, AntennaPattern::isotropic(),
                                  sc.gbsm.dual_polarized);
    const Cir leg_ue = scale_cir(ris_ue_cir(scene, *pattern, ris_ue_clusters, sc.gbsm.k_factor_db,
                                            sc.gbsm.dual_polarized),
                                 std::pow(10.0, -out.pl_ris_db / 20.0));
    out.cir = cascade_cir(leg_bs, leg_ue, direct);
    return out;
}

std::vector<Codebook> build_steering_bank(const Scenario &sc, bool near_field, double focal_dist_m)
{
    const double lambda = sc.lambda0_m();
    const double phi = deg2rad(sc.sweep_plane_phi_deg);
    std::vector<Codebook> bank;
    for (int i = 0; i < 12; ++i) {
        const double theta = deg2rad(5.0 + 5.0 * i);
        Codebook cb = near_field
                          ? nf_codebook(sc.ris, sc.bs.position,
                                        spherical_to_cartesian({theta, phi, focal_dist_m}), lambda)
                          : ff_codebook(sc.ris, theta, phi, lambda);
        bank.push_back(quantize_codebook(cb, sc.ris.bit_depth));
    }
    return bank;
}

CodebookOutputs cmd_codebook(const Scenario &sc, const std::string &regime, double theta_deg,
                             double phi_deg, double dist_m, bool quantize,
                             const std::string &out_dir)
{
    sc.validate();
    ensure_dir(out_dir);
    const double lambda = sc.lambda0_m();
    const double theta = deg2rad(theta_deg);
    const double phi = deg2rad(phi_deg);

    Codebook cb;
    if (regime == "nf")
        cb = nf_codebook(sc.ris, sc.bs.position, spherical_to_cartesian({theta, phi, dist_m}),
                         lambda);
    else if (regime == "ff")
        cb = ff_codebook(sc.ris, theta, phi, lambda);
    else
        throw config_error("cmd_codebook: regime must be nf or ff");
    if (quantize)
        cb = quantize_codebook(cb, sc.ris.bit_depth);

    std::vector<Spherical> grid;
    const double ring = std::max(10.0, 3.0 * std::max(sc.ris.aperture_x_m, sc.ris.aperture_y_m));
    for (double t = 0.0; t <= 88.0; t += 0.5)
        grid.push_back({deg2rad(std::max(t, 1e-3)), phi, ring});
    const ReradiationPattern pattern = reradiation_pattern(sc.ris, cb, sc.bs.position, grid, lambda);

    CodebookOutputs files;
    files.codebook_csv = join_path(out_dir, "codebook_" + regime + ".csv");
    files.pattern_csv = join_path(out_dir, "pattern_" + regime + ".csv");
    write_codebook_csv(cb, files.codebook_csv);
    write_pattern_csv(pattern.samples, files.pattern_csv);
    return files;
}

RunReport cmd_simulate(const Scenario &sc, const std::vector<double> &angles_deg,
                       const std::vector<double> &distances_m, bool ris_on)
{
    sc.validate();
    RunReport report;
    report.seed = sc.seed;
    report.config_hash = config_hash(sc);
    report.ris_on = ris_on;

    const double lambda = sc.lambda0_m();
    const double resolution_s = 1.25e-9;
    const double fraunhofer = fraunhofer_distance(sc.ris, lambda);
    const double phi = deg2rad(sc.sweep_plane_phi_deg);

    struct PointTask {
        double angle = 0.0;
        double dist = 0.0;
        std::uint64_t id = 0;
    };
    std::vector<PointTask> tasks;
    std::uint64_t point_id = 0;
    for (double dist : distances_m)
        for (double angle : angles_deg)
            tasks.push_back({angle, dist, ++point_id});

    auto evaluate_point = [&](const PointTask &task) {
        auto rng = sub_rng(sc.seed, task.id);
        const Vec3 ue_pos = spherical_to_cartesian({deg2rad(task.angle), phi, task.dist});

        std::optional<RisPattern> pattern;
        if (ris_on) {
            const bool nf = task.dist < fraunhofer;
            Codebook cb = nf ? nf_codebook(sc.ris, sc.bs.position, ue_pos, lambda)
                             : ff_codebook(sc.ris, deg2rad(task.angle), phi, lambda);
            cb = quantize_codebook(cb, sc.ris.bit_depth);
            pattern = cached_codebook_pattern(sc, cb);
        }

        const ClusterSet ris_clusters = generate_clusters(sc.gbsm, rng);
        const ClusterSet direct_clusters = generate_bs_ue_clusters(sc.gbsm, rng);
        const PointChannel chan =
            build_point_channel(sc, ue_pos, Vec3{}, pattern ? &*pattern : nullptr, ris_clusters,
                                direct_clusters, {0.0});

        PointReport pr;
        pr.angle_deg = task.angle;
        pr.dist_m = task.dist;
        pr.pl_db = ris_on ? chan.pl_ris_db : chan.pl_direct_db;

        const Pdp pdp_abs = pdp_from_cir(chan.cir, resolution_s, 0.0, false);
        pr.pdp_peak_db = lin2db(*std::max_element(pdp_abs.power.begin(), pdp_abs.power.end()) *
                                db2lin(sc.link.p_tx_dbm));
        const Pdp pdp = pdp_from_cir(chan.cir, resolution_s, 0.0, true);
        pr.pdp = pdp.power;
        pr.pdp_resolution_ns = resolution_s * 1e9;
        const double tau = rms_delay_spread(pdp);
        pr.tau_rms_ns = tau * 1e9;
        pr.b_c_mhz = coherence_bandwidth(tau) / 1e6;
        try {
            pr.decay_fit = fit_cluster_decay(pdp);
        } catch (const std::exception &) {
            pr.decay_fit = std::nullopt; // sparse profiles may not identify a decay
        }

        // Ensemble envelopes for the K estimate, cluster draws re-rolled.
        std::vector<double> envelope;
        envelope.reserve(256);
        for (int r = 0; r < 256; ++r) {
            const ClusterSet rc = generate_clusters(sc.gbsm, rng);
            const ClusterSet dc = generate_bs_ue_clusters(sc.gbsm, rng);
            const PointChannel ch = build_point_channel(
                sc, ue_pos, Vec3{}, pattern ? &*pattern : nullptr, rc, dc, {0.0});
            envelope.push_back(ch.cir.narrowband(0.0).norm());
        }
        pr.k_db = estimate_k_factor(envelope).k_db;
        return pr;
    };

    // Grid points carry independent sub-seeded generators, so they fan out
    // across threads; assembly stays in task order.
    report.points.resize(tasks.size());
    const unsigned workers = std::min<unsigned>(
        std::max(1u, std::thread::hardware_concurrency()), static_cast<unsigned>(tasks.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            report.points[i] = evaluate_point(tasks[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::mutex error_mutex;
        std::exception_ptr first_error;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
                    try {
                        report.points[i] = evaluate_point(tasks[i]);
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error)
                            first_error = std::current_exception();
                    }
                }
            });
        for (std::thread &t : pool)
            t.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }
    return report;
}

void write_run_report(const RunReport &report, const std::string &out_dir,
                      const std::string &format)
{
    ensure_dir(out_dir);
    if (format == "json" || format == "both") {
        json points = json::array();
        for (const PointReport &p : report.points)
            points.push_back({{"angle_deg", p.angle_deg},
                              {"dist_m", p.dist_m},
                              {"pl_dB", p.pl_db},
                              {"k_dB", p.k_db},
                              {"tau_rms_ns", p.tau_rms_ns},
                              {"b_c_MHz", p.b_c_mhz},
                              {"pdp_peak_dB", p.pdp_peak_db},
                              {"pdp_resolution_ns", p.pdp_resolution_ns},
                              {"pdp", p.pdp},
                              {"fit", decay_to_json(p.decay_fit)}});
        json j{{"seed", report.seed},
               {"config_hash", report.config_hash},
               {"ris_on", report.ris_on},
               {"points", points}};
        std::ofstream out(join_path(out_dir, "report.json"));
        if (!out)
            throw io_error("cannot write report.json in " + out_dir);
        out << j.dump(2) << "\n";
    }
    if (format == "csv" || format == "both") {
        std::ofstream out(join_path(out_dir, "report.csv"));
        if (!out)
            throw io_error("cannot write report.csv in " + out_dir);
        out << std::setprecision(17);
        out << "angle_deg,dist_m,pl_dB,k_dB,tau_rms_ns,b_c_MHz,pdp_peak_dB\n";
        for (const PointReport &p : report.points)
            out << p.angle_deg << "," << p.dist_m << "," << p.pl_db << "," << p.k_db << ","
                << p.tau_rms_ns << "," << p.b_c_mhz << "," << p.pdp_peak_db << "\n";
    }
}

Trajectory arc_trajectory(double radius_m, double speed_m_s, double theta_start_deg,
                          double theta_end_deg, double phi_deg, int passes)
{
    Trajectory traj;
    const double phi = deg2rad(phi_deg);
    const double omega = speed_m_s / radius_m; // rad/s along the arc
    double t = 0.0;
    double theta = theta_start_deg;
    int direction = theta_end_deg >= theta_start_deg ? 1 : -1;
    const double step_deg = 1.0;
    traj.waypoints.push_back({t, spherical_to_cartesian({deg2rad(theta), phi, radius_m})});
    for (int pass = 0; pass < passes; ++pass) {
        const double target = pass % 2 == 0 ? theta_end_deg : theta_start_deg;
        while (std::abs(theta - target) > 1e-9) {
            const double next =
                direction > 0 ? std::min(theta + step_deg, target) : std::max(theta - step_deg, target);
            t += deg2rad(std::abs(next - theta)) / omega;
            theta = next;
            traj.waypoints.push_back({t, spherical_to_cartesian({deg2rad(theta), phi, radius_m})});
        }
        direction = -direction;
    }
    return traj;
}

HardenReport cmd_harden(const Scenario &sc_in, const std::string &preset, bool tracking)
{
    Scenario sc = sc_in;
    double radius = 0.0, speed = 0.0;
    if (preset == "circle_2m") {
        radius = 2.0;
        speed = 0.1;
    } else if (preset == "circle_4m") {
        radius = 4.0;
        speed = 0.2;
    } else {
        throw config_error("cmd_harden: preset must be circle_2m or circle_4m");
    }
    sc.ue.trajectory = arc_trajectory(radius, speed, 10.0, 55.0, sc.sweep_plane_phi_deg, 2);
    // Circular motion around the surface has no radial Doppler, so the
    // zero-Doppler background gate would drop the target itself; clutter
    // rejection rides on the SNR threshold for this preset.
    sc.tracker.suppress_static = false;
    sc.validate();

    HardenReport report;
    report.seed = sc.seed;
    report.config_hash = config_hash(sc_in);
    report.preset = preset;
    report.tracking = tracking;

    auto rng = sub_rng(sc.seed, preset == "circle_2m" ? 21 : 41);
    const ClusterSet ris_clusters = generate_clusters(sc.gbsm, rng);
    const ClusterSet direct_clusters = generate_bs_ue_clusters(sc.gbsm, rng);

    // Steering bank and the tracked index timeline.
    const double lambda = sc.lambda0_m();
    const bool near_field = radius < fraunhofer_distance(sc.ris, lambda);
    const std::vector<Codebook> bank = build_steering_bank(sc, near_field, radius);
    std::vector<RisPattern> patterns;
    patterns.reserve(bank.size());
    for (const Codebook &cb : bank)
        patterns.push_back(cached_codebook_pattern(sc, cb));

    std::vector<LoopRecord> loop;
    if (tracking) {
        PointCloudSynth synth;
        synth.clutter_rate = 2.0;
        synth.room_min = sc.room_min_m;
        synth.room_max = sc.room_max_m;
        const auto frames = synth_point_cloud(sc.ue.trajectory, synth, rng);
        loop = run_tracking_loop(frames, sc.tracker, bank.size());
        for (const LoopRecord &rec : loop)
            if (rec.phase_update)
                ++report.phase_updates;
    }

    const double t_end = sc.ue.trajectory.end_time();
    const double dt = 0.25;
    const Spherical start = cartesian_to_spherical(sc.ue.trajectory.position(0.0));
    int applied_index = aoa_to_index(start.theta);

    std::size_t loop_pos = 0;
    for (double t = 0.0; t <= t_end; t += dt) {
        const Vec3 ue_pos = sc.ue.trajectory.position(t);
        const Vec3 ue_vel = sc.ue.trajectory.velocity(t);

        if (tracking) {
            while (loop_pos < loop.size() && loop[loop_pos].timestamp <= t) {
                if (loop[loop_pos].phase_update)
                    applied_index = *loop[loop_pos].state.confirmed_index;
                ++loop_pos;
            }
        }

        // Surface on, tracked codebook applied
        const double d1 = sc.bs.position.norm();
        const double d2 = ue_pos.norm();
        const double sigma = configured_rcs(sc.ris, reflection_geometry(sc.bs.position, ue_pos), lambda);
        const double fspl_db = lin2db(fspl_ris_gain(sc.link, lambda, sigma, d1, d2));
        const double pl_ris = ci_path_loss(sc.pathloss, lambda, d1, d2, fspl_db);
        const double pl_dir = ci_path_loss_single(sc.direct.gamma, sc.pathloss.d0_m, lambda,
                                                  (ue_pos - sc.bs.position).norm(),
                                                  sc.direct.blockage_db);

        const GbsmScene scene = make_scene(sc, ue_pos, ue_vel, {t});
        const Cir leg_bs =
            bs_ris_cir(scene, scene.bs_pattern, AntennaPattern::isotropic(), true);
        const Cir leg_ue = scale_cir(
            ris_ue_cir(scene, patterns[applied_index], ris_clusters, sc.gbsm.k_factor_db, true),
            std::pow(10.0, -pl_ris / 20.0));
        const Cir direct =
            scale_cir(bs_ue_cir(scene, direct_clusters, true), std::pow(10.0, -pl_dir / 20.0));
        const Cir on_cir = cascade_cir(leg_bs, leg_ue, direct);

        const double snr_base = db2lin(sc.link.p_tx_dbm) / sc.link.noise_var;
        const double cap_on = mimo_capacity(on_cir.narrowband(t), snr_base);
        const double cap_off = mimo_capacity(direct.narrowband(t), snr_base);

        report.series.t_s.push_back(t);
        report.series.mbps_on.push_back(
            capacity_mbps(cap_on, sc.throughput_bandwidth_hz, sc.max_throughput_mbps));
        report.series.mbps_off.push_back(
            capacity_mbps(cap_off, sc.throughput_bandwidth_hz, sc.max_throughput_mbps));
    }

    report.mean_on_mbps = mean_of(report.series.mbps_on);
    report.std_on_mbps = std_of(report.series.mbps_on);
    report.mean_off_mbps = mean_of(report.series.mbps_off);
    report.std_off_mbps = std_of(report.series.mbps_off);
    report.mean_improvement = report.mean_on_mbps / report.mean_off_mbps - 1.0;
    report.std_reduction = 1.0 - report.std_on_mbps / report.std_off_mbps;

    std::vector<double> sorted = report.series.mbps_on;
    std::sort(sorted.begin(), sorted.end());
    for (int d = 1; d <= 9; ++d)
        report.cdf_percentiles.push_back(
            sorted[static_cast<std::size_t>(d * (sorted.size() - 1) / 10)]);
    return report;
}

void write_harden_report(const HardenReport &report, const std::string &out_dir)
{
    ensure_dir(out_dir);
    {
        std::ofstream out(join_path(out_dir, "throughput_series.csv"));
        if (!out)
            throw io_error("cannot write throughput_series.csv in " + out_dir);
        out << std::setprecision(17);
        out << "t_s,throughput_on_mbps,throughput_off_mbps\n";
        for (std::size_t i = 0; i < report.series.t_s.size(); ++i)
            out << report.series.t_s[i] << "," << report.series.mbps_on[i] << ","
                << report.series.mbps_off[i] << "\n";
    }
    json j{{"seed", report.seed},
           {"config_hash", report.config_hash},
           {"preset", report.preset},
           {"tracking", report.tracking},
           {"mean_on_mbps", report.mean_on_mbps},
           {"std_on_mbps", report.std_on_mbps},
           {"mean_off_mbps", report.mean_off_mbps},
           {"std_off_mbps", report.std_off_mbps},
           {"mean_improvement", report.mean_improvement},
           {"std_reduction", report.std_reduction},
           {"cdf_deciles_mbps", report.cdf_percentiles},
           {"phase_updates", report.phase_updates}};
    std::ofstream out(join_path(out_dir, "harden_summary.json"));
    if (!out)
        throw io_error("cannot write harden_summary.json in " + out_dir);
    out << j.dump(2) << "\n";
}

std::vector<CrlbSample> cmd_crlb(const Scenario &sc, const CrlbGrid &grid)
{
    sc.validate();
    if (grid.nx < 1 || grid.ny < 1)
        throw config_error("cmd_crlb: grid counts must be >= 1");
    std::vector<CrlbSample> rows;
    int singular = 0;
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
            CrlbSample s;
            s.x_m = grid.nx == 1 ? grid.x_min
                                 : grid.x_min + (grid.x_max - grid.x_min) * ix / (grid.nx - 1);
            s.y_m = grid.ny == 1 ? grid.y_min
                                 : grid.y_min + (grid.y_max - grid.y_min) * iy / (grid.ny - 1);
            RadarTarget target;
            target.x_m = s.x_m;
            target.y_m = s.y_m;
            try {
                s.crlb_m2 = crlb(sc.radar, target);
            } catch (const numerical_error &) {
                s.crlb_m2 = std::numeric_limits<double>::infinity();
                ++singular;
            } catch (const geometry_error &) {
                s.crlb_m2 = std::numeric_limits<double>::infinity();
                ++singular;
            }
            rows.push_back(s);
        }
    if (singular > 0)
        std::cerr << "cmd_crlb: " << singular << " singular-geometry points marked inf\n";
    return rows;
}

TrackOutputs cmd_track(const Scenario &sc, const std::optional<std::string> &frames_path)
{
    sc.validate();
    TrackOutputs out;
    if (frames_path) {
        out.frames = read_frames_jsonl(*frames_path);
    } else {
        if (sc.ue.trajectory.waypoints.size() < 2)
            throw config_error("cmd_track: scenario has no trajectory and no frames file given");
        auto rng = sub_rng(sc.seed, 77);
        PointCloudSynth synth;
        synth.clutter_rate = 2.0;
        synth.room_min = sc.room_min_m;
        synth.room_max = sc.room_max_m;
        out.frames = synth_point_cloud(sc.ue.trajectory, synth, rng);
    }
    const auto records = run_tracking_loop(out.frames, sc.tracker, 12);
    for (const LoopRecord &rec : records) {
        TrackRecordRow row;
        row.t_s = rec.timestamp;
        row.theta_deg = rad2deg(rec.state.theta.value());
        row.phi_deg = rad2deg(rec.state.phi.value());
        row.r_m = rec.state.range.value();
        row.index = rec.index;
        row.updated = rec.phase_update;
        out.rows.push_back(row);
    }
    return out;
}

std::string cmd_fit(const std::string &what, const std::string &input_path,
                    bool estimate_intercept, double lambda_m)
{
    json j;
    if (what == "ple") {
        auto in = std::ifstream(input_path);
        if (!in)
            throw io_error("cannot open " + input_path);
        std::string line;
        if (!std::getline(in, line))
            throw io_error("empty file: " + input_path);
        std::vector<PlePoint> points;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            std::stringstream ss(line);
            std::string field;
            std::vector<double> row;
            while (std::getline(ss, field, ','))
                row.push_back(std::stod(field));
            if (row.size() != 3)
                throw io_error("ple rows need d1_m,d2_m,pl_db in " + input_path);
            points.push_back({row[0], row[1], row[2]});
        }
        const PleFit fit = fit_ci_ple(points, lambda_m, 1.0, estimate_intercept);
        j = {{"what", "ple"},
             {"gamma1", fit.gamma1_identified ? json(fit.gamma1) : json(nullptr)},
             {"gamma2", fit.gamma2_identified ? json(fit.gamma2) : json(nullptr)},
             {"intercept_db", fit.intercept_db},
             {"sigma_sf_db", fit.sigma_sf_db}};
    } else if (what == "kfactor") {
        const auto samples = read_samples_csv(input_path);
        const KFactorEstimate est = estimate_k_factor(samples);
        j = {{"what", "kfactor"}, {"k_db", est.k_db}, {"capped", est.capped}};
    } else if (what == "decay") {
        auto in = std::ifstream(input_path);
        if (!in)
            throw io_error("cannot open " + input_path);
        std::string line;
        if (!std::getline(in, line))
            throw io_error("empty file: " + input_path);
        std::vector<double> delay_ns, power;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            std::stringstream ss(line);
            std::string field;
            std::vector<double> row;
            while (std::getline(ss, field, ','))
                row.push_back(std::stod(field));
            if (row.size() != 2)
                throw io_error("decay rows need delay_ns,power in " + input_path);
            delay_ns.push_back(row[0]);
            power.push_back(row[1]);
        }
        if (delay_ns.size() < 2)
            throw io_error("decay fit needs at least 2 rows in " + input_path);
        Pdp pdp;
        pdp.resolution_s = (delay_ns[1] - delay_ns[0]) * 1e-9;
        pdp.power.assign(delay_ns.size(), 0.0);
        for (std::size_t i = 0; i < delay_ns.size(); ++i)
            pdp.power[i] = power[i];
        const ClusterDecayFit fit = fit_cluster_decay(pdp);
        j = {{"what", "decay"}, {"a", fit.a}, {"b_per_ns", fit.b}, {"c", fit.c}};
    } else if (what == "distribution") {
        const auto samples = read_samples_csv(input_path);
        const auto fits = rank_fading_distributions(samples);
        json ranked = json::array();
        for (const DistributionFit &f : fits) {
            const char *name = f.family == FadingFamily::rayleigh
                                   ? "rayleigh"
                                   : f.family == FadingFamily::weibull ? "weibull" : "lognormal";
            ranked.push_back({{"family", name},
                              {"params", f.params},
                              {"log_likelihood", f.log_likelihood},
                              {"ks_stat", f.ks_stat}});
        }
        j = {{"what", "distribution"}, {"ranking", ranked}};
    } else {
        throw config_error("cmd_fit: what must be ple | kfactor | decay | distribution");
    }
    return j.dump(2);
}

} // namespace risim
