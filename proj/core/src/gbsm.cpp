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

#include "risim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace risim {

namespace {

constexpr std::complex<double> jimag{0.0, 1.0};

// Delay compression factor compensating the dominant-component contribution
// to the composite delay spread (TR 38.901 style cubic in K, dB). Outside the
// fitted range the factor is held at the boundary value.
double delay_scaling_factor(double k_db)
{
    const double k = std::clamp(k_db, 0.0, 25.0);
    return 0.7705 - 0.0433 * k + 0.0002 * k * k + 0.000017 * k * k * k;
}

double uniform(std::mt19937_64 &rng, double lo, double hi)
{
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

double laplace(std::mt19937_64 &rng, double scale)
{
    if (scale <= 0.0)
        return 0.0;
    const double u = uniform(rng, -0.5, 0.5);
    return u < 0.0 ? scale * std::log(1.0 + 2.0 * u) : -scale * std::log(1.0 - 2.0 * u);
}

// Draw order per cluster: mean angles, then per-ray offsets, XPR, phases,
// intra-cluster delay. Fixed order keeps seeded runs bit-identical.
void fill_rays(Cluster &c, const GbsmConfig &cfg, int n_rays, std::mt19937_64 &rng,
               double dep_zen_lo, double dep_zen_hi)
{
    std::normal_distribution<double> xpr_draw(cfg.xpr_mu_db, cfg.xpr_sigma_db);
    const double zoa_c = uniform(rng, deg2rad(60.0), deg2rad(120.0));
    const double aoa_c = uniform(rng, 0.0, 2.0 * pi);
    const double zod_c = uniform(rng, dep_zen_lo, dep_zen_hi);
    const double aod_c = uniform(rng, 0.0, 2.0 * pi);
    c.rays.resize(n_rays);
    c.ray_delays_s.resize(n_rays, 0.0);
    for (int i = 0; i < n_rays; ++i) {
        ClusterRay &r = c.rays[i];
        r.zoa = std::clamp(zoa_c + laplace(rng, cfg.ray_angle_spread_rad), 1e-3, pi - 1e-3);
        r.aoa = wrap_2pi(aoa_c + laplace(rng, cfg.ray_angle_spread_rad));
        r.zod = std::clamp(zod_c + laplace(rng, cfg.ray_angle_spread_rad), 1e-3, pi / 2.0 - 1e-3);
        r.aod = wrap_2pi(aod_c + laplace(rng, cfg.ray_angle_spread_rad));
        r.xpr_linear = db2lin(xpr_draw(rng));
        for (double &p : r.initial_phases)
            p = uniform(rng, 0.0, 2.0 * pi);
        r.arrival_dir = spherical_to_cartesian({r.zoa, r.aoa, 1.0});
        if (cfg.intra_cluster_delay_spread_s > 0.0)
            c.ray_delays_s[i] = uniform(rng, 0.0, cfg.intra_cluster_delay_spread_s);
    }
}

ClusterSet generate_set(const GbsmConfig &cfg, int n_clusters, int n_rays, bool compress_delays,
                        std::mt19937_64 &rng)
{
    cfg.validate();

    std::vector<double> raw(n_clusters);
    for (double &t : raw) {
        const double u = uniform(rng, std::numeric_limits<double>::min(), 1.0);
        t = -cfg.omega_tau * cfg.delay_spread_s * std::log(u);
    }
    std::sort(raw.begin(), raw.end());
    const double t0 = raw.front();
    for (double &t : raw)
        t -= t0;

    ClusterSet set;
    set.clusters.resize(n_clusters);
    std::normal_distribution<double> shadow(0.0, cfg.zeta_db);
    double total = 0.0;
    for (int q = 0; q < n_clusters; ++q) {
        Cluster &c = set.clusters[q];
        c.shadow_db = cfg.zeta_db > 0.0 ? shadow(rng) : 0.0;
        c.power = std::exp(-raw[q] * (cfg.omega_tau - 1.0) /
                           (cfg.omega_tau * cfg.delay_spread_s)) *
                  std::pow(10.0, -c.shadow_db / 10.0);
        total += c.power;
    }
    const double scale = compress_delays ? delay_scaling_factor(cfg.k_factor_db) : 1.0;
    for (int q = 0; q < n_clusters; ++q) {
        set.clusters[q].power /= total;
        set.clusters[q].delay_s = raw[q] / scale;
        fill_rays(set.clusters[q], cfg, n_rays, rng, deg2rad(15.0), deg2rad(75.0));
    }
    return set;
}

// Field vector of a scalar pattern amplitude, optionally split between both
// polarizations so the total pattern power stays put.
Eigen::Vector2cd field_vector(double amplitude, bool dual_polarized)
{
    if (dual_polarized) {
        const double a = amplitude / std::sqrt(2.0);
        return {a, a};
    }
    return {amplitude, 0.0};
}

Mat2c pol_sandwich(const Eigen::Vector2cd &rx, const Mat2c &mid, const Eigen::Vector2cd &tx)
{
    return rx.asDiagonal() * mid * tx.asDiagonal();
}

Mat2c los_flip()
{
    Mat2c m = Mat2c::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

Mat2c ray_polarization(const ClusterRay &r)
{
    const double cross = std::sqrt(1.0 / r.xpr_linear);
    Mat2c m;
    m(0, 0) = std::polar(1.0, r.initial_phases[0]);
    m(0, 1) = cross * std::polar(1.0, r.initial_phases[1]);
    m(1, 0) = cross * std::polar(1.0, r.initial_phases[2]);
    m(1, 1) = std::polar(1.0, r.initial_phases[3]);
    return m;
}

} // namespace

void GbsmConfig::validate() const
{
    if (clusters < 1 || rays_per_cluster < 1 || bs_ue_clusters < 1 || bs_ue_rays < 1)
        throw std::invalid_argument("gbsm config: cluster and ray counts must be >= 1");
    if (!(delay_spread_s > 0.0))
        throw std::invalid_argument("gbsm config: delay spread must be positive");
    if (!(omega_tau > 1.0))
        throw std::invalid_argument("gbsm config: decay rate must exceed 1");
    if (!(zeta_db >= 0.0) || !(xpr_sigma_db >= 0.0))
        throw std::invalid_argument("gbsm config: std parameters must be >= 0");
}

double ClusterSet::power_sum() const
{
    double s = 0.0;
    for (const Cluster &c : clusters)
        s += c.power;
    return s;
}

std::vector<std::pair<double, Mat2c>> Cir::amplitudes_at(double t) const
{
    std::vector<const CirTap *> order;
    order.reserve(taps.size());
    for (const CirTap &tap : taps)
        order.push_back(&tap);
    // stable: ties must merge in tap order for bit-reproducible sums
    std::stable_sort(order.begin(), order.end(),
                     [](const CirTap *a, const CirTap *b) { return a->delay_s < b->delay_s; });

    std::vector<std::pair<double, Mat2c>> out;
    for (const CirTap *tap : order) {
        const Mat2c amp = tap->gain * std::polar(1.0, tap->doppler_rad_s * t);
        if (!out.empty() && std::abs(out.back().first - tap->delay_s) < 1e-15)
            out.back().second += amp;
        else
            out.emplace_back(tap->delay_s, amp);
    }
    return out;
}

Mat2c Cir::narrowband(double t) const
{
    Mat2c h = Mat2c::Zero();
    for (const CirTap &tap : taps)
        h += tap.gain * std::polar(1.0, tap.doppler_rad_s * t);
    return h;
}

double Cir::tap_power_sum() const
{
    double s = 0.0;
    for (const CirTap &tap : taps)
        s += tap.gain.squaredNorm();
    return s;
}

Cir scale_cir(const Cir &cir, double amplitude)
{
    Cir out = cir;
    for (CirTap &tap : out.taps)
        tap.gain *= amplitude;
    return out;
}

AntennaPattern AntennaPattern::isotropic() { return AntennaPattern{}; }

AntennaPattern AntennaPattern::horn(double gain_dbi, const Vec3 &boresight)
{
    AntennaPattern p;
    p.kind = Kind::horn;
    p.gain_dbi = gain_dbi;
    p.boresight = boresight / boresight.norm();
    return p;
}

double AntennaPattern::amplitude(const Vec3 &direction) const
{
    const double n = direction.norm();
    if (n <= 0.0)
        throw degenerate_input("antenna pattern: zero direction");
    switch (kind) {
    case Kind::isotropic:
        return 1.0;
    case Kind::horn: {
        const double g = db2lin(gain_dbi);
        const double ca = std::clamp(direction.dot(boresight) / n, -1.0, 1.0);
        if (ca <= 0.0)
            return 0.0;
        // cos^q model, directivity 2(2q+1) pinned to the declared gain
        const double q = std::max(0.0, (g / 2.0 - 1.0) / 2.0);
        return std::sqrt(g) * std::pow(ca, q);
    }
    case Kind::file: {
        if (samples.empty())
            throw config_error("antenna pattern: no file samples loaded");
        const Spherical want = cartesian_to_spherical(direction);
        double best = std::numeric_limits<double>::max();
        double best_db = -300.0;
        for (const PatternSample &s : samples) {
            const Vec3 u = spherical_to_cartesian({s.direction.theta, s.direction.phi, 1.0});
            const Vec3 w = spherical_to_cartesian({want.theta, want.phi, 1.0});
            const double dist = (u - w).norm();
            if (dist < best) {
                best = dist;
                best_db = s.power_db;
            }
        }
        return std::sqrt(db2lin(best_db + gain_dbi));
    }
    }
    return 1.0;
}

RisPattern RisPattern::unit_pattern() { return RisPattern{}; }

RisPattern RisPattern::from_codebook(const RisSpec &spec, const Codebook &cb, const Vec3 &source,
                                     double lambda_m, double eval_radius_m)
{
    if (cb.phases.empty())
        throw config_error("ris pattern: codebook is empty");
    if (cb.rows != spec.rows || cb.cols != spec.cols)
        throw config_error("ris pattern: codebook shape does not match the surface");
    RisPattern p;
    p.kind = Kind::aperture;
    p.spec = spec;
    p.codebook = cb;
    p.source = source;
    p.lambda_m = lambda_m;
    p.eval_radius_m = eval_radius_m;
    return p;
}

RisPattern RisPattern::from_samples(std::vector<PatternSample> samples)
{
    if (samples.empty())
        throw config_error("ris pattern: no samples");
    RisPattern p;
    p.kind = Kind::file;
    p.samples = std::move(samples);
    return p;
}

void RisPattern::build_direction_cache(double theta_max, int n_theta, int n_phi)
{
    if (kind != Kind::aperture)
        throw config_error("ris pattern: direction cache needs an aperture pattern");
    cache_n_theta = n_theta;
    cache_n_phi = n_phi;
    cache_dtheta = theta_max / (n_theta - 1);
    cache_dphi = 2.0 * pi / n_phi;
    cache_amplitude.assign(static_cast<std::size_t>(n_theta) * n_phi, 0.0);
    for (int it = 0; it < n_theta; ++it)
        for (int ip = 0; ip < n_phi; ++ip) {
            const double theta = std::max(1e-6, it * cache_dtheta);
            const double phi = ip * cache_dphi;
            cache_amplitude[static_cast<std::size_t>(it) * n_phi + ip] =
                amplitude_at(spherical_to_cartesian({theta, phi, eval_radius_m}));
        }
}

double RisPattern::amplitude_toward(double theta, double phi) const
{
    if (!cache_amplitude.empty()) {
        const int it = std::clamp(static_cast<int>(std::lround(theta / cache_dtheta)), 0,
                                  cache_n_theta - 1);
        const int ip =
            static_cast<int>(std::lround(wrap_2pi(phi) / cache_dphi)) % cache_n_phi;
        return cache_amplitude[static_cast<std::size_t>(it) * cache_n_phi + ip];
    }
    switch (kind) {
    case Kind::unit:
        return 1.0;
    case Kind::aperture:
        return amplitude_at(spherical_to_cartesian({theta, phi, eval_radius_m}));
    case Kind::file: {
        const Vec3 w = spherical_to_cartesian({theta, phi, 1.0});
        double best = std::numeric_limits<double>::max();
        double best_db = -300.0;
        for (const PatternSample &s : samples) {
            const Vec3 u = spherical_to_cartesian({s.direction.theta, s.direction.phi, 1.0});
            const double dist = (u - w).norm();
            if (dist < best) {
                best = dist;
                best_db = s.power_db;
            }
        }
        return std::sqrt(db2lin(std::min(best_db, 0.0)));
    }
    }
    return 1.0;
}

double RisPattern::amplitude_at(const Vec3 &point) const
{
    if (kind == Kind::aperture)
        return ris_amplitude_gain(spec, codebook, source, point, lambda_m);
    const Spherical s = cartesian_to_spherical(point);
    return amplitude_toward(s.theta, s.phi);
}

ClusterSet generate_clusters(const GbsmConfig &cfg, std::mt19937_64 &rng)
{
    return generate_set(cfg, cfg.clusters, cfg.rays_per_cluster, true, rng);
}

ClusterSet generate_bs_ue_clusters(const GbsmConfig &cfg, std::mt19937_64 &rng)
{
    return generate_set(cfg, cfg.bs_ue_clusters, cfg.bs_ue_rays, false, rng);
}

Cir bs_ris_cir(const GbsmScene &scene, const AntennaPattern &bs_pattern,
               const AntennaPattern &ris_rx_pattern, bool dual_polarized, int bs_antenna)
{
    if (bs_antenna < 0 || static_cast<std::size_t>(bs_antenna) >= scene.bs_array.count())
        throw std::invalid_argument("bs_ris_cir: antenna index out of range");

    const double d = scene.bs_position.norm();
    if (d <= 0.0)
        throw geometry_error("bs_ris_cir: BS coincides with the surface");
    const Vec3 dep_dir = unit_direction(scene.bs_position, Vec3{}); // BS toward surface
    const Vec3 arr_dir = dep_dir * -1.0;                            // surface toward BS

    const auto f_bs = field_vector(bs_pattern.amplitude(dep_dir), dual_polarized);
    const auto f_ris = field_vector(ris_rx_pattern.amplitude(arr_dir), dual_polarized);

    const Vec3 r_s = scene.bs_array.element_positions[bs_antenna];
    const double carrier_phase = -2.0 * pi * d / scene.lambda0_m;
    const double array_phase = 2.0 * pi * dep_dir.dot(r_s) / scene.lambda0_m;

    CirTap tap;
    tap.delay_s = d / speed_of_light;
    tap.gain = pol_sandwich(f_ris, los_flip(), f_bs) * std::polar(1.0, carrier_phase + array_phase);
    tap.doppler_rad_s = 0.0;

    if (tap.gain.squaredNorm() < 1e-30)
        std::cerr << "bs_ris_cir: warning: surface sits in a pattern null, zero-gain tap\n";

    Cir cir;
    cir.lambda0_m = scene.lambda0_m;
    cir.time_grid_s = scene.time_grid_s;
    cir.taps.push_back(tap);
    return cir;
}

Cir ris_ue_cir(const GbsmScene &scene, const RisPattern &ris_pattern, const ClusterSet &clusters,
               double k_factor_db, bool dual_polarized, int ue_antenna)
{
    if (ue_antenna < 0 || static_cast<std::size_t>(ue_antenna) >= scene.ue_array.count())
        throw std::invalid_argument("ris_ue_cir: antenna index out of range");
    if (clusters.clusters.empty())
        throw std::invalid_argument("ris_ue_cir: empty cluster set");

    const double d2 = scene.ue_position.norm();
    if (d2 <= 0.0)
        throw geometry_error("ris_ue_cir: terminal coincides with the surface");
    const double k_lin = db2lin(k_factor_db);
    const double los_w = std::sqrt(k_lin / (k_lin + 1.0));
    const double nlos_w = std::sqrt(1.0 / (k_lin + 1.0));
    const double tau_base = d2 / speed_of_light;
    const Vec3 r_u = scene.ue_array.element_positions[ue_antenna];

    Cir cir;
    cir.lambda0_m = scene.lambda0_m;
    cir.time_grid_s = scene.time_grid_s;

    // Dominant reflected component
    {
        const Vec3 arr_dir = unit_direction(scene.ue_position, Vec3{}); // UE toward surface
        const auto f_ue = field_vector(scene.ue_pattern.amplitude(arr_dir), dual_polarized);
        const auto f_ris =
            field_vector(ris_pattern.amplitude_at(scene.ue_position), dual_polarized);
        const double carrier_phase = -2.0 * pi * d2 / scene.lambda0_m;
        const double array_phase = 2.0 * pi * arr_dir.dot(r_u) / scene.lambda0_m;

        CirTap tap;
        tap.delay_s = tau_base;
        tap.gain = los_w * pol_sandwich(f_ue, los_flip(), f_ris) *
                   std::polar(1.0, carrier_phase + array_phase);
        tap.doppler_rad_s = 2.0 * pi * arr_dir.dot(scene.ue_velocity) / scene.lambda0_m;
        cir.taps.push_back(tap);
    }

    for (const Cluster &c : clusters.clusters) {
        const double ray_w = nlos_w * std::sqrt(c.power / c.rays.size());
        for (std::size_t i = 0; i < c.rays.size(); ++i) {
            const ClusterRay &r = c.rays[i];
            const auto f_ue =
                field_vector(scene.ue_pattern.amplitude(r.arrival_dir), dual_polarized);
            const auto f_ris =
                field_vector(ris_pattern.amplitude_toward(r.zod, r.aod), dual_polarized);
            const double array_phase = 2.0 * pi * r.arrival_dir.dot(r_u) / scene.lambda0_m;

            CirTap tap;
            tap.delay_s = tau_base + c.delay_s + c.ray_delays_s[i];
            tap.gain = ray_w * pol_sandwich(f_ue, ray_polarization(r), f_ris) *
                       std::polar(1.0, array_phase);
            tap.doppler_rad_s = 2.0 * pi * r.arrival_dir.dot(scene.ue_velocity) / scene.lambda0_m;
            cir.taps.push_back(tap);
        }
    }
    return cir;
}

Cir bs_ue_cir(const GbsmScene &scene, const ClusterSet &clusters_bs_ue, bool dual_polarized,
              int bs_antenna, int ue_antenna)
{
    if (bs_antenna < 0 || static_cast<std::size_t>(bs_antenna) >= scene.bs_array.count() ||
        ue_antenna < 0 || static_cast<std::size_t>(ue_antenna) >= scene.ue_array.count())
        throw std::invalid_argument("bs_ue_cir: antenna index out of range");
    if (clusters_bs_ue.clusters.empty())
        throw std::invalid_argument("bs_ue_cir: empty cluster set");

    const double d = (scene.ue_position - scene.bs_position).norm();
    const double tau_base = d / speed_of_light;
    const Vec3 r_s = scene.bs_array.element_positions[bs_antenna];
    const Vec3 r_u = scene.ue_array.element_positions[ue_antenna];

    Cir cir;
    cir.lambda0_m = scene.lambda0_m;
    cir.time_grid_s = scene.time_grid_s;

    for (const Cluster &c : clusters_bs_ue.clusters) {
        const double ray_w = std::sqrt(c.power / c.rays.size());
        for (std::size_t i = 0; i < c.rays.size(); ++i) {
            const ClusterRay &r = c.rays[i];
            const Vec3 dep_dir = spherical_to_cartesian({r.zod, r.aod, 1.0});
            const auto f_ue =
                field_vector(scene.ue_pattern.amplitude(r.arrival_dir), dual_polarized);
            const auto f_bs = field_vector(scene.bs_pattern.amplitude(dep_dir), dual_polarized);
            const double array_phase = 2.0 * pi *
                                       (r.arrival_dir.dot(r_u) + dep_dir.dot(r_s)) /
                                       scene.lambda0_m;

            CirTap tap;
            tap.delay_s = tau_base + c.delay_s + c.ray_delays_s[i];
            tap.gain = ray_w * pol_sandwich(f_ue, ray_polarization(r), f_bs) *
                       std::polar(1.0, array_phase);
            tap.doppler_rad_s = 2.0 * pi * r.arrival_dir.dot(scene.ue_velocity) / scene.lambda0_m;
            cir.taps.push_back(tap);
        }
    }
    return cir;
}

Cir cascade_cir(const Cir &bs_ris, const Cir &ris_ue, const Cir &bs_ue)
{
    if (std::abs(bs_ris.lambda0_m - ris_ue.lambda0_m) > 1e-12 ||
        (!bs_ue.empty() && std::abs(bs_ue.lambda0_m - ris_ue.lambda0_m) > 1e-12))
        throw config_error("cascade_cir: carrier wavelengths of the legs differ");

    Cir out;
    out.lambda0_m = ris_ue.lambda0_m;
    out.time_grid_s = ris_ue.time_grid_s;
    out.taps.reserve(bs_ris.taps.size() * ris_ue.taps.size() + bs_ue.taps.size());

    for (const CirTap &a : bs_ris.taps)
        for (const CirTap &b : ris_ue.taps) {
            CirTap tap;
            tap.delay_s = a.delay_s + b.delay_s;
            tap.gain = b.gain * a.gain;
            tap.doppler_rad_s = a.doppler_rad_s + b.doppler_rad_s;
            out.taps.push_back(tap);
        }
    for (const CirTap &tap : bs_ue.taps)
        out.taps.push_back(tap);

    std::stable_sort(out.taps.begin(), out.taps.end(),
                     [](const CirTap &a, const CirTap &b) { return a.delay_s < b.delay_s; });
    return out;
}

} // namespace risim
