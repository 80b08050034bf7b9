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

#include "risim/gbsm_types.hpp"
#include "risim/geometry.hpp"
#include "risim/ris.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace risim {

// Stochastic cluster ensemble configuration. Angles ride on internal draw
// conventions: cluster departure zeniths are uniform over the front
// half-space sector [15 deg, 75 deg], arrival zeniths over [60 deg, 120 deg],
// azimuths over the full circle; rays scatter around the cluster mean with
// Laplacian offsets of scale `ray_angle_spread_rad`.
struct GbsmConfig {
    double k_factor_db = 8.0;        // Rician K of the reflected leg
    double delay_spread_s = 15e-9;   // DS scale of the cluster delays
    double omega_tau = 2.3;          // decay rate, > 1
    double zeta_db = 3.0;            // per-cluster shadowing std
    int clusters = 8;                // Q, reflected leg
    int rays_per_cluster = 17;       // I_q
    int bs_ue_clusters = 10;         // O, direct leg
    int bs_ue_rays = 6;              // W_o
    double xpr_mu_db = 10.0;
    double xpr_sigma_db = 4.0;
    double ray_angle_spread_rad = deg2rad(8.0);
    double intra_cluster_delay_spread_s = 0.0; // 0 = single intra-cluster delay
    bool dual_polarized = false;
    std::uint64_t seed = 1;

    void validate() const;
};

struct ClusterRay {
    double zoa = 0.0, aoa = 0.0; // arrival angles at the terminal
    double zod = 0.0, aod = 0.0; // departure angles at the surface / BS
    std::array<double, 4> initial_phases{}; // thth, thph, phth, phph
    double xpr_linear = 1.0;
    Vec3 arrival_dir{}; // unit vector of arrival, drives the Doppler ramp
};

struct Cluster {
    double delay_s = 0.0;   // excess delay, earliest cluster at 0
    double power = 0.0;     // normalized, sum over clusters = 1
    double shadow_db = 0.0; // per-cluster shadowing draw
    std::vector<ClusterRay> rays;
    std::vector<double> ray_delays_s; // intra-cluster excess per ray
};

struct ClusterSet {
    std::vector<Cluster> clusters;

    double power_sum() const;
};

// Antenna field pattern evaluated by arrival/departure direction.
struct AntennaPattern {
    enum class Kind { isotropic, horn, file };
    Kind kind = Kind::isotropic;
    double gain_dbi = 0.0;     // horn peak gain; added on top of file samples
    Vec3 boresight{0, 0, 1};
    std::vector<PatternSample> samples; // file kind, normalized power in dB

    static AntennaPattern isotropic();
    static AntennaPattern horn(double gain_dbi, const Vec3 &boresight);
    // |F| toward a (world frame) direction vector.
    double amplitude(const Vec3 &direction) const;
};

// Direction-dependent amplitude response of the configured surface, either a
// unit placeholder, the Green's-function sum of a codebook, or a measured
// pattern loaded from file. Gains are normalized to [0, 1].
struct RisPattern {
    enum class Kind { unit, aperture, file };
    Kind kind = Kind::unit;
    RisSpec spec{};
    Codebook codebook{};
    Vec3 source{};           // illuminator position, surface local frame
    double lambda_m = 0.0;
    double eval_radius_m = 10.0; // radius used when only a direction is known
    std::vector<PatternSample> samples;

    // Regular-grid direction cache; when present, amplitude_toward() reads it
    // instead of summing the aperture per call.
    int cache_n_theta = 0;
    int cache_n_phi = 0;
    double cache_dtheta = 0.0;
    double cache_dphi = 0.0;
    std::vector<double> cache_amplitude;

    static RisPattern unit_pattern();
    static RisPattern from_codebook(const RisSpec &spec, const Codebook &cb, const Vec3 &source,
                                    double lambda_m, double eval_radius_m = 10.0);
    static RisPattern from_samples(std::vector<PatternSample> samples);

    // Precompute amplitudes over theta in [0, theta_max] x phi in [0, 2*pi).
    void build_direction_cache(double theta_max, int n_theta, int n_phi);

    double amplitude_toward(double theta, double phi) const;
    double amplitude_at(const Vec3 &point) const;
};

// Everything the CIR synthesis needs about the deployment. Positions are in
// the surface local frame (boresight +z); the surface sits at the origin.
struct GbsmScene {
    Vec3 bs_position{0, 0, 5};
    Vec3 ue_position{0, 1.2856, 1.5321};
    Vec3 ue_velocity{};
    double lambda0_m = speed_of_light / 3.5e9;
    ArrayLayout bs_array = ArrayLayout::single();
    ArrayLayout ue_array = ArrayLayout::single();
    AntennaPattern bs_pattern = AntennaPattern::isotropic();
    AntennaPattern ue_pattern = AntennaPattern::isotropic();
    std::vector<double> time_grid_s = {0.0};
};

// Cluster/ray ensemble for the surface-to-terminal leg (Q x I_q). Delays are
// exponential with scale omega_tau * DS, sorted, offset to zero, and scaled by
// the K-factor-dependent compression so the composite spread tracks DS;
// powers are computed from the unscaled delays and normalized to unit sum.
ClusterSet generate_clusters(const GbsmConfig &cfg, std::mt19937_64 &rng);

// Cluster ensemble for the direct BS-to-terminal leg (O x W_o), no dominant
// component, no delay compression.
ClusterSet generate_bs_ue_clusters(const GbsmConfig &cfg, std::mt19937_64 &rng);

// Static single-tap LoS leg between the BS and the surface.
Cir bs_ris_cir(const GbsmScene &scene, const AntennaPattern &bs_pattern,
               const AntennaPattern &ris_rx_pattern, bool dual_polarized = false,
               int bs_antenna = 0);

// Rician leg from the surface to the terminal: dominant reflected component
// weighted by K/(K+1) plus Q x I_q diffuse rays weighted by 1/(K+1), each with
// per-ray polarization phases, XPR, and Doppler from the terminal motion.
Cir ris_ue_cir(const GbsmScene &scene, const RisPattern &ris_pattern, const ClusterSet &clusters,
               double k_factor_db, bool dual_polarized = false, int ue_antenna = 0);

// Pure diffuse direct leg (no dominant component), O x W_o rays.
Cir bs_ue_cir(const GbsmScene &scene, const ClusterSet &clusters_bs_ue,
              bool dual_polarized = false, int bs_antenna = 0, int ue_antenna = 0);

// Delay-domain convolution of the two reflected-leg CIRs (delays add, 2x2
// gains compose) followed by a tap-wise union with the direct leg.
Cir cascade_cir(const Cir &bs_ris, const Cir &ris_ue, const Cir &bs_ue);

} // namespace risim
