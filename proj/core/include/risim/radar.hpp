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

#include <complex>
#include <random>
#include <vector>

namespace risim {

// Colocated MIMO radar with real-valued precoding. The transmitted element
// signals are x = precoder * s.
struct RadarConfig {
    std::vector<Vec3> tx_positions;
    std::vector<Vec3> rx_positions;
    double lambda_m = 0.005; // 60 GHz default
    Eigen::MatrixXd precoder; // M_A x p
    Eigen::VectorXd s;        // p
    double noise_sigma2 = 1e-18;
    // Include the amplitude (1/d) derivatives in the Fisher information in
    // addition to the dominant phase derivatives.
    bool fim_include_amplitude = false;

    void validate() const;
    Eigen::VectorXd element_signals() const; // x = precoder * s
    Vec3 tx_phase_center() const;
    Vec3 rx_phase_center() const;

    // Uniform illumination defaults: identity precoder, all-ones signal.
    static RadarConfig default_array(double lambda_m = 0.005);
};

struct RadarTarget {
    double x_m = 0.0;
    double y_m = 2.0;
    std::complex<double> rho = 1.0; // scattering coefficient

    Vec3 position() const { return {x_m, y_m, 0.0}; }
};

// Two-hop amplitude kappa = e * rho with e the free-space spreading factor of
// the tx- and rx-phase-center distances.
std::complex<double> channel_amplitude(const RadarConfig &cfg, const RadarTarget &target);

// Noise-free mean of the n-th receive sample.
std::complex<double> received_mean(const RadarConfig &cfg, const RadarTarget &target, int n);

// All receive means.
std::vector<std::complex<double>> received_means(const RadarConfig &cfg, const RadarTarget &target);

// One noisy snapshot: means plus circularly symmetric complex Gaussian noise.
std::vector<std::complex<double>> synth_snapshot(const RadarConfig &cfg, const RadarTarget &target,
                                                 std::mt19937_64 &rng);

// Fisher information for the planar target location (x, y).
Eigen::Matrix2d fim(const RadarConfig &cfg, const RadarTarget &target);

// Position error bound tr(J^-1) in m^2; throws numerical_error when the
// geometry leaves a coordinate unobservable.
double crlb(const RadarConfig &cfg, const RadarTarget &target);

struct SearchBox {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
};

// Grid maximum-likelihood location estimate: maximizes the Gaussian fit
// 2*Re<z, mu(theta)> - ||mu(theta)||^2 with coarse-to-fine refinement down to
// `resolution` meters, clamped to the search box. With `polish` a damped
// Gauss-Newton descent sharpens the gridded argmax below the grid pitch
// (needed when the ridge coupling dwarfs the resolution).
std::pair<double, double> ml_estimate_grid(const RadarConfig &cfg,
                                           const std::vector<std::complex<double>> &snapshot,
                                           const SearchBox &box, double resolution,
                                           double coarse_step = 0.0, bool polish = true);

} // namespace risim
