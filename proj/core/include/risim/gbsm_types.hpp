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
#include <vector>

namespace risim {

using Mat2c = Eigen::Matrix2cd;

// One delay tap: constant 2x2 polarization gain plus a Doppler phase ramp, so
// the tap at time t is gain * exp(j * doppler_rad_s * t).
struct CirTap {
    double delay_s = 0.0;
    Mat2c gain = Mat2c::Zero();
    double doppler_rad_s = 0.0;
};

// Time-variant tapped delay line channel.
struct Cir {
    std::vector<CirTap> taps;
    std::vector<double> time_grid_s; // sample instants for time averaging
    double lambda0_m = 0.0;          // carrier wavelength

    bool empty() const { return taps.empty(); }
    // Coherent tap amplitudes at time t; taps sharing a delay (within 1e-15 s)
    // are summed as complex amplitudes.
    std::vector<std::pair<double, Mat2c>> amplitudes_at(double t) const;
    // Narrowband 2x2 channel matrix at time t (all taps summed coherently).
    Mat2c narrowband(double t) const;
    // Sum over taps of squared Frobenius norms (time-invariant).
    double tap_power_sum() const;
};

// Scales every tap gain by a linear amplitude factor.
Cir scale_cir(const Cir &cir, double amplitude);

} // namespace risim
