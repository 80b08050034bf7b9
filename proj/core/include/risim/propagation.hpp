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

#include <optional>
#include <random>

namespace risim {

struct CifParams {
    double f0_hz = 0.0;
    double beta = 0.0;
};

struct PathLossParams {
    double gamma1 = 2.0;      // first-hop path loss exponent
    double gamma2 = 2.0;      // second-hop path loss exponent
    double d0_m = 1.0;        // close-in reference distance
    double sigma_sf_db = 0.0; // shadow fading std
    std::optional<CifParams> cif;

    void validate() const;
};

struct LinkBudget {
    double g_tx_dbi = 0.0;
    double g_rx_dbi = 0.0;
    double p_tx_dbm = 0.0;
    double noise_var = 1.0; // linear noise power

    void validate() const;
};

// Two-hop free-space gain term of the reflective surface, linear scale:
//   G_tx * G_rx * lambda^2 * sigma / ((4*pi)^3 * (d1*d2)^2)
double fspl_ris_gain(const LinkBudget &link, double lambda_m, double sigma_ris_m2, double d1_m,
                     double d2_m);

// Close-in two-hop path loss in dB. `fspl_ris_db` enters as a gain correction
// (subtracted); shadow fading adds on top. No clamping: the result may show a
// net gain when the surface term exceeds the geometric terms.
double ci_path_loss(const PathLossParams &p, double lambda_m, double d1_m, double d2_m,
                    double fspl_ris_db = 0.0, double shadow_db = 0.0);

// Close-in model with frequency-scaled distance slopes; requires cif params.
double cif_path_loss(const PathLossParams &p, double f_hz, double lambda_m, double d1_m,
                     double d2_m, double fspl_ris_db = 0.0, double shadow_db = 0.0);

// Single-leg close-in path loss (direct link), with an optional constant
// blockage excess.
double ci_path_loss_single(double gamma, double d0_m, double lambda_m, double d_m,
                           double blockage_db = 0.0, double shadow_db = 0.0);

// Time-averaged absolute receive power in dBm over [t0, t0+T1]: transmit
// power times the tap power sum, de-embedded by the path loss. Trapezoidal
// average on the CIR time grid restricted to the window.
double receive_power(const Cir &cir, double p_tx_dbm, double pl_db, double t0_s, double t1_s);

// One shadow-fading draw in dB, N(0, sigma_sf^2).
double sample_shadow_fading(const PathLossParams &p, std::mt19937_64 &rng);

} // namespace risim
