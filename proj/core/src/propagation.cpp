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

#include "risim/propagation.hpp"

#include "risim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace risim {

void PathLossParams::validate() const
{
    if (!(d0_m > 0.0))
        throw std::invalid_argument("path loss params: reference distance must be positive");
    if (!(sigma_sf_db >= 0.0))
        throw std::invalid_argument("path loss params: shadow fading std must be >= 0");
}

void LinkBudget::validate() const
{
    if (!(noise_var > 0.0))
        throw std::invalid_argument("link budget: noise variance must be positive");
    if (!std::isfinite(g_tx_dbi) || !std::isfinite(g_rx_dbi) || !std::isfinite(p_tx_dbm))
        throw std::invalid_argument("link budget: gains and power must be finite");
}

double fspl_ris_gain(const LinkBudget &link, double lambda_m, double sigma_ris_m2, double d1_m,
                     double d2_m)
{
    if (!(d1_m > 0.0) || !(d2_m > 0.0))
        throw std::invalid_argument("fspl_ris_gain: distances must be positive");
    if (!(lambda_m > 0.0))
        throw std::invalid_argument("fspl_ris_gain: wavelength must be positive");
    const double g_tx = db2lin(link.g_tx_dbi);
    const double g_rx = db2lin(link.g_rx_dbi);
    const double four_pi_cubed = std::pow(4.0 * pi, 3);
    const double dd = d1_m * d2_m;
    return g_tx * g_rx * lambda_m * lambda_m * sigma_ris_m2 / (four_pi_cubed * dd * dd);
}

double ci_path_loss(const PathLossParams &p, double lambda_m, double d1_m, double d2_m,
                    double fspl_ris_db, double shadow_db)
{
    p.validate();
    if (!(lambda_m > 0.0))
        throw std::invalid_argument("ci_path_loss: wavelength must be positive");
    if (d1_m < p.d0_m || d2_m < p.d0_m)
        throw std::invalid_argument("ci_path_loss: distances below the reference distance");
    const double intercept = 20.0 * std::log10(4.0 * pi * p.d0_m / lambda_m);
    return intercept + 10.0 * p.gamma1 * std::log10(d1_m / p.d0_m) +
           10.0 * p.gamma2 * std::log10(d2_m / p.d0_m) - fspl_ris_db + shadow_db;
}

double cif_path_loss(const PathLossParams &p, double f_hz, double lambda_m, double d1_m,
                     double d2_m, double fspl_ris_db, double shadow_db)
{
    p.validate();
    if (!p.cif)
        throw config_error("cif_path_loss: CIF parameters (f0, beta) not configured");
    if (!(f_hz > 0.0))
        throw std::invalid_argument("cif_path_loss: frequency must be positive");
    if (d1_m < p.d0_m || d2_m < p.d0_m)
        throw std::invalid_argument("cif_path_loss: distances below the reference distance");
    const double scale = 1.0 + p.cif->beta * (f_hz - p.cif->f0_hz) / p.cif->f0_hz;
    const double intercept = 20.0 * std::log10(4.0 * pi * p.d0_m / lambda_m);
    return intercept + 10.0 * p.gamma1 * scale * std::log10(d1_m / p.d0_m) +
           10.0 * p.gamma2 * scale * std::log10(d2_m / p.d0_m) - fspl_ris_db + shadow_db;
}

double ci_path_loss_single(double gamma, double d0_m, double lambda_m, double d_m,
                           double blockage_db, double shadow_db)
{
    if (!(d0_m > 0.0) || !(lambda_m > 0.0))
        throw std::invalid_argument("ci_path_loss_single: reference distance and wavelength must be positive");
    if (d_m < d0_m)
        throw std::invalid_argument("ci_path_loss_single: distance below the reference distance");
    return 20.0 * std::log10(4.0 * pi * d0_m / lambda_m) + 10.0 * gamma * std::log10(d_m / d0_m) +
           blockage_db + shadow_db;
}

double receive_power(const Cir &cir, double p_tx_dbm, double pl_db, double t0_s, double t1_s)
{
    if (cir.empty())
        throw std::invalid_argument("receive_power: empty CIR");
    if (!(t1_s > 0.0))
        throw std::invalid_argument("receive_power: averaging window must be positive");

    // Sample instants of the CIR grid inside the window, window edges included.
    std::vector<double> ts;
    ts.push_back(t0_s);
    for (double t : cir.time_grid_s)
        if (t > t0_s && t < t0_s + t1_s)
            ts.push_back(t);
    ts.push_back(t0_s + t1_s);
    std::sort(ts.begin(), ts.end());

    auto power_sum = [&cir](double t) {
        double s = 0.0;
        for (const auto &[delay, amp] : cir.amplitudes_at(t)) {
            (void)delay;
            s += amp.squaredNorm();
        }
        return s;
    };

    double integral = 0.0;
    double prev_t = ts.front();
    double prev_p = power_sum(prev_t);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double p = power_sum(ts[i]);
        integral += 0.5 * (p + prev_p) * (ts[i] - prev_t);
        prev_t = ts[i];
        prev_p = p;
    }
    const double mean_gain = integral / t1_s;
    const double p_rx_mw = db2lin(p_tx_dbm) * mean_gain / db2lin(pl_db);
    return lin2db(p_rx_mw);
}

double sample_shadow_fading(const PathLossParams &p, std::mt19937_64 &rng)
{
    p.validate();
    if (p.sigma_sf_db == 0.0)
        return 0.0;
    std::normal_distribution<double> dist(0.0, p.sigma_sf_db);
    return dist(rng);
}

} // namespace risim
