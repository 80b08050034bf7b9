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

#include "risim/gbsm.hpp"
#include "risim/gbsm_types.hpp"
#include "risim/propagation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace risim {

// Power delay profile on a uniform delay grid.
struct Pdp {
    double resolution_s = 1.25e-9;
    std::vector<double> power; // linear, bin i covers [i*res, (i+1)*res)
    bool normalized = false;

    double delay_of_bin(std::size_t i) const { return (static_cast<double>(i) + 0.5) * resolution_s; }
    double total_power() const;
};

enum class FadingFamily { rayleigh, weibull, lognormal };

struct DistributionFit {
    FadingFamily family = FadingFamily::rayleigh;
    // rayleigh: {sigma}; weibull: {shape, scale}; lognormal: {mu, sigma}
    std::vector<double> params;
    double log_likelihood = 0.0;
    double ks_stat = 0.0;
};

struct KFactorEstimate {
    double k_db = 0.0;
    bool capped = false;
};

struct PleFit {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    bool gamma1_identified = false;
    bool gamma2_identified = false;
    double intercept_db = 0.0; // fitted offset on top of the fixed CI intercept
    double sigma_sf_db = 0.0;  // residual std
};

struct ClusterDecayFit {
    double a = 0.0; // peak, linear
    double b = 0.0; // decay rate per ns
    double c = 0.0; // floor, linear
    int iterations = 0;
};

struct ChannelStats {
    double tau_rms_s = 0.0;
    double b_c_hz = 0.0;
    double k_hat_db = 0.0;
};

// Snapshot PDP of a CIR at time t: squared Frobenius tap powers accumulated
// into uniform delay bins.
Pdp pdp_from_cir(const Cir &cir, double resolution_s, double t_s, bool normalize = false);

// Second-central-moment RMS width of the PDP. Bins more than `floor_db` below
// the peak are excluded (set <= 0 to keep everything).
double rms_delay_spread(const Pdp &pdp, double floor_db = 30.0);

// Width over which the channel stays flat at 0.5 frequency correlation.
double coherence_bandwidth(double tau_rms_s);

// Moment-method Rician K estimate from envelope magnitudes, clipped to
// [-20, 60] dB; constant input pegs the cap.
KFactorEstimate estimate_k_factor(const std::vector<double> &envelope);

// Instantaneous SNR with coherently summed tap amplitudes; set
// `incoherent_power_sum` to sum tap powers instead.
double snr(const Cir &cir, const LinkBudget &link, double t_s, bool incoherent_power_sum = false);

// Spectral efficiency of a 2x2 channel, equal power per stream.
double mimo_capacity(const Mat2c &h, double snr_per_stream);

// Throughput in Mbps from spectral efficiency, clipped at the system ceiling.
double capacity_mbps(double bits_per_s_per_hz, double bandwidth_hz, double ceiling_mbps);

// Maximum-likelihood fit of one family plus its Kolmogorov-Smirnov statistic.
DistributionFit fit_fading_distribution(const std::vector<double> &samples, FadingFamily family);

// Convenience: fit all three families and sort by descending log-likelihood.
std::vector<DistributionFit> rank_fading_distributions(const std::vector<double> &samples);

struct PlePoint {
    double d1_m = 0.0;
    double d2_m = 0.0;
    double pl_db = 0.0;
};

// Least squares of the two-hop close-in model on measured points. The CI
// intercept 20*log10(4*pi*d0/lambda) is fixed; with `estimate_intercept` an
// additional free offset absorbs constant gains. A distance column without
// diversity is folded into the offset and flagged unidentified; if no column
// has diversity the fit is impossible.
PleFit fit_ci_ple(const std::vector<PlePoint> &points, double lambda_m, double d0_m = 1.0,
                  bool estimate_intercept = false);

// Nonlinear least squares of P(tau) = a*exp(-b*tau) + c with tau in ns,
// initialized from a log-linear fit above the floor.
ClusterDecayFit fit_cluster_decay(const Pdp &pdp, int max_iterations = 200);

// Builds the cascaded CIR for each codebook in the bank and returns the index
// minimizing the RMS delay spread at snapshot t; ties break to the lower
// index. The cluster realization is shared across the bank.
struct CodebookBankEvaluator {
    const RisSpec &spec;
    const GbsmScene &scene;
    const ClusterSet &clusters;
    double k_factor_db;
    double ris_amplitude; // linear amplitude applied to the reflected path
    double direct_amplitude;
    const ClusterSet *direct_clusters = nullptr; // optional direct-leg ensemble
    double pdp_resolution_s = 1.25e-9;
};

std::size_t select_codebook_min_ds(const std::vector<Codebook> &bank,
                                   const CodebookBankEvaluator &eval, double t_s);

} // namespace risim
