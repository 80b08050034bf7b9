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

#include "risim/metrics.hpp"

#include "risim/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace risim {

namespace {

double mean_of(const std::vector<double> &v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double family_cdf(const DistributionFit &fit, double x)
{
    switch (fit.family) {
    case FadingFamily::rayleigh: {
        const double s2 = fit.params[0] * fit.params[0];
        return 1.0 - std::exp(-x * x / (2.0 * s2));
    }
    case FadingFamily::weibull: {
        const double k = fit.params[0], lam = fit.params[1];
        return 1.0 - std::exp(-std::pow(x / lam, k));
    }
    case FadingFamily::lognormal: {
        const double mu = fit.params[0], sig = fit.params[1];
        return normal_cdf((std::log(x) - mu) / sig);
    }
    }
    return 0.0;
}

double ks_statistic(const DistributionFit &fit, std::vector<double> sorted)
{
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = family_cdf(fit, sorted[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

// Weibull shape equation g(k) = sum(x^k ln x)/sum(x^k) - 1/k - mean(ln x).
double weibull_shape_mle(const std::vector<double> &x, double mean_log)
{
    auto g = [&](double k) {
        double num = 0.0, den = 0.0;
        for (double v : x) {
            const double p = std::pow(v, k);
            num += p * std::log(v);
            den += p;
        }
        return num / den - 1.0 / k - mean_log;
    };
    // bracket the root, then bisect: g is increasing in k
    double lo = 1e-3, hi = 1.0;
    while (g(hi) < 0.0 && hi < 1e4)
        hi *= 2.0;
    if (hi >= 1e4)
        throw estimation_error("weibull fit: shape equation has no root in range");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double Pdp::total_power() const { return std::accumulate(power.begin(), power.end(), 0.0); }

Pdp pdp_from_cir(const Cir &cir, double resolution_s, double t_s, bool normalize)
{
    if (cir.empty())
        throw std::invalid_argument("pdp_from_cir: empty CIR");
    if (!(resolution_s > 0.0))
        throw std::invalid_argument("pdp_from_cir: resolution must be positive");

    // A delay sitting exactly on a bin edge must not fall one bin short of it.
    auto bin_of = [resolution_s](double delay) {
        return static_cast<std::size_t>(std::floor(delay / resolution_s + 1e-9));
    };
    const auto amps = cir.amplitudes_at(t_s);
    double max_delay = 0.0;
    for (const auto &[delay, amp] : amps) {
        (void)amp;
        max_delay = std::max(max_delay, delay);
    }
    Pdp pdp;
    pdp.resolution_s = resolution_s;
    pdp.power.assign(bin_of(max_delay) + 1, 0.0);
    for (const auto &[delay, amp] : amps)
        pdp.power[bin_of(delay)] += amp.squaredNorm();

    if (normalize) {
        const double total = pdp.total_power();
        if (total <= 0.0)
            throw degenerate_input("pdp_from_cir: zero total power");
        for (double &p : pdp.power)
            p /= total;
        pdp.normalized = true;
    }
    return pdp;
}

double rms_delay_spread(const Pdp &pdp, double floor_db)
{
    const double peak = *std::max_element(pdp.power.begin(), pdp.power.end());
    if (peak <= 0.0)
        throw degenerate_input("rms_delay_spread: zero total power");
    const double floor = floor_db > 0.0 ? peak * db2lin(-floor_db) : 0.0;

    double p_sum = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < pdp.power.size(); ++i) {
        const double p = pdp.power[i];
        if (p < floor)
            continue;
        const double tau = pdp.delay_of_bin(i);
        p_sum += p;
        m1 += p * tau;
        m2 += p * tau * tau;
    }
    if (p_sum <= 0.0)
        throw degenerate_input("rms_delay_spread: zero power above the floor");
    const double mean = m1 / p_sum;
    return std::sqrt(std::max(0.0, m2 / p_sum - mean * mean));
}

double coherence_bandwidth(double tau_rms_s)
{
    if (tau_rms_s < 0.0)
        throw std::invalid_argument("coherence_bandwidth: negative delay spread");
    if (tau_rms_s == 0.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / (5.0 * tau_rms_s);
}

KFactorEstimate estimate_k_factor(const std::vector<double> &envelope)
{
    if (envelope.size() < 100)
        throw std::invalid_argument("estimate_k_factor: need at least 100 samples");
    for (double e : envelope)
        if (!(e > 0.0))
            throw std::invalid_argument("estimate_k_factor: envelope magnitudes must be positive");

    std::vector<double> p(envelope.size());
    std::transform(envelope.begin(), envelope.end(), p.begin(), [](double e) { return e * e; });
    const double m = mean_of(p);
    double var = 0.0;
    for (double v : p)
        var += (v - m) * (v - m);
    var /= static_cast<double>(p.size());
    const double v_norm = var / (m * m);

    KFactorEstimate est;
    if (v_norm <= 0.0) { // constant envelope: deterministic only
        est.k_db = 60.0;
        est.capped = true;
        return est;
    }
    if (v_norm >= 1.0) { // diffuse only
        est.k_db = -20.0;
        est.capped = true;
        return est;
    }
    const double root = std::sqrt(1.0 - v_norm);
    const double k_lin = root / (1.0 - root);
    est.k_db = std::clamp(lin2db(k_lin), -20.0, 60.0);
    est.capped = est.k_db <= -20.0 || est.k_db >= 60.0;
    return est;
}

double snr(const Cir &cir, const LinkBudget &link, double t_s, bool incoherent_power_sum)
{
    link.validate();
    double acc = 0.0;
    for (const auto &[delay, amp] : cir.amplitudes_at(t_s)) {
        (void)delay;
        acc += incoherent_power_sum ? amp.squaredNorm() : amp.norm();
    }
    const double p_tx = db2lin(link.p_tx_dbm);
    return incoherent_power_sum ? p_tx / link.noise_var * acc
                                : p_tx / link.noise_var * acc * acc;
}

double mimo_capacity(const Mat2c &h, double snr_per_stream)
{
    const Mat2c m = Mat2c::Identity() + (snr_per_stream / 2.0) * h * h.adjoint();
    const double det = std::max(1.0, m.determinant().real());
    return std::log2(det);
}

double capacity_mbps(double bits_per_s_per_hz, double bandwidth_hz, double ceiling_mbps)
{
    return std::min(bits_per_s_per_hz * bandwidth_hz / 1e6, ceiling_mbps);
}

DistributionFit fit_fading_distribution(const std::vector<double> &samples, FadingFamily family)
{
    if (samples.size() < 1000)
        throw std::invalid_argument("fit_fading_distribution: need at least 1000 samples");
    for (double s : samples)
        if (!(s > 0.0))
            throw std::invalid_argument("fit_fading_distribution: samples must be positive");

    const double n = static_cast<double>(samples.size());
    std::vector<double> logs(samples.size());
    std::transform(samples.begin(), samples.end(), logs.begin(),
                   [](double s) { return std::log(s); });
    const double mean_log = mean_of(logs);
    double var_log = 0.0;
    for (double l : logs)
        var_log += (l - mean_log) * (l - mean_log);
    var_log /= n;
    if (var_log < 1e-12)
        throw estimation_error("fit_fading_distribution: degenerate (constant) samples");

    DistributionFit fit;
    fit.family = family;
    switch (family) {
    case FadingFamily::rayleigh: {
        double sum_sq = 0.0;
        for (double s : samples)
            sum_sq += s * s;
        const double sigma2 = sum_sq / (2.0 * n);
        fit.params = {std::sqrt(sigma2)};
        double ll = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            ll += logs[i] - std::log(sigma2) - samples[i] * samples[i] / (2.0 * sigma2);
        fit.log_likelihood = ll;
        break;
    }
    case FadingFamily::weibull: {
        const double k = weibull_shape_mle(samples, mean_log);
        double sum_pk = 0.0;
        for (double s : samples)
            sum_pk += std::pow(s, k);
        const double lam = std::pow(sum_pk / n, 1.0 / k);
        fit.params = {k, lam};
        double ll = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            ll += std::log(k) - k * std::log(lam) + (k - 1.0) * logs[i] -
                  std::pow(samples[i] / lam, k);
        fit.log_likelihood = ll;
        break;
    }
    case FadingFamily::lognormal: {
        const double mu = mean_log;
        const double sig = std::sqrt(var_log);
        fit.params = {mu, sig};
        double ll = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double z = (logs[i] - mu) / sig;
            ll += -logs[i] - std::log(sig) - 0.5 * std::log(2.0 * pi) - 0.5 * z * z;
        }
        fit.log_likelihood = ll;
        break;
    }
    }

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    fit.ks_stat = ks_statistic(fit, std::move(sorted));
    return fit;
}

std::vector<DistributionFit> rank_fading_distributions(const std::vector<double> &samples)
{
    std::vector<DistributionFit> fits;
    for (FadingFamily f : {FadingFamily::rayleigh, FadingFamily::weibull, FadingFamily::lognormal})
        fits.push_back(fit_fading_distribution(samples, f));
    std::stable_sort(fits.begin(), fits.end(), [](const DistributionFit &a, const DistributionFit &b) {
        return a.log_likelihood > b.log_likelihood;
    });
    return fits;
}

PleFit fit_ci_ple(const std::vector<PlePoint> &points, double lambda_m, double d0_m,
                  bool estimate_intercept)
{
    if (points.size() < 3)
        throw std::invalid_argument("fit_ci_ple: need at least 3 points");
    if (!(lambda_m > 0.0) || !(d0_m > 0.0))
        throw std::invalid_argument("fit_ci_ple: wavelength and reference distance must be positive");

    const std::size_t n = points.size();
    Eigen::VectorXd x1(n), x2(n), y(n);
    const double fixed_intercept = 20.0 * std::log10(4.0 * pi * d0_m / lambda_m);
    for (std::size_t i = 0; i < n; ++i) {
        x1(i) = 10.0 * std::log10(points[i].d1_m / d0_m);
        x2(i) = 10.0 * std::log10(points[i].d2_m / d0_m);
        y(i) = points[i].pl_db - fixed_intercept;
    }
    const bool div1 = x1.maxCoeff() - x1.minCoeff() > 1e-9;
    const bool div2 = x2.maxCoeff() - x2.minCoeff() > 1e-9;
    if (!div1 && !div2)
        throw estimation_error("fit_ci_ple: rank-deficient design, no distance diversity");
    // A constant non-zero distance term cannot be told apart from the gamma it
    // belongs to; it is only absorbable by a free intercept.
    if (!estimate_intercept) {
        if ((!div1 && std::abs(x1.mean()) > 1e-9) || (!div2 && std::abs(x2.mean()) > 1e-9))
            throw estimation_error(
                "fit_ci_ple: constant distance leg needs intercept estimation enabled");
    }

    std::vector<int> cols; // 0 -> gamma1, 1 -> gamma2, 2 -> intercept
    if (div1)
        cols.push_back(0);
    if (div2)
        cols.push_back(1);
    if (estimate_intercept)
        cols.push_back(2);

    Eigen::MatrixXd a(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t i = 0; i < n; ++i)
            a(i, c) = cols[c] == 0 ? x1(i) : cols[c] == 1 ? x2(i) : 1.0;

    const Eigen::VectorXd beta = a.colPivHouseholderQr().solve(y);
    PleFit fit;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c] == 0) {
            fit.gamma1 = beta(c);
            fit.gamma1_identified = true;
        } else if (cols[c] == 1) {
            fit.gamma2 = beta(c);
            fit.gamma2_identified = true;
        } else {
            fit.intercept_db = beta(c);
        }
    }
    const Eigen::VectorXd resid = y - a * beta;
    const double dof = std::max<double>(1.0, static_cast<double>(n) - static_cast<double>(cols.size()));
    fit.sigma_sf_db = std::sqrt(resid.squaredNorm() / dof);
    return fit;
}

ClusterDecayFit fit_cluster_decay(const Pdp &pdp, int max_iterations)
{
    std::vector<double> tau_ns, p;
    for (std::size_t i = 0; i < pdp.power.size(); ++i)
        if (pdp.power[i] > 0.0) {
            tau_ns.push_back(pdp.delay_of_bin(i) * 1e9);
            p.push_back(pdp.power[i]);
        }
    if (p.size() < 5)
        throw std::invalid_argument("fit_cluster_decay: need at least 5 bins above the floor");

    const double p_max = *std::max_element(p.begin(), p.end());
    const double p_min = *std::min_element(p.begin(), p.end());
    if (p_max - p_min <= 1e-12 * p_max)
        throw estimation_error("fit_cluster_decay: flat profile, decay rate unidentifiable");

    // log-linear init on the floor-removed profile, weighted by the excess
    // power so the flat floor does not drag the initial slope
    double c0 = 0.9 * p_min;
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double v = p[i] - c0;
        if (v <= 1e-9 * (p_max - c0))
            continue;
        const double ly = std::log(v);
        sw += v;
        sx += v * tau_ns[i];
        sy += v * ly;
        sxx += v * tau_ns[i] * tau_ns[i];
        sxy += v * tau_ns[i] * ly;
        ++m;
    }
    if (m < 3)
        throw estimation_error("fit_cluster_decay: too few points above the floor estimate");
    const double denom = sw * sxx - sx * sx;
    if (std::abs(denom) < 1e-12 * sw * sxx)
        throw estimation_error("fit_cluster_decay: degenerate delay support");
    double b = -(sw * sxy - sx * sy) / denom;
    double a = std::exp((sy + b * sx) / sw);
    double c = c0;

    // Levenberg-Marquardt on (a, b, c)
    auto residual_norm = [&](double aa, double bb, double cc) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double r = aa * std::exp(-bb * tau_ns[i]) + cc - p[i];
            s += r * r;
        }
        return s;
    };
    double lambda = 1e-3;
    double cost = residual_norm(a, b, c);
    int it = 0;
    for (; it < max_iterations; ++it) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double e = std::exp(-b * tau_ns[i]);
            const Eigen::Vector3d j(e, -a * tau_ns[i] * e, 1.0);
            const double r = a * e + c - p[i];
            jtj += j * j.transpose();
            jtr += j * r;
        }
        const Eigen::Matrix3d damped =
            jtj + lambda * Eigen::Matrix3d(jtj.diagonal().asDiagonal());
        const Eigen::Vector3d step = damped.ldlt().solve(-jtr);
        if (!step.allFinite())
            throw estimation_error("fit_cluster_decay: singular normal equations");
        const double na = a + step(0), nb = b + step(1), nc = c + step(2);
        const double ncost = residual_norm(na, nb, nc);
        if (ncost < cost) {
            const bool converged = (cost - ncost) < 1e-14 * (cost + 1e-300) ||
                                   step.norm() < 1e-12 * (std::abs(a) + std::abs(b) + std::abs(c));
            a = na;
            b = nb;
            c = nc;
            cost = ncost;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (converged)
                break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12)
                break;
        }
    }
    if (it >= max_iterations)
        throw estimation_error("fit_cluster_decay: no convergence after " +
                               std::to_string(max_iterations) + " iterations, cost " +
                               std::to_string(cost));
    if (std::abs(a) <= 1e-9 * std::max(std::abs(c), p_max))
        throw estimation_error("fit_cluster_decay: vanishing decay amplitude, rate unidentifiable");

    ClusterDecayFit fit;
    fit.a = a;
    fit.b = b;
    fit.c = c;
    fit.iterations = it;
    return fit;
}

std::size_t select_codebook_min_ds(const std::vector<Codebook> &bank,
                                   const CodebookBankEvaluator &eval, double t_s)
{
    if (bank.empty())
        throw std::invalid_argument("select_codebook_min_ds: empty codebook bank");

    const Cir leg_bs = bs_ris_cir(eval.scene, eval.scene.bs_pattern, AntennaPattern::isotropic());
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const RisPattern pat = RisPattern::from_codebook(eval.spec, bank[i], eval.scene.bs_position,
                                                         eval.scene.lambda0_m);
        const Cir leg_ue = ris_ue_cir(eval.scene, pat, eval.clusters, eval.k_factor_db);
        Cir direct;
        direct.lambda0_m = eval.scene.lambda0_m;
        if (eval.direct_clusters)
            direct = scale_cir(bs_ue_cir(eval.scene, *eval.direct_clusters),
                               eval.direct_amplitude);
        const Cir full =
            cascade_cir(scale_cir(leg_bs, 1.0), scale_cir(leg_ue, eval.ris_amplitude), direct);
        const double ds = rms_delay_spread(pdp_from_cir(full, eval.pdp_resolution_s, t_s));
        if (ds < best) {
            best = ds;
            best_idx = i;
        }
    }
    return best_idx;
}

} // namespace risim
