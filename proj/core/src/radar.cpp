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

#include "risim/radar.hpp"

#include "risim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace risim {

namespace {

constexpr std::complex<double> jimag{0.0, 1.0};

double distance(const Vec3 &a, const Vec3 &b) { return (a - b).norm(); }

struct MeanDerivatives {
    std::complex<double> mu;
    std::complex<double> dmu_dx;
    std::complex<double> dmu_dy;
};

MeanDerivatives mean_with_derivatives(const RadarConfig &cfg, const RadarTarget &target, int n)
{
    const Vec3 t = target.position();
    const double k = 2.0 * pi / cfg.lambda_m;
    const Eigen::VectorXd x = cfg.element_signals();

    const double d_tx = distance(cfg.tx_phase_center(), t);
    const double d_rx = distance(cfg.rx_phase_center(), t);
    if (d_tx <= 0.0 || d_rx <= 0.0)
        throw geometry_error("radar: target sits on an array phase center");
    const double e_amp = cfg.lambda_m * cfg.lambda_m /
                         (d_tx * d_rx * std::pow(4.0 * pi, 2));
    const std::complex<double> kappa = e_amp * target.rho;

    const Vec3 pc_tx = cfg.tx_phase_center();
    const Vec3 pc_rx = cfg.rx_phase_center();
    // d(e)/dx = -e * (d'_tx/d_tx + d'_rx/d_rx)
    const double dtx_dx = (t.x - pc_tx.x) / d_tx, dtx_dy = (t.y - pc_tx.y) / d_tx;
    const double drx_dx = (t.x - pc_rx.x) / d_rx, drx_dy = (t.y - pc_rx.y) / d_rx;

    const Vec3 rx = cfg.rx_positions[n];
    const double d_on = distance(rx, t);
    if (d_on <= 0.0)
        throw geometry_error("radar: target coincides with a receive element");
    const double don_dx = (t.x - rx.x) / d_on, don_dy = (t.y - rx.y) / d_on;

    MeanDerivatives out{};
    for (std::size_t m = 0; m < cfg.tx_positions.size(); ++m) {
        const Vec3 tx = cfg.tx_positions[m];
        const double d_mo = distance(tx, t);
        if (d_mo <= 0.0)
            throw geometry_error("radar: target coincides with a transmit element");
        const double dmo_dx = (t.x - tx.x) / d_mo, dmo_dy = (t.y - tx.y) / d_mo;

        const std::complex<double> term =
            x(static_cast<Eigen::Index>(m)) * std::exp(-jimag * k * (d_mo + d_on));
        out.mu += term;
        out.dmu_dx += term * (-jimag * k) * (dmo_dx + don_dx);
        out.dmu_dy += term * (-jimag * k) * (dmo_dy + don_dy);
    }
    out.dmu_dx *= kappa;
    out.dmu_dy *= kappa;
    if (cfg.fim_include_amplitude) {
        out.dmu_dx += out.mu * kappa * (-(dtx_dx / d_tx + drx_dx / d_rx));
        out.dmu_dy += out.mu * kappa * (-(dtx_dy / d_tx + drx_dy / d_rx));
    }
    out.mu *= kappa;
    return out;
}

} // namespace

void RadarConfig::validate() const
{
    if (tx_positions.empty() || rx_positions.empty())
        throw std::invalid_argument("radar config: need at least one TX and one RX element");
    if (!(noise_sigma2 > 0.0))
        throw std::invalid_argument("radar config: noise variance must be positive");
    if (!(lambda_m > 0.0))
        throw std::invalid_argument("radar config: wavelength must be positive");
    if (precoder.rows() != static_cast<Eigen::Index>(tx_positions.size()) ||
        precoder.cols() != s.size())
        throw std::invalid_argument("radar config: precoder shape mismatch");
    if (!element_signals().allFinite())
        throw std::invalid_argument("radar config: non-finite element signals");
}

Eigen::VectorXd RadarConfig::element_signals() const { return precoder * s; }

Vec3 RadarConfig::tx_phase_center() const
{
    Vec3 c{};
    for (const Vec3 &p : tx_positions)
        c = c + p;
    return c / static_cast<double>(tx_positions.size());
}

Vec3 RadarConfig::rx_phase_center() const
{
    Vec3 c{};
    for (const Vec3 &p : rx_positions)
        c = c + p;
    return c / static_cast<double>(rx_positions.size());
}

RadarConfig RadarConfig::default_array(double lambda_m)
{
    RadarConfig cfg;
    cfg.lambda_m = lambda_m;
    cfg.tx_positions = {{-lambda_m, 0.0, 0.0}, {0.0, 0.0, 0.0}, {lambda_m, 0.0, 0.0}};
    const double half = lambda_m / 2.0;
    cfg.rx_positions = {{-1.5 * half, 0.0, 0.0},
                        {-0.5 * half, 0.0, 0.0},
                        {0.5 * half, 0.0, 0.0},
                        {1.5 * half, 0.0, 0.0}};
    cfg.precoder = Eigen::MatrixXd::Identity(3, 3);
    cfg.s = Eigen::VectorXd::Ones(3);
    return cfg;
}

std::complex<double> channel_amplitude(const RadarConfig &cfg, const RadarTarget &target)
{
    cfg.validate();
    const double d_tx = distance(cfg.tx_phase_center(), target.position());
    const double d_rx = distance(cfg.rx_phase_center(), target.position());
    if (d_tx <= 0.0 || d_rx <= 0.0)
        throw geometry_error("channel_amplitude: target sits on an array phase center");
    const double four_pi_sq = std::pow(4.0 * pi, 2);
    const double e = std::sqrt(cfg.lambda_m * cfg.lambda_m / (d_tx * d_tx * four_pi_sq) *
                               cfg.lambda_m * cfg.lambda_m / (d_rx * d_rx * four_pi_sq));
    return e * target.rho;
}

std::complex<double> received_mean(const RadarConfig &cfg, const RadarTarget &target, int n)
{
    cfg.validate();
    if (n < 0 || static_cast<std::size_t>(n) >= cfg.rx_positions.size())
        throw std::invalid_argument("received_mean: receive index out of range");
    return mean_with_derivatives(cfg, target, n).mu;
}

std::vector<std::complex<double>> received_means(const RadarConfig &cfg, const RadarTarget &target)
{
    cfg.validate();
    std::vector<std::complex<double>> mu(cfg.rx_positions.size());
    for (std::size_t n = 0; n < mu.size(); ++n)
        mu[n] = mean_with_derivatives(cfg, target, static_cast<int>(n)).mu;
    return mu;
}

std::vector<std::complex<double>> synth_snapshot(const RadarConfig &cfg, const RadarTarget &target,
                                                 std::mt19937_64 &rng)
{
    auto z = received_means(cfg, target);
    std::normal_distribution<double> noise(0.0, std::sqrt(cfg.noise_sigma2 / 2.0));
    for (auto &v : z)
        v += std::complex<double>(noise(rng), noise(rng));
    return z;
}

Eigen::Matrix2d fim(const RadarConfig &cfg, const RadarTarget &target)
{
    cfg.validate();
    Eigen::Matrix2d j = Eigen::Matrix2d::Zero();
    for (std::size_t n = 0; n < cfg.rx_positions.size(); ++n) {
        const MeanDerivatives d = mean_with_derivatives(cfg, target, static_cast<int>(n));
        const std::complex<double> dx = d.dmu_dx, dy = d.dmu_dy;
        j(0, 0) += (std::conj(dx) * dx).real();
        j(0, 1) += (std::conj(dx) * dy).real();
        j(1, 1) += (std::conj(dy) * dy).real();
    }
    j(1, 0) = j(0, 1);
    return 2.0 / cfg.noise_sigma2 * j;
}

double crlb(const RadarConfig &cfg, const RadarTarget &target)
{
    const Eigen::Matrix2d j = fim(cfg, target);
    const double det = j.determinant();
    const double scale = j(0, 0) * j(1, 1);
    if (!(det > 0.0) || det <= 1e-12 * scale)
        throw numerical_error("crlb: singular Fisher information, location unobservable");
    const Eigen::Matrix2d inv = j.inverse();
    return inv(0, 0) + inv(1, 1);
}

std::pair<double, double> ml_estimate_grid(const RadarConfig &cfg,
                                           const std::vector<std::complex<double>> &snapshot,
                                           const SearchBox &box, double resolution,
                                           double coarse_step, bool polish)
{
    cfg.validate();
    if (snapshot.size() != cfg.rx_positions.size())
        throw std::invalid_argument("ml_estimate_grid: snapshot length mismatch");
    if (!(box.x_max >= box.x_min) || !(box.y_max >= box.y_min))
        throw std::invalid_argument("ml_estimate_grid: empty search box");
    if (!(resolution > 0.0))
        throw std::invalid_argument("ml_estimate_grid: resolution must be positive");

    // Gaussian ML objective: 2*Re<z, mu> - ||mu||^2, the residual expansion
    // with the data energy dropped. A plain correlation magnitude drifts
    // toward closer hypotheses under the 1/d amplitude and is not used.
    auto metric = [&](double x, double y) {
        RadarTarget probe;
        probe.x_m = x;
        probe.y_m = y;
        probe.rho = 1.0;
        double fit = 0.0;
        for (std::size_t n = 0; n < snapshot.size(); ++n) {
            const std::complex<double> mu =
                mean_with_derivatives(cfg, probe, static_cast<int>(n)).mu;
            fit += 2.0 * (snapshot[n] * std::conj(mu)).real() - std::norm(mu);
        }
        return fit;
    };

    // The likelihood ridge couples the two coordinates: a small range offset
    // shifts the best-fitting cross-range by orders more. Range therefore
    // refines against full-width cross-range scans before the joint polish.
    const double x_span = box.x_max - box.x_min;
    const double y_span = box.y_max - box.y_min;
    const double x_step_full = std::max(resolution, x_span / 64.0);
    // Range always refines to carrier scale: a range quantum drags the
    // best-fitting cross-range by orders more, so the requested resolution
    // alone would wreck the cross-range scan.
    const double y_floor = std::min(resolution, cfg.lambda_m / 512.0);
    double y_step = std::max(y_floor,
                             std::min(coarse_step > 0.0 ? coarse_step : cfg.lambda_m / 8.0,
                                      std::max(y_span / 8.0, y_floor)));
    double y_lo = box.y_min, y_hi = box.y_max;
    double bx = 0.5 * (box.x_min + box.x_max);
    double by = 0.5 * (box.y_min + box.y_max);

    while (true) {
        const int ny = std::max(1, static_cast<int>(std::ceil((y_hi - y_lo) / y_step)));
        const int nx = std::max(1, static_cast<int>(std::ceil(x_span / x_step_full)));
        double best = -std::numeric_limits<double>::infinity();
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i) {
                const double y = y_lo + (y_hi - y_lo) * j / std::max(1, ny);
                const double x = box.x_min + x_span * i / std::max(1, nx);
                const double v = metric(x, y);
                if (v > best) {
                    best = v;
                    bx = x;
                    by = y;
                }
            }
        if (y_step <= y_floor)
            break;
        y_lo = std::max(box.y_min, by - 1.5 * y_step);
        y_hi = std::min(box.y_max, by + 1.5 * y_step);
        y_step = std::max(y_floor, 0.25 * y_step);
    }

    if (!polish)
        return {bx, by};

    // Within-basin polish. The likelihood valley is extremely anisotropic
    // (the ridge slope exceeds 100x), which defeats axis-aligned grids, so a
    // damped Gauss-Newton descent on the residual finishes the estimate.
    auto residual_cost = [&](double x, double y) { return -metric(x, y); };
    double lambda_damp = 1e-3;
    double cost = residual_cost(bx, by);
    for (int it = 0; it < 100; ++it) {
        RadarTarget probe;
        probe.x_m = bx;
        probe.y_m = by;
        probe.rho = 1.0;
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (std::size_t n = 0; n < snapshot.size(); ++n) {
            const MeanDerivatives d = mean_with_derivatives(cfg, probe, static_cast<int>(n));
            const std::complex<double> r = snapshot[n] - d.mu;
            jtj(0, 0) += (std::conj(d.dmu_dx) * d.dmu_dx).real();
            jtj(0, 1) += (std::conj(d.dmu_dx) * d.dmu_dy).real();
            jtj(1, 1) += (std::conj(d.dmu_dy) * d.dmu_dy).real();
            jtr(0) += (std::conj(d.dmu_dx) * r).real();
            jtr(1) += (std::conj(d.dmu_dy) * r).real();
        }
        jtj(1, 0) = jtj(0, 1);
        const Eigen::Matrix2d damped =
            jtj + lambda_damp * Eigen::Matrix2d(jtj.diagonal().asDiagonal());
        Eigen::Vector2d delta = damped.ldlt().solve(jtr);
        if (!delta.allFinite())
            break;
        // never leave the search box or hop a carrier fringe
        const double cap = cfg.lambda_m / 8.0;
        if (delta.norm() > cap)
            delta *= cap / delta.norm();
        const double nx = std::clamp(bx + delta(0), box.x_min, box.x_max);
        const double ny = std::clamp(by + delta(1), box.y_min, box.y_max);
        const double ncost = residual_cost(nx, ny);
        if (ncost < cost) {
            const bool settled = std::hypot(nx - bx, ny - by) < 1e-3 * resolution;
            bx = nx;
            by = ny;
            cost = ncost;
            lambda_damp = std::max(1e-9, 0.3 * lambda_damp);
            if (settled)
                break;
        } else {
            lambda_damp *= 10.0;
            if (lambda_damp > 1e9)
                break;
        }
    }
    return {bx, by};
}

} // namespace risim
