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

#include "risim/errors.hpp"
#include "risim/metrics.hpp"
#include "risim/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace risim;

namespace {

Cir single_tap_cir(double delay_s, double amplitude)
{
    Cir cir;
    cir.lambda0_m = 0.0857;
    cir.time_grid_s = {0.0};
    CirTap tap;
    tap.delay_s = delay_s;
    tap.gain = Mat2c::Zero();
    tap.gain(0, 0) = amplitude;
    cir.taps.push_back(tap);
    return cir;
}

Pdp pdp_of(std::initializer_list<std::pair<double, double>> delay_power, double res_s)
{
    Cir cir;
    cir.lambda0_m = 0.0857;
    cir.time_grid_s = {0.0};
    for (const auto &[delay, p] : delay_power) {
        CirTap tap;
        tap.delay_s = delay;
        tap.gain = Mat2c::Zero();
        tap.gain(0, 0) = std::sqrt(p);
        cir.taps.push_back(tap);
    }
    return pdp_from_cir(cir, res_s, 0.0);
}

std::vector<double> rician_envelope(double k_db, std::size_t n, std::mt19937_64 &rng)
{
    const double k = db2lin(k_db);
    const double nu = std::sqrt(k / (k + 1.0));
    const double sigma = std::sqrt(1.0 / (2.0 * (k + 1.0)));
    std::normal_distribution<double> gauss(0.0, sigma);
    std::vector<double> env(n);
    for (double &e : env) {
        const double re = nu + gauss(rng);
        const double im = gauss(rng);
        e = std::hypot(re, im);
    }
    return env;
}

} // namespace

TEST_SUITE("metrics")
{
    TEST_CASE("pdp binning")
    {
        const Pdp one = pdp_of({{10e-9, 1.0}}, 1.25e-9);
        REQUIRE(one.power.size() == 9);
        CHECK(one.power[8] == doctest::Approx(1.0).epsilon(1e-12));

        // two taps in one bin add their powers
        const Pdp merged = pdp_of({{10.0e-9, 0.4}, {10.9e-9, 0.6}}, 1.25e-9);
        CHECK(merged.power[8] == doctest::Approx(1.0).epsilon(1e-12));

        // matching resolution reproduces the inputs
        const Pdp exact = pdp_of({{0.0, 0.5}, {10e-9, 0.3}, {30e-9, 0.2}}, 10e-9);
        CHECK(exact.power[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(exact.power[1] == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(exact.power[3] == doctest::Approx(0.2).epsilon(1e-12));

        Cir empty;
        CHECK_THROWS_AS(pdp_from_cir(empty, 1e-9, 0.0), std::invalid_argument);
    }

    TEST_CASE("rms delay spread")
    {
        CHECK(rms_delay_spread(pdp_of({{10e-9, 1.0}}, 1.25e-9)) == doctest::Approx(0.0));

        const Pdp pair = pdp_of({{0.0, 0.5}, {10e-9, 0.5}}, 1e-9);
        CHECK(rms_delay_spread(pair) == doctest::Approx(5e-9).epsilon(1e-12));

        const Pdp three = pdp_of({{0.0, 0.5}, {10e-9, 0.3}, {30e-9, 0.2}}, 1e-9);
        CHECK(rms_delay_spread(three) == doctest::Approx(std::sqrt(129.0) * 1e-9).epsilon(1e-9));
        CHECK(rms_delay_spread(three) == doctest::Approx(11.36e-9).epsilon(1e-3));

        Pdp zero;
        zero.power = {0.0, 0.0};
        CHECK_THROWS_AS(rms_delay_spread(zero), degenerate_input);
    }

    TEST_CASE("rms delay spread shift and scale invariance")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<std::pair<double, double>> taps;
            for (int i = 0; i < 12; ++i)
                taps.emplace_back(u(rng) * 100e-9, 0.05 + u(rng));
            Cir base;
            base.lambda0_m = 1.0;
            base.time_grid_s = {0.0};
            Cir shifted = base, scaled = base;
            for (auto &[d, p] : taps) {
                CirTap tap;
                tap.gain = Mat2c::Zero();
                tap.gain(0, 0) = std::sqrt(p);
                tap.delay_s = d;
                base.taps.push_back(tap);
                tap.delay_s = d + 250e-9;
                shifted.taps.push_back(tap);
                tap.delay_s = d;
                tap.gain(0, 0) = std::sqrt(3.7 * p);
                scaled.taps.push_back(tap);
            }
            const double res = 1e-9;
            const double t0 = rms_delay_spread(pdp_from_cir(base, res, 0.0), 0.0);
            const double t1 = rms_delay_spread(pdp_from_cir(shifted, res, 0.0), 0.0);
            const double t2 = rms_delay_spread(pdp_from_cir(scaled, res, 0.0), 0.0);
            CHECK(t1 == doctest::Approx(t0).epsilon(1e-9));
            CHECK(t2 == doctest::Approx(t0).epsilon(1e-12));
        }
    }

    TEST_CASE("coherence bandwidth")
    {
        CHECK(coherence_bandwidth(11.5e-9) == doctest::Approx(17.39e6).epsilon(1e-3));
        CHECK(coherence_bandwidth(25.9e-9) == doctest::Approx(7.72e6).epsilon(1e-3));
        const double tau = 3.3e-8;
        CHECK(coherence_bandwidth(tau) * 5.0 * tau == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::isinf(coherence_bandwidth(0.0)));
        CHECK_THROWS_AS(coherence_bandwidth(-1.0), std::invalid_argument);
    }

    TEST_CASE("k-factor estimator")
    {
        std::vector<double> constant(1000, 2.5);
        const KFactorEstimate capped = estimate_k_factor(constant);
        CHECK(capped.k_db == 60.0);
        CHECK(capped.capped);

        std::mt19937_64 rng(77);
        const auto rayleigh = rician_envelope(-100.0, 100000, rng);
        CHECK(estimate_k_factor(rayleigh).k_db <= -10.0);

        const auto rician = rician_envelope(10.0, 100000, rng);
        const KFactorEstimate est = estimate_k_factor(rician);
        CHECK(est.k_db >= 9.0);
        CHECK(est.k_db <= 11.0);

        CHECK_THROWS_AS(estimate_k_factor({1.0, 2.0}), std::invalid_argument);
    }

    TEST_CASE("snr of the tap sum")
    {
        LinkBudget link{0.0, 0.0, 0.0, 1.0};
        Cir zero = single_tap_cir(0.0, 0.0);
        CHECK(snr(zero, link, 0.0) == doctest::Approx(0.0));

        Cir cir = single_tap_cir(0.0, 1.0);
        CirTap second;
        second.delay_s = 10e-9;
        second.gain = Mat2c::Zero();
        second.gain(0, 0) = 1.0;
        cir.taps.push_back(second);
        const double base = snr(cir, link, 0.0);
        CHECK(base == doctest::Approx(4.0).epsilon(1e-12)); // (1+1)^2

        for (CirTap &tap : cir.taps)
            tap.gain *= 2.0;
        CHECK(snr(cir, link, 0.0) == doctest::Approx(4.0 * base).epsilon(1e-12));

        // L equal unit taps square with L
        Cir many;
        many.lambda0_m = 1.0;
        for (int l = 0; l < 7; ++l) {
            CirTap tap;
            tap.delay_s = l * 5e-9;
            tap.gain = Mat2c::Zero();
            tap.gain(0, 0) = 1.0;
            many.taps.push_back(tap);
        }
        CHECK(snr(many, link, 0.0) == doctest::Approx(49.0).epsilon(1e-12));
        CHECK(snr(many, link, 0.0, true) == doctest::Approx(7.0).epsilon(1e-12));
    }

    TEST_CASE("mimo capacity")
    {
        CHECK(mimo_capacity(Mat2c::Zero(), 10.0) == doctest::Approx(0.0));
        CHECK(mimo_capacity(Mat2c::Identity(), 2.0) == doctest::Approx(2.0).epsilon(1e-12));

        // orthogonal beats rank-1 at equal Frobenius norm
        Mat2c rank1 = Mat2c::Zero();
        rank1(0, 0) = std::sqrt(2.0);
        const double c_rank1 = mimo_capacity(rank1, 4.0);
        const double c_orth = mimo_capacity(Mat2c::Identity(), 4.0);
        CHECK(c_orth > c_rank1);

        CHECK(capacity_mbps(10.0, 100e6, 571.1) == doctest::Approx(571.1));
        CHECK(capacity_mbps(2.0, 100e6, 571.1) == doctest::Approx(200.0));
    }

    TEST_CASE("fading distribution fits")
    {
        std::mt19937_64 rng(5);
        const std::size_t n = 100000;

        // shape-2 weibull equals a rayleigh; both fits agree
        std::weibull_distribution<double> wb2(2.0, 1.3);
        std::vector<double> w2(n);
        for (double &x : w2)
            x = wb2(rng);
        const DistributionFit wfit = fit_fading_distribution(w2, FadingFamily::weibull);
        CHECK(wfit.params[0] >= 1.95);
        CHECK(wfit.params[0] <= 2.05);
        CHECK(wfit.params[1] == doctest::Approx(1.3).epsilon(0.05));
        const DistributionFit rfit = fit_fading_distribution(w2, FadingFamily::rayleigh);
        CHECK(rfit.params[0] == doctest::Approx(1.3 / std::sqrt(2.0)).epsilon(0.05));

        std::lognormal_distribution<double> ln(0.0, 0.5);
        std::vector<double> lsamples(n);
        for (double &x : lsamples)
            x = ln(rng);
        const DistributionFit lfit = fit_fading_distribution(lsamples, FadingFamily::lognormal);
        CHECK(lfit.params[1] >= 0.49);
        CHECK(lfit.params[1] <= 0.51);
        CHECK(lfit.ks_stat < 0.01);

        CHECK_THROWS_AS(fit_fading_distribution({1.0, 2.0}, FadingFamily::weibull),
                        std::invalid_argument);
        std::vector<double> with_zero(2000, 1.0);
        with_zero[17] = 0.0;
        CHECK_THROWS_AS(fit_fading_distribution(with_zero, FadingFamily::lognormal),
                        std::invalid_argument);
        std::vector<double> flat(2000, 3.0);
        CHECK_THROWS_AS(fit_fading_distribution(flat, FadingFamily::rayleigh), estimation_error);
    }

    TEST_CASE("family ranking prefers the generator")
    {
        std::mt19937_64 rng(11);
        std::weibull_distribution<double> wb(1.4, 1.0);
        int correct = 0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> samples(2000);
            for (double &x : samples)
                x = wb(rng);
            const auto ranked = rank_fading_distributions(samples);
            if (ranked.front().family == FadingFamily::weibull)
                ++correct;
        }
        CHECK(correct >= 95);
    }

    TEST_CASE("ci ple regression")
    {
        const double lambda = 0.0857;
        PathLossParams p;
        p.gamma1 = 2.0;
        p.gamma2 = 1.8;

        // noiseless synthetic recovery
        std::vector<PlePoint> points;
        for (double d2 = 1.0; d2 <= 10.0; d2 += 1.0)
            points.push_back({1.0, d2, ci_path_loss(p, lambda, 1.0, d2)});
        const PleFit fit = fit_ci_ple(points, lambda);
        CHECK(fit.gamma2_identified);
        CHECK(fit.gamma2 == doctest::Approx(1.8).epsilon(0.01 / 1.8));
        CHECK(!fit.gamma1_identified); // d1 pinned at the reference distance

        // two-leg noiseless recovery
        std::vector<PlePoint> both;
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(1.0, 12.0);
        for (int i = 0; i < 100; ++i) {
            const double d1 = u(rng), d2 = u(rng);
            both.push_back({d1, d2, ci_path_loss(p, lambda, d1, d2)});
        }
        const PleFit fit2 = fit_ci_ple(both, lambda);
        CHECK(fit2.gamma1 == doctest::Approx(2.0).epsilon(0.05 / 2.0));
        CHECK(fit2.gamma2 == doctest::Approx(1.8).epsilon(0.05 / 1.8));
        CHECK(fit2.sigma_sf_db < 1e-9);

        // a constant bias moves only the fitted offset
        std::vector<PlePoint> biased = both;
        for (PlePoint &pt : biased)
            pt.pl_db += 7.5;
        const PleFit fit3 = fit_ci_ple(biased, lambda, 1.0, true);
        CHECK(fit3.gamma1 == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(fit3.gamma2 == doctest::Approx(1.8).epsilon(1e-6));
        CHECK(fit3.intercept_db == doctest::Approx(7.5).epsilon(1e-6));

        // no distance diversity at all
        std::vector<PlePoint> flat = {{2.0, 2.0, 80.0}, {2.0, 2.0, 81.0}, {2.0, 2.0, 82.0}};
        CHECK_THROWS_AS(fit_ci_ple(flat, lambda), estimation_error);
    }

    TEST_CASE("measured distance sweep yields a sub-2 exponent")
    {
        // distance sweep of the surface-on campaign, 1..10 m
        const std::vector<double> pl = {76.8, 83.1, 89.5, 88.4, 94.8, 95.1, 95.6, 99.0, 93.0, 94.9};
        std::vector<PlePoint> points;
        for (std::size_t i = 0; i < pl.size(); ++i)
            points.push_back({5.0, static_cast<double>(i + 1), pl[i]});
        const PleFit fit = fit_ci_ple(points, 0.0857, 1.0, true);
        CHECK(fit.gamma2_identified);
        CHECK(fit.gamma2 > 1.4);
        CHECK(fit.gamma2 < 2.0);
    }

    TEST_CASE("cluster decay fit")
    {
        // generator oracle on the published 40-degree profile shape
        Pdp pdp;
        pdp.resolution_s = 1e-9;
        pdp.power.resize(40);
        for (std::size_t i = 0; i < pdp.power.size(); ++i) {
            const double tau_ns = pdp.delay_of_bin(i) * 1e9;
            pdp.power[i] = 10.0 * std::exp(-1.9 * tau_ns) + 1e-3;
        }
        const ClusterDecayFit fit = fit_cluster_decay(pdp);
        CHECK(fit.a == doctest::Approx(10.0).epsilon(0.05));
        CHECK(fit.b == doctest::Approx(1.9).epsilon(0.05));

        // scaling the powers scales a and c, not b
        Pdp scaled = pdp;
        for (double &p : scaled.power)
            p *= 13.0;
        const ClusterDecayFit sfit = fit_cluster_decay(scaled);
        CHECK(sfit.a == doctest::Approx(13.0 * fit.a).epsilon(1e-6));
        CHECK(sfit.c == doctest::Approx(13.0 * fit.c).epsilon(1e-3));
        CHECK(sfit.b == doctest::Approx(fit.b).epsilon(1e-6));

        // a pure floor leaves the rate unidentifiable
        Pdp flat;
        flat.resolution_s = 1e-9;
        flat.power.assign(20, 1e-3);
        CHECK_THROWS_AS(fit_cluster_decay(flat), estimation_error);
    }

    TEST_CASE("codebook selection minimizes the delay spread")
    {
        Scenario sc = Scenario::defaults();
        sc.gbsm.clusters = 6;
        sc.gbsm.rays_per_cluster = 8;
        sc.gbsm.k_factor_db = 12.0;
        const double ue_angle = 40.0;
        const Vec3 ue_pos = spherical_to_cartesian({deg2rad(ue_angle), deg2rad(90.0), 2.0});

        GbsmScene scene;
        scene.bs_position = sc.bs.position;
        scene.ue_position = ue_pos;
        scene.lambda0_m = sc.lambda0_m();
        scene.time_grid_s = {0.0};

        std::mt19937_64 rng(31);
        const ClusterSet clusters = generate_clusters(sc.gbsm, rng);
        const ClusterSet direct = generate_bs_ue_clusters(sc.gbsm, rng);

        std::vector<Codebook> bank;
        for (int i = 0; i < 12; ++i) {
            const double theta = deg2rad(5.0 + 5.0 * i);
            bank.push_back(nf_codebook(sc.ris, sc.bs.position,
                                       spherical_to_cartesian({theta, deg2rad(90.0), 2.0}),
                                       scene.lambda0_m));
        }

        CodebookBankEvaluator eval{sc.ris,  scene,   clusters, sc.gbsm.k_factor_db,
                                   1.0,     0.125,   &direct,  1.25e-9};
        const std::size_t chosen = select_codebook_min_ds(bank, eval, 0.0);
        const double chosen_deg = 5.0 + 5.0 * static_cast<double>(chosen);
        CHECK(std::abs(chosen_deg - ue_angle) <= 5.0);

        // single-entry bank returns that entry
        const std::vector<Codebook> one = {bank[2]};
        CHECK(select_codebook_min_ds(one, eval, 0.0) == 0);

        // the bandwidth criterion picks the same entry
        double best_bc = -1.0;
        std::size_t best_bc_idx = 0;
        for (std::size_t i = 0; i < bank.size(); ++i) {
            const RisPattern pat =
                RisPattern::from_codebook(sc.ris, bank[i], scene.bs_position, scene.lambda0_m);
            const Cir leg_bs =
                bs_ris_cir(scene, AntennaPattern::isotropic(), AntennaPattern::isotropic());
            const Cir leg_ue = ris_ue_cir(scene, pat, clusters, sc.gbsm.k_factor_db);
            const Cir full = cascade_cir(leg_bs, leg_ue, scale_cir(bs_ue_cir(scene, direct), 0.125));
            const double bc =
                coherence_bandwidth(rms_delay_spread(pdp_from_cir(full, 1.25e-9, 0.0)));
            if (bc > best_bc) {
                best_bc = bc;
                best_bc_idx = i;
            }
        }
        CHECK(best_bc_idx == chosen);

        CHECK_THROWS_AS(select_codebook_min_ds({}, eval, 0.0), std::invalid_argument);
    }

    TEST_CASE("regenerated delay spreads follow the configured scales")
    {
        // 40-degree anchor pair: surface-on vs direct-only generator inputs
        GbsmConfig on;
        on.k_factor_db = 12.6;
        on.delay_spread_s = 11.5e-9;
        on.clusters = 10;
        on.rays_per_cluster = 17;
        on.zeta_db = 2.1;
        GbsmConfig off = on;
        off.k_factor_db = -2.1;
        off.delay_spread_s = 25.9e-9;
        off.zeta_db = 3.0;
        off.rays_per_cluster = 6;

        GbsmScene scene;
        scene.bs_position = {0, 0, 5};
        scene.ue_position = spherical_to_cartesian({deg2rad(40.0), deg2rad(90.0), 2.0});
        scene.lambda0_m = 0.0857;
        scene.time_grid_s = {0.0};

        double sum_on = 0.0, sum_off = 0.0;
        const int seeds = 40;
        for (int s = 1; s <= seeds; ++s) {
            std::mt19937_64 ra(s), rb(s + 1000);
            const Cir cir_on =
                ris_ue_cir(scene, RisPattern::unit_pattern(), generate_clusters(on, ra), 12.6);
            const Cir cir_off =
                ris_ue_cir(scene, RisPattern::unit_pattern(), generate_clusters(off, rb), -2.1);
            sum_on += rms_delay_spread(pdp_from_cir(cir_on, 1.25e-9, 0.0));
            sum_off += rms_delay_spread(pdp_from_cir(cir_off, 1.25e-9, 0.0));
        }
        const double ratio = sum_on / sum_off;
        CHECK(ratio > 0.24);
        CHECK(ratio < 0.64);
    }
}
