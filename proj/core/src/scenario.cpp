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

#include "risim/scenario.hpp"

#include "risim/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace risim {

using nlohmann::json;

namespace {

json vec3_to_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json &j)
{
    if (!j.is_array() || j.size() != 3)
        throw config_error("scenario: expected [x, y, z] array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json terminal_to_json(const TerminalConfig &t)
{
    json j;
    j["position_m"] = vec3_to_json(t.position);
    j["pattern"] = t.pattern_kind;
    j["gain_dbi"] = t.gain_dbi;
    json wps = json::array();
    for (const auto &w : t.trajectory.waypoints)
        wps.push_back({{"t_s", w.t}, {"position_m", vec3_to_json(w.position)}});
    j["trajectory"] = wps;
    json elems = json::array();
    for (const auto &e : t.array.element_positions)
        elems.push_back(vec3_to_json(e));
    j["array_elements_m"] = elems;
    return j;
}

TerminalConfig terminal_from_json(const json &j)
{
    TerminalConfig t;
    t.position = vec3_from_json(j.at("position_m"));
    t.pattern_kind = j.at("pattern").get<std::string>();
    t.gain_dbi = j.at("gain_dbi").get<double>();
    t.trajectory.waypoints.clear();
    for (const auto &w : j.at("trajectory"))
        t.trajectory.waypoints.push_back(
            {w.at("t_s").get<double>(), vec3_from_json(w.at("position_m"))});
    t.array.element_positions.clear();
    for (const auto &e : j.at("array_elements_m"))
        t.array.element_positions.push_back(vec3_from_json(e));
    if (t.array.element_positions.empty())
        t.array = ArrayLayout::single();
    return t;
}

json scenario_to_json(const Scenario &s)
{
    json j;
    j["schema_version"] = s.schema_version;
    j["carrier_hz"] = s.carrier_hz;
    j["bandwidth_hz"] = s.bandwidth_hz;
    j["seed"] = s.seed;
    j["sweep_plane_phi_deg"] = s.sweep_plane_phi_deg;

    json ris;
    ris["rows"] = s.ris.rows;
    ris["cols"] = s.ris.cols;
    ris["spacing_m"] = s.ris.spacing_m;
    ris["aperture_x_m"] = s.ris.aperture_x_m;
    ris["aperture_y_m"] = s.ris.aperture_y_m;
    ris["chi"] = s.ris.chi;
    ris["bit_depth"] = s.ris.bit_depth;
    j["ris"] = ris;

    j["bs"] = terminal_to_json(s.bs);
    j["ue"] = terminal_to_json(s.ue);

    json g;
    g["k_factor_db"] = s.gbsm.k_factor_db;
    g["delay_spread_ns"] = s.gbsm.delay_spread_s * 1e9;
    g["omega_tau"] = s.gbsm.omega_tau;
    g["zeta_db"] = s.gbsm.zeta_db;
    g["clusters"] = s.gbsm.clusters;
    g["rays_per_cluster"] = s.gbsm.rays_per_cluster;
    g["bs_ue_clusters"] = s.gbsm.bs_ue_clusters;
    g["bs_ue_rays"] = s.gbsm.bs_ue_rays;
    g["xpr_mu_db"] = s.gbsm.xpr_mu_db;
    g["xpr_sigma_db"] = s.gbsm.xpr_sigma_db;
    g["ray_angle_spread_deg"] = rad2deg(s.gbsm.ray_angle_spread_rad);
    g["intra_cluster_delay_spread_ns"] = s.gbsm.intra_cluster_delay_spread_s * 1e9;
    g["dual_polarized"] = s.gbsm.dual_polarized;
    j["gbsm"] = g;

    json pl;
    pl["gamma1"] = s.pathloss.gamma1;
    pl["gamma2"] = s.pathloss.gamma2;
    pl["d0_m"] = s.pathloss.d0_m;
    pl["sigma_sf_db"] = s.pathloss.sigma_sf_db;
    if (s.pathloss.cif)
        pl["cif"] = {{"f0_hz", s.pathloss.cif->f0_hz}, {"beta", s.pathloss.cif->beta}};
    else
        pl["cif"] = nullptr;
    j["pathloss"] = pl;

    j["direct"] = {{"gamma", s.direct.gamma}, {"blockage_db", s.direct.blockage_db}};

    j["link"] = {{"g_tx_dbi", s.link.g_tx_dbi},
                 {"g_rx_dbi", s.link.g_rx_dbi},
                 {"p_tx_dbm", s.link.p_tx_dbm},
                 {"noise_var", s.link.noise_var}};

    json tr;
    tr["snr_min_db"] = s.tracker.snr_min_db;
    tr["suppress_static"] = s.tracker.suppress_static;
    tr["static_velocity_threshold_m_s"] = s.tracker.static_velocity_threshold;
    tr["eps_m"] = s.tracker.eps_m;
    tr["min_pts"] = s.tracker.min_pts;
    tr["agg_frames"] = s.tracker.agg_frames;
    tr["confirm_frames"] = s.tracker.confirm_frames;
    tr["kalman_angle_q"] = s.tracker.kalman_angle.q;
    tr["kalman_angle_r"] = s.tracker.kalman_angle.r;
    tr["kalman_range_q"] = s.tracker.kalman_range.q;
    tr["kalman_range_r"] = s.tracker.kalman_range.r;
    tr["dt_nominal_s"] = s.tracker.dt_nominal_s;
    j["tracker"] = tr;

    json rd;
    json txs = json::array(), rxs = json::array();
    for (const auto &p : s.radar.tx_positions)
        txs.push_back(vec3_to_json(p));
    for (const auto &p : s.radar.rx_positions)
        rxs.push_back(vec3_to_json(p));
    rd["tx_positions_m"] = txs;
    rd["rx_positions_m"] = rxs;
    rd["lambda_m"] = s.radar.lambda_m;
    rd["noise_sigma2"] = s.radar.noise_sigma2;
    j["radar"] = rd;

    j["room_min_m"] = vec3_to_json(s.room_min_m);
    j["room_max_m"] = vec3_to_json(s.room_max_m);
    j["throughput_bandwidth_hz"] = s.throughput_bandwidth_hz;
    j["max_throughput_mbps"] = s.max_throughput_mbps;
    return j;
}

Scenario scenario_from_json(const json &j)
{
    Scenario s;
    s.schema_version = j.at("schema_version").get<int>();
    if (s.schema_version != 1)
        throw config_error("scenario: unsupported schema version");
    s.carrier_hz = j.at("carrier_hz").get<double>();
    s.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.sweep_plane_phi_deg = j.at("sweep_plane_phi_deg").get<double>();

    const json &ris = j.at("ris");
    s.ris.rows = ris.at("rows").get<int>();
    s.ris.cols = ris.at("cols").get<int>();
    s.ris.spacing_m = ris.at("spacing_m").get<double>();
    s.ris.aperture_x_m = ris.at("aperture_x_m").get<double>();
    s.ris.aperture_y_m = ris.at("aperture_y_m").get<double>();
    s.ris.chi = ris.at("chi").get<double>();
    s.ris.bit_depth = ris.at("bit_depth").get<int>();

    s.bs = terminal_from_json(j.at("bs"));
    s.ue = terminal_from_json(j.at("ue"));

    const json &g = j.at("gbsm");
    s.gbsm.k_factor_db = g.at("k_factor_db").get<double>();
    s.gbsm.delay_spread_s = g.at("delay_spread_ns").get<double>() * 1e-9;
    s.gbsm.omega_tau = g.at("omega_tau").get<double>();
    s.gbsm.zeta_db = g.at("zeta_db").get<double>();
    s.gbsm.clusters = g.at("clusters").get<int>();
    s.gbsm.rays_per_cluster = g.at("rays_per_cluster").get<int>();
    s.gbsm.bs_ue_clusters = g.at("bs_ue_clusters").get<int>();
    s.gbsm.bs_ue_rays = g.at("bs_ue_rays").get<int>();
    s.gbsm.xpr_mu_db = g.at("xpr_mu_db").get<double>();
    s.gbsm.xpr_sigma_db = g.at("xpr_sigma_db").get<double>();
    s.gbsm.ray_angle_spread_rad = deg2rad(g.at("ray_angle_spread_deg").get<double>());
    s.gbsm.intra_cluster_delay_spread_s =
        g.at("intra_cluster_delay_spread_ns").get<double>() * 1e-9;
    s.gbsm.dual_polarized = g.at("dual_polarized").get<bool>();
    s.gbsm.seed = s.seed;

    const json &pl = j.at("pathloss");
    s.pathloss.gamma1 = pl.at("gamma1").get<double>();
    s.pathloss.gamma2 = pl.at("gamma2").get<double>();
    s.pathloss.d0_m = pl.at("d0_m").get<double>();
    s.pathloss.sigma_sf_db = pl.at("sigma_sf_db").get<double>();
    if (!pl.at("cif").is_null())
        s.pathloss.cif = CifParams{pl.at("cif").at("f0_hz").get<double>(),
                                   pl.at("cif").at("beta").get<double>()};

    s.direct.gamma = j.at("direct").at("gamma").get<double>();
    s.direct.blockage_db = j.at("direct").at("blockage_db").get<double>();

    const json &lk = j.at("link");
    s.link.g_tx_dbi = lk.at("g_tx_dbi").get<double>();
    s.link.g_rx_dbi = lk.at("g_rx_dbi").get<double>();
    s.link.p_tx_dbm = lk.at("p_tx_dbm").get<double>();
    s.link.noise_var = lk.at("noise_var").get<double>();

    const json &tr = j.at("tracker");
    s.tracker.snr_min_db = tr.at("snr_min_db").get<double>();
    s.tracker.suppress_static = tr.at("suppress_static").get<bool>();
    s.tracker.static_velocity_threshold = tr.at("static_velocity_threshold_m_s").get<double>();
    s.tracker.eps_m = tr.at("eps_m").get<double>();
    s.tracker.min_pts = tr.at("min_pts").get<int>();
    s.tracker.agg_frames = tr.at("agg_frames").get<int>();
    s.tracker.confirm_frames = tr.at("confirm_frames").get<int>();
    s.tracker.kalman_angle.q = tr.at("kalman_angle_q").get<double>();
    s.tracker.kalman_angle.r = tr.at("kalman_angle_r").get<double>();
    s.tracker.kalman_range.q = tr.at("kalman_range_q").get<double>();
    s.tracker.kalman_range.r = tr.at("kalman_range_r").get<double>();
    s.tracker.dt_nominal_s = tr.at("dt_nominal_s").get<double>();

    const json &rd = j.at("radar");
    s.radar = RadarConfig::default_array(rd.at("lambda_m").get<double>());
    s.radar.tx_positions.clear();
    s.radar.rx_positions.clear();
    for (const auto &p : rd.at("tx_positions_m"))
        s.radar.tx_positions.push_back(vec3_from_json(p));
    for (const auto &p : rd.at("rx_positions_m"))
        s.radar.rx_positions.push_back(vec3_from_json(p));
    s.radar.noise_sigma2 = rd.at("noise_sigma2").get<double>();
    s.radar.precoder = Eigen::MatrixXd::Identity(
        static_cast<Eigen::Index>(s.radar.tx_positions.size()),
        static_cast<Eigen::Index>(s.radar.tx_positions.size()));
    s.radar.s = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(s.radar.tx_positions.size()));

    s.room_min_m = vec3_from_json(j.at("room_min_m"));
    s.room_max_m = vec3_from_json(j.at("room_max_m"));
    s.throughput_bandwidth_hz = j.at("throughput_bandwidth_hz").get<double>();
    s.max_throughput_mbps = j.at("max_throughput_mbps").get<double>();
    return s;
}

} // namespace

AntennaPattern TerminalConfig::pattern_toward(const Vec3 &aim) const
{
    if (pattern_kind == "horn")
        return AntennaPattern::horn(gain_dbi, aim);
    if (pattern_kind == "isotropic")
        return AntennaPattern::isotropic();
    throw config_error("terminal: unknown pattern kind '" + pattern_kind + "'");
}

void Scenario::validate() const
{
    if (!(carrier_hz > 0.0))
        throw config_error("scenario: carrier frequency must be positive");
    if (!(bandwidth_hz > 0.0) || bandwidth_hz > carrier_hz)
        throw config_error("scenario: bandwidth must be positive and below the carrier");
    ris.validate();
    gbsm.validate();
    pathloss.validate();
    link.validate();
    tracker.validate();
    radar.validate();
    if (!bs.trajectory.waypoints.empty())
        bs.trajectory.validate();
    if (!ue.trajectory.waypoints.empty())
        ue.trajectory.validate();
}

Scenario Scenario::defaults()
{
    Scenario s;
    s.bs.position = {0.0, 0.0, 5.0};
    s.bs.pattern_kind = "horn";
    s.bs.gain_dbi = 20.0;
    s.ue.position = spherical_to_cartesian({deg2rad(40.0), deg2rad(90.0), 2.0});
    s.ue.pattern_kind = "isotropic";
    s.ue.gain_dbi = 0.0;
    s.link.p_tx_dbm = 17.0;
    s.link.noise_var = 1e-9; // -90 dBm
    s.tracker.kalman_angle = {5e-3, 1e-3};
    s.tracker.kalman_range = {5e-3, 4e-3};
    return s;
}

Scenario load_scenario(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw io_error("scenario parse failure in " + path + ": " + e.what());
    }
    try {
        Scenario s = scenario_from_json(j);
        s.validate();
        return s;
    } catch (const json::exception &e) {
        throw config_error("scenario field error in " + path + ": " + e.what());
    }
}

void save_scenario(const Scenario &s, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot write scenario file: " + path);
    out << scenario_to_json(s).dump(2) << "\n";
}

std::string scenario_canonical_json(const Scenario &s) { return scenario_to_json(s).dump(); }

std::uint64_t config_hash(const Scenario &s)
{
    const std::string text = scenario_canonical_json(s);
    std::uint64_t h = 1469598103934665603ull; // FNV offset basis
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace risim
