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
#include "risim/experiments.hpp"
#include "risim/io.hpp"
#include "risim/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

// Environment overrides: RIS_SIM_SEED, RIS_SIM_OUT, RIS_SIM_FORMAT.
std::optional<std::string> env_get(const char *name)
{
    const char *v = std::getenv(name);
    if (v && *v)
        return std::string(v);
    return std::nullopt;
}

risim::Scenario load_or_default(const std::string &config, std::uint64_t seed_flag,
                                bool seed_given)
{
    risim::Scenario sc =
        config.empty() ? risim::Scenario::defaults() : risim::load_scenario(config);
    if (seed_given)
        sc.seed = seed_flag;
    if (auto env_seed = env_get("RIS_SIM_SEED"))
        sc.seed = std::stoull(*env_seed);
    sc.gbsm.seed = sc.seed;
    return sc;
}

std::vector<double> parse_list(const std::string &text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ','))
        out.push_back(std::stod(field));
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"RIS radar/communication coexistence simulation toolkit"};
    app.require_subcommand(1);

    std::string config;
    std::uint64_t seed = 1;
    bool seed_given = false;
    std::string out_dir = "out";
    std::string format = "json";
    app.add_option("--config", config, "scenario JSON file")->capture_default_str();
    app.add_option("--seed", seed, "override the scenario seed")
        ->each([&seed_given](const std::string &) { seed_given = true; });
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--format", format, "report format: csv | json | both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();

    // codebook
    auto *cb_cmd = app.add_subcommand("codebook", "synthesize a phase codebook and its pattern");
    std::string regime = "nf";
    double theta_deg = 40.0, phi_deg = 90.0, dist_m = 2.0;
    bool no_quantize = false;
    cb_cmd->add_option("--regime", regime, "nf | ff")->check(CLI::IsMember({"nf", "ff"}));
    cb_cmd->add_option("--theta-deg", theta_deg, "steering zenith angle");
    cb_cmd->add_option("--phi-deg", phi_deg, "steering azimuth");
    cb_cmd->add_option("--dist-m", dist_m, "focal distance (near field)");
    cb_cmd->add_flag("--no-quantize", no_quantize, "emit the continuous phase profile");

    // simulate
    auto *sim_cmd = app.add_subcommand("simulate", "channel statistics over an angle/distance grid");
    std::string angles = "5,10,15,20,25,30,35,40,45,50,55,60";
    std::string dists = "2";
    bool ris_off = false;
    sim_cmd->add_option("--angles-deg", angles, "comma separated sweep angles");
    sim_cmd->add_option("--distances-m", dists, "comma separated distances");
    sim_cmd->add_flag("--ris-off", ris_off, "direct (blocked LoS) channel only");

    // harden
    auto *hd_cmd = app.add_subcommand("harden", "tracked-surface throughput experiment");
    std::string preset = "circle_2m";
    bool no_tracking = false;
    hd_cmd->add_option("--preset", preset, "circle_2m | circle_4m")
        ->check(CLI::IsMember({"circle_2m", "circle_4m"}));
    hd_cmd->add_flag("--no-tracking", no_tracking, "hold the initial codebook");

    // crlb
    auto *crlb_cmd = app.add_subcommand("crlb", "localization bound sweep");
    risim::CrlbGrid grid;
    crlb_cmd->add_option("--x-min", grid.x_min);
    crlb_cmd->add_option("--x-max", grid.x_max);
    crlb_cmd->add_option("--y-min", grid.y_min);
    crlb_cmd->add_option("--y-max", grid.y_max);
    crlb_cmd->add_option("--nx", grid.nx);
    crlb_cmd->add_option("--ny", grid.ny);

    // track
    auto *tr_cmd = app.add_subcommand("track", "run the tracking loop on a frame stream");
    std::string frames_file;
    tr_cmd->add_option("--frames", frames_file, "JSON-lines frame stream (synthesized if absent)");

    // fit
    auto *fit_cmd = app.add_subcommand("fit", "estimate channel parameters from a file");
    std::string what = "ple";
    std::string input;
    bool with_intercept = false;
    double fit_lambda = 0.0857;
    fit_cmd->add_option("--what", what, "ple | kfactor | decay | distribution")
        ->check(CLI::IsMember({"ple", "kfactor", "decay", "distribution"}));
    fit_cmd->add_option("--input", input, "input CSV")->required();
    fit_cmd->add_flag("--estimate-intercept", with_intercept,
                      "fit a free offset on top of the CI intercept");
    fit_cmd->add_option("--lambda-m", fit_lambda, "wavelength for the CI intercept");

    for (CLI::App *sub : app.get_subcommands([](const CLI::App *) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (auto env_out = env_get("RIS_SIM_OUT"))
        out_dir = *env_out;
    if (auto env_fmt = env_get("RIS_SIM_FORMAT"))
        format = *env_fmt;

    try {
        const risim::Scenario sc = load_or_default(config, seed, seed_given);

        if (cb_cmd->parsed()) {
            const auto files =
                risim::cmd_codebook(sc, regime, theta_deg, phi_deg, dist_m, !no_quantize, out_dir);
            std::cout << files.codebook_csv << "\n" << files.pattern_csv << "\n";
        } else if (sim_cmd->parsed()) {
            const auto report = risim::cmd_simulate(sc, parse_list(angles), parse_list(dists),
                                                    !ris_off);
            risim::write_run_report(report, out_dir, format);
            std::cout << "points: " << report.points.size() << ", config_hash: " << std::hex
                      << report.config_hash << std::dec << "\n";
        } else if (hd_cmd->parsed()) {
            const auto report = risim::cmd_harden(sc, preset, !no_tracking);
            risim::write_harden_report(report, out_dir);
            std::cout << "mean_on " << report.mean_on_mbps << " Mbps, mean_off "
                      << report.mean_off_mbps << " Mbps, std_reduction "
                      << report.std_reduction * 100.0 << "%\n";
        } else if (crlb_cmd->parsed()) {
            const auto rows = risim::cmd_crlb(sc, grid);
            std::filesystem::create_directories(out_dir);
            risim::write_crlb_csv(rows, (std::filesystem::path(out_dir) / "crlb.csv").string());
            std::cout << rows.size() << " grid points\n";
        } else if (tr_cmd->parsed()) {
            const auto result = risim::cmd_track(
                sc, frames_file.empty() ? std::nullopt : std::make_optional(frames_file));
            std::filesystem::create_directories(out_dir);
            risim::write_track_csv(result.rows,
                                   (std::filesystem::path(out_dir) / "track.csv").string());
            if (frames_file.empty())
                risim::write_frames_jsonl(
                    result.frames, (std::filesystem::path(out_dir) / "frames.jsonl").string());
            std::cout << result.rows.size() << " loop records\n";
        } else if (fit_cmd->parsed()) {
            const std::string report = risim::cmd_fit(what, input, with_intercept, fit_lambda);
            std::filesystem::create_directories(out_dir);
            std::ofstream out((std::filesystem::path(out_dir) / "fit.json").string());
            out << report << "\n";
            std::cout << report << "\n";
        }
        return exit_ok;
    } catch (const risim::io_error &e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_io;
    } catch (const risim::numerical_error &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const risim::estimation_error &e) {
        std::cerr << "estimation failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const risim::config_error &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}
