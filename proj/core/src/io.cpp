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

#include "risim/io.hpp"

#include "risim/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace risim {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot write file: " + path);
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    return out;
}

std::ifstream open_in(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open file: " + path);
    return in;
}

std::vector<double> split_csv_row(const std::string &line, const std::string &path)
{
    std::vector<double> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            out.push_back(std::stod(field));
        } catch (const std::exception &) {
            throw io_error("bad numeric field '" + field + "' in " + path);
        }
    }
    return out;
}

void expect_header(std::istream &in, const std::string &expected, const std::string &path)
{
    std::string line;
    if (!std::getline(in, line))
        throw io_error("empty file: " + path);
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != expected)
        throw io_error("unexpected header in " + path + ": got '" + line + "'");
}

} // namespace

void write_codebook_csv(const Codebook &cb, const std::string &path)
{
    cb.validate();
    auto out = open_out(path);
    for (int m = 0; m < cb.rows; ++m) {
        for (int n = 0; n < cb.cols; ++n)
            out << (n ? "," : "") << cb.at(m, n);
        out << "\n";
    }
}

Codebook read_codebook_csv(const std::string &path)
{
    auto in = open_in(path);
    Codebook cb;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto row = split_csv_row(line, path);
        if (cb.cols == 0)
            cb.cols = static_cast<int>(row.size());
        else if (cb.cols != static_cast<int>(row.size()))
            throw io_error("ragged codebook matrix in " + path);
        cb.phases.insert(cb.phases.end(), row.begin(), row.end());
        ++cb.rows;
    }
    cb.validate();
    return cb;
}

void write_pattern_csv(const std::vector<PatternSample> &samples, const std::string &path)
{
    auto out = open_out(path);
    out << "theta_deg,phi_deg,gain_dB\n";
    for (const PatternSample &s : samples)
        out << rad2deg(s.direction.theta) << "," << rad2deg(s.direction.phi) << "," << s.power_db
            << "\n";
}

std::vector<PatternSample> read_pattern_csv(const std::string &path)
{
    auto in = open_in(path);
    expect_header(in, "theta_deg,phi_deg,gain_dB", path);
    std::vector<PatternSample> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto row = split_csv_row(line, path);
        if (row.size() != 3)
            throw io_error("pattern rows need 3 fields in " + path);
        PatternSample s;
        s.direction.theta = deg2rad(row[0]);
        s.direction.phi = deg2rad(row[1]);
        s.direction.r = 0.0;
        s.power_db = row[2];
        samples.push_back(s);
    }
    return samples;
}

void write_cir_csv(const Cir &cir, const std::string &path)
{
    auto out = open_out(path);
    out << "t_s,tap_index,delay_s,re_thth,im_thth,re_thph,im_thph,re_phth,im_phth,re_phph,"
           "im_phph\n";
    const std::vector<double> grid = cir.time_grid_s.empty() ? std::vector<double>{0.0}
                                                             : cir.time_grid_s;
    for (double t : grid) {
        for (std::size_t i = 0; i < cir.taps.size(); ++i) {
            const CirTap &tap = cir.taps[i];
            const Mat2c g = tap.gain * std::polar(1.0, tap.doppler_rad_s * t);
            out << t << "," << i << "," << tap.delay_s;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    out << "," << g(r, c).real() << "," << g(r, c).imag();
            out << "\n";
        }
    }
}

Cir read_cir_csv(const std::string &path)
{
    auto in = open_in(path);
    expect_header(in,
                  "t_s,tap_index,delay_s,re_thth,im_thth,re_thph,im_thph,re_phth,im_phth,re_phph,"
                  "im_phph",
                  path);
    Cir cir;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto row = split_csv_row(line, path);
        if (row.size() != 11)
            throw io_error("cir rows need 11 fields in " + path);
        if (row[0] != 0.0)
            continue; // the format stores snapshots; taps are rebuilt from t=0
        CirTap tap;
        tap.delay_s = row[2];
        tap.gain(0, 0) = {row[3], row[4]};
        tap.gain(0, 1) = {row[5], row[6]};
        tap.gain(1, 0) = {row[7], row[8]};
        tap.gain(1, 1) = {row[9], row[10]};
        cir.taps.push_back(tap);
    }
    cir.time_grid_s = {0.0};
    return cir;
}

void write_crlb_csv(const std::vector<CrlbSample> &rows, const std::string &path)
{
    auto out = open_out(path);
    out << "x_m,y_m,crlb_m2\n";
    for (const CrlbSample &r : rows)
        out << r.x_m << "," << r.y_m << "," << r.crlb_m2 << "\n";
}

std::vector<CrlbSample> read_crlb_csv(const std::string &path)
{
    auto in = open_in(path);
    expect_header(in, "x_m,y_m,crlb_m2", path);
    std::vector<CrlbSample> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto row = split_csv_row(line, path);
        if (row.size() != 3)
            throw io_error("crlb rows need 3 fields in " + path);
        rows.push_back({row[0], row[1], row[2]});
    }
    return rows;
}

void write_frames_jsonl(const std::vector<Frame> &frames, const std::string &path)
{
    auto out = open_out(path);
    for (const Frame &f : frames) {
        json points = json::array();
        for (const RadarPoint &p : f.points)
            points.push_back({{"x", p.x},
                              {"y", p.y},
                              {"z", p.z},
                              {"az", p.azimuth},
                              {"snr", p.snr_db},
                              {"v", p.velocity}});
        out << json{{"t", f.timestamp}, {"points", points}}.dump() << "\n";
    }
}

std::vector<Frame> read_frames_jsonl(const std::string &path)
{
    auto in = open_in(path);
    std::vector<Frame> frames;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception &e) {
            throw io_error("bad frame on line " + std::to_string(lineno) + " of " + path + ": " +
                           e.what());
        }
        Frame f;
        f.timestamp = j.at("t").get<double>();
        for (const auto &p : j.at("points")) {
            RadarPoint pt;
            pt.x = p.at("x").get<double>();
            pt.y = p.at("y").get<double>();
            pt.z = p.at("z").get<double>();
            pt.azimuth = p.at("az").get<double>();
            pt.snr_db = p.at("snr").get<double>();
            pt.velocity = p.at("v").get<double>();
            f.points.push_back(pt);
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

void write_track_csv(const std::vector<TrackRecordRow> &rows, const std::string &path)
{
    auto out = open_out(path);
    out << "t_s,theta_deg,phi_deg,r_m,index,updated\n";
    for (const TrackRecordRow &r : rows)
        out << r.t_s << "," << r.theta_deg << "," << r.phi_deg << "," << r.r_m << "," << r.index
            << "," << (r.updated ? 1 : 0) << "\n";
}

std::vector<TrackRecordRow> read_track_csv(const std::string &path)
{
    auto in = open_in(path);
    expect_header(in, "t_s,theta_deg,phi_deg,r_m,index,updated", path);
    std::vector<TrackRecordRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto row = split_csv_row(line, path);
        if (row.size() != 6)
            throw io_error("track rows need 6 fields in " + path);
        rows.push_back({row[0], row[1], row[2], row[3], static_cast<int>(row[4]), row[5] != 0.0});
    }
    return rows;
}

void write_samples_csv(const std::vector<double> &samples, const std::string &header,
                       const std::string &path)
{
    auto out = open_out(path);
    out << header << "\n";
    for (double s : samples)
        out << s << "\n";
}

std::vector<double> read_samples_csv(const std::string &path)
{
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw io_error("empty file: " + path);
    std::vector<double> samples;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto row = split_csv_row(line, path);
        samples.insert(samples.end(), row.begin(), row.end());
    }
    return samples;
}

} // namespace risim
