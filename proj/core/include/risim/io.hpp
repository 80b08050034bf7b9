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
#include "risim/ris.hpp"
#include "risim/tracking.hpp"

#include <string>
#include <vector>

namespace risim {

// Phase matrix in radians, row-major rows x cols, one CSV row per grid row.
void write_codebook_csv(const Codebook &cb, const std::string &path);
Codebook read_codebook_csv(const std::string &path);

// Header `theta_deg,phi_deg,gain_dB`, one row per grid point.
void write_pattern_csv(const std::vector<PatternSample> &samples, const std::string &path);
std::vector<PatternSample> read_pattern_csv(const std::string &path);

// Header `t_s,tap_index,delay_s,re_thth,im_thth,re_thph,im_thph,re_phth,
// im_phth,re_phph,im_phph`; one row per (time, tap).
void write_cir_csv(const Cir &cir, const std::string &path);
Cir read_cir_csv(const std::string &path);

struct CrlbSample {
    double x_m = 0.0;
    double y_m = 0.0;
    double crlb_m2 = 0.0; // inf marks a singular-geometry point
};

// Header `x_m,y_m,crlb_m2`.
void write_crlb_csv(const std::vector<CrlbSample> &rows, const std::string &path);
std::vector<CrlbSample> read_crlb_csv(const std::string &path);

// JSON-lines, one frame per line.
void write_frames_jsonl(const std::vector<Frame> &frames, const std::string &path);
std::vector<Frame> read_frames_jsonl(const std::string &path);

struct TrackRecordRow {
    double t_s = 0.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    double r_m = 0.0;
    int index = -1;
    bool updated = false;
};

// Header `t_s,theta_deg,phi_deg,r_m,index,updated`.
void write_track_csv(const std::vector<TrackRecordRow> &rows, const std::string &path);
std::vector<TrackRecordRow> read_track_csv(const std::string &path);

// Single-column numeric file with header, used by the fit subcommand.
void write_samples_csv(const std::vector<double> &samples, const std::string &header,
                       const std::string &path);
std::vector<double> read_samples_csv(const std::string &path);

} // namespace risim
