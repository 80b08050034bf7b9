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

#include "risim/ris.hpp"

#include "risim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace risim {

namespace {

double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

void require_front_halfspace(const Vec3 &p, const char *what)
{
    if (!(p.z > 0.0))
        throw geometry_error(std::string(what) + " must lie in the front half-space (z > 0)");
}

void require_wavelength(double lambda_m)
{
    if (!(lambda_m > 0.0))
        throw std::invalid_argument("wavelength must be positive");
}

} // namespace

void RisSpec::validate() const
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("ris spec: element counts must be >= 1");
    if (!(spacing_m > 0.0))
        throw std::invalid_argument("ris spec: spacing must be positive");
    if (!(aperture_x_m > 0.0) || !(aperture_y_m > 0.0))
        throw std::invalid_argument("ris spec: aperture dimensions must be positive");
    if (!(chi >= 1.0))
        throw std::invalid_argument("ris spec: chi must be >= 1");
    if (bit_depth < 1)
        throw std::invalid_argument("ris spec: bit depth must be >= 1");
}

Vec3 RisSpec::element_position(int m, int n) const
{
    const double cx = 0.5 * (rows - 1);
    const double cy = 0.5 * (cols - 1);
    return {(m - cx) * spacing_m, (n - cy) * spacing_m, 0.0};
}

void Codebook::validate() const
{
    if (rows < 1 || cols < 1 || phases.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("codebook: phase matrix shape mismatch");
    for (double p : phases)
        if (!(p >= 0.0) || !(p < 2.0 * pi))
            throw std::invalid_argument("codebook: phases must lie in [0, 2*pi)");
}

void ReflectionGeometry::validate() const
{
    if (!(theta_i >= 0.0 && theta_i < pi / 2.0) || !(theta_r >= 0.0 && theta_r < pi / 2.0))
        throw std::invalid_argument("reflection geometry: zenith angles must lie in [0, pi/2)");
}

Codebook nf_codebook(const RisSpec &spec, const Vec3 &source, const Vec3 &focal, double lambda_m)
{
    spec.validate();
    require_wavelength(lambda_m);
    require_front_halfspace(source, "nf_codebook: source");
    require_front_halfspace(focal, "nf_codebook: focal point");

    const double k = 2.0 * pi / lambda_m;
    Codebook cb;
    cb.rows = spec.rows;
    cb.cols = spec.cols;
    cb.phases.resize(static_cast<std::size_t>(spec.rows) * spec.cols);
    cb.regime = NearFieldTarget{source, focal};
    for (int m = 0; m < spec.rows; ++m)
        for (int n = 0; n < spec.cols; ++n) {
            const Vec3 e = spec.element_position(m, n);
            const double d1 = (source - e).norm();
            const double d2 = (focal - e).norm();
            cb.at(m, n) = wrap_2pi(k * (d1 + d2));
        }
    return cb;
}

Codebook ff_codebook(const RisSpec &spec, double theta_r, double phi_r, double lambda_m,
                     std::optional<FarFieldSteering> incidence)
{
    spec.validate();
    require_wavelength(lambda_m);
    if (!(theta_r >= 0.0 && theta_r < pi / 2.0))
        throw std::invalid_argument("ff_codebook: theta_r must lie in [0, pi/2)");

    const double k = 2.0 * pi / lambda_m;
    double gx = std::sin(theta_r) * std::cos(phi_r);
    double gy = std::sin(theta_r) * std::sin(phi_r);
    if (incidence) {
        gx += std::sin(incidence->theta_r) * std::cos(incidence->phi_r);
        gy += std::sin(incidence->theta_r) * std::sin(incidence->phi_r);
    }

    Codebook cb;
    cb.rows = spec.rows;
    cb.cols = spec.cols;
    cb.phases.resize(static_cast<std::size_t>(spec.rows) * spec.cols);
    cb.regime = FarFieldSteering{theta_r, phi_r};
    for (int m = 0; m < spec.rows; ++m)
        for (int n = 0; n < spec.cols; ++n) {
            const Vec3 e = spec.element_position(m, n);
            cb.at(m, n) = wrap_2pi(-k * (e.x * gx + e.y * gy));
        }
    return cb;
}

Codebook quantize_codebook(const Codebook &cb, int bits)
{
    if (bits < 1)
        throw std::invalid_argument("quantize_codebook: bit depth must be >= 1");
    cb.validate();

    const double levels = static_cast<double>(1 << bits);
    const double step = 2.0 * pi / levels;
    Codebook out = cb;
    for (double &p : out.phases) {
        double idx = p / step;
        double lo = std::floor(idx);
        // Ties (exactly halfway between levels) round toward the lower level.
        double q = (idx - lo > 0.5) ? lo + 1.0 : lo;
        double level = std::fmod(q, levels);
        p = level * step;
    }
    out.quantized = true;
    out.bit_depth = bits;
    return out;
}

double rcs(const RisSpec &spec, const ReflectionGeometry &geom, double lambda_m)
{
    spec.validate();
    geom.validate();
    require_wavelength(lambda_m);

    const double area = spec.area_m2();
    const double ux = std::sin(geom.theta_r) * std::cos(geom.phi_r) +
                      std::sin(geom.theta_i) * std::cos(geom.phi_i);
    const double uy = std::sin(geom.theta_r) * std::sin(geom.phi_r) +
                      std::sin(geom.theta_i) * std::sin(geom.phi_i);
    const double sx = sinc(pi * spec.aperture_x_m / lambda_m * ux);
    const double sy = sinc(pi * spec.aperture_y_m / lambda_m * uy);
    const double ci = std::cos(geom.theta_i);
    const double cr = std::cos(geom.theta_r);
    return 4.0 * pi * area * area / (spec.chi * lambda_m * lambda_m) * ci * ci * cr * cr * sx *
           sx * sy * sy;
}

double configured_rcs(const RisSpec &spec, const ReflectionGeometry &geom, double lambda_m)
{
    spec.validate();
    geom.validate();
    require_wavelength(lambda_m);
    const double area = spec.area_m2();
    const double ci = std::cos(geom.theta_i);
    const double cr = std::cos(geom.theta_r);
    return 4.0 * pi * area * area / (spec.chi * lambda_m * lambda_m) * ci * ci * cr * cr;
}

std::complex<double> aperture_field(const RisSpec &spec, const Codebook &cb, const Vec3 &source,
                                    const Vec3 &obs, double lambda_m)
{
    spec.validate();
    cb.validate();
    require_wavelength(lambda_m);
    if (cb.rows != spec.rows || cb.cols != spec.cols)
        throw config_error("aperture_field: codebook shape does not match the surface");
    require_front_halfspace(source, "aperture_field: source");

    const double k = 2.0 * pi / lambda_m;
    const double amp = 1.0 / std::sqrt(spec.chi);
    std::complex<double> sum = 0.0;
    for (int m = 0; m < spec.rows; ++m)
        for (int n = 0; n < spec.cols; ++n) {
            const Vec3 e = spec.element_position(m, n);
            const double d1 = (source - e).norm();
            const double d2 = (obs - e).norm();
            if (d2 < 1e-9)
                throw geometry_error("aperture_field: observation point coincides with an element");
            const double phase = cb.at(m, n) - k * (d1 + d2);
            sum += std::polar(amp / (d1 * d2), phase);
        }
    return sum;
}

double aperture_field_bound(const RisSpec &spec, const Vec3 &source, const Vec3 &obs)
{
    spec.validate();
    const double amp = 1.0 / std::sqrt(spec.chi);
    double sum = 0.0;
    for (int m = 0; m < spec.rows; ++m)
        for (int n = 0; n < spec.cols; ++n) {
            const Vec3 e = spec.element_position(m, n);
            const double d1 = (source - e).norm();
            const double d2 = (obs - e).norm();
            if (d1 < 1e-9 || d2 < 1e-9)
                throw geometry_error("aperture_field_bound: point coincides with an element");
            sum += amp / (d1 * d2);
        }
    return sum;
}

ReradiationPattern reradiation_pattern(const RisSpec &spec, const Codebook &cb, const Vec3 &source,
                                       const std::vector<Spherical> &grid, double lambda_m)
{
    if (grid.empty())
        throw std::invalid_argument("reradiation_pattern: empty direction grid");
    const double min_radius = 3.0 * std::max(spec.aperture_x_m, spec.aperture_y_m);
    for (const Spherical &s : grid)
        if (s.r < min_radius)
            throw std::invalid_argument("reradiation_pattern: grid radius below 3 * max aperture span");

    ReradiationPattern pat;
    pat.samples.reserve(grid.size());
    double peak = 0.0;
    std::size_t peak_idx = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3 obs = spherical_to_cartesian(grid[i]);
        const double p = std::norm(aperture_field(spec, cb, source, obs, lambda_m));
        if (p > peak) {
            peak = p;
            peak_idx = i;
        }
        pat.samples.push_back({grid[i], p});
    }
    if (peak <= 0.0)
        throw numerical_error("reradiation_pattern: zero field on the whole grid");
    for (PatternSample &s : pat.samples)
        s.power_db = lin2db(s.power_db / peak);
    pat.peak_direction = grid[peak_idx];
    return pat;
}

double ris_amplitude_gain(const RisSpec &spec, const Codebook &cb, const Vec3 &source,
                          const Vec3 &obs, double lambda_m)
{
    const double bound = aperture_field_bound(spec, source, obs);
    return std::abs(aperture_field(spec, cb, source, obs, lambda_m)) / bound;
}

double fraunhofer_distance(const RisSpec &spec, double lambda_m)
{
    require_wavelength(lambda_m);
    const double d = std::max(spec.aperture_x_m, spec.aperture_y_m);
    return 2.0 * d * d / lambda_m;
}

} // namespace risim
