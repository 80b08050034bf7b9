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

#include "risim/geometry.hpp"

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace risim {

// Reflective surface description. Element (m, n) sits at
//   x = (m - (rows-1)/2) * spacing,  y = (n - (cols-1)/2) * spacing,  z = 0
// in the local frame, so the grid is centered on the aperture center. The
// aperture spans (aperture_x, aperture_y) and may carry a margin beyond the
// element grid, as on the physical board.
struct RisSpec {
    int rows = 50;               // M, element count along local x
    int cols = 37;               // N, element count along local y
    double spacing_m = 0.0857 / 8.0; // unit cell pitch
    double aperture_x_m = 0.57;  // X
    double aperture_y_m = 0.42;  // Y
    double chi = 1.0;            // reflection loss per surface area, >= 1
    int bit_depth = 4;
    Pose pose{};

    void validate() const;
    double area_m2() const { return aperture_x_m * aperture_y_m; }
    Vec3 element_position(int m, int n) const;
    int element_count() const { return rows * cols; }
};

struct NearFieldTarget {
    Vec3 source{}; // illuminator position, RIS local frame
    Vec3 focal{};  // focal point, RIS local frame
};

struct FarFieldSteering {
    double theta_r = 0.0; // rad
    double phi_r = 0.0;   // rad
};

struct CustomRegime {};

// Per-element phase matrix, row-major rows x cols, every entry in [0, 2*pi).
struct Codebook {
    std::vector<double> phases; // rows*cols entries, element (m,n) at m*cols + n
    int rows = 0;
    int cols = 0;
    std::variant<NearFieldTarget, FarFieldSteering, CustomRegime> regime = CustomRegime{};
    bool quantized = false;
    int bit_depth = 0;

    double &at(int m, int n) { return phases[static_cast<std::size_t>(m) * cols + n]; }
    double at(int m, int n) const { return phases[static_cast<std::size_t>(m) * cols + n]; }
    void validate() const;
};

// Incidence/reflection angle pair, both measured off the surface normal.
struct ReflectionGeometry {
    double theta_i = 0.0;
    double phi_i = 0.0;
    double theta_r = 0.0;
    double phi_r = 0.0;

    void validate() const;
};

// Phase profile focusing the two-hop source->element->focal field. Each entry
// conjugates the exact spherical propagation phase of both hops so the element
// contributions add in phase at the focal point; positions are in the RIS
// local frame and must lie in the front half-space (z > 0).
Codebook nf_codebook(const RisSpec &spec, const Vec3 &source, const Vec3 &focal, double lambda_m);

// Linear phase gradient steering a normally incident plane wave toward
// (theta_r, phi_r). An oblique incidence direction adds its own gradient term.
Codebook ff_codebook(const RisSpec &spec, double theta_r, double phi_r, double lambda_m,
                     std::optional<FarFieldSteering> incidence = std::nullopt);

// Nearest of 2^bits uniform levels in [0, 2*pi); ties round toward the lower
// level. Regime metadata is preserved.
Codebook quantize_codebook(const Codebook &cb, int bits);

// Radar cross-section of the uniform-phase aperture for a given angle pair,
// sinc-pattern model with sinc(u) = sin(u)/u, sinc(0) = 1. Square meters.
// The sinc terms carry the tangential phase mismatch, so the value nulls away
// from the specular pair.
double rcs(const RisSpec &spec, const ReflectionGeometry &geom, double lambda_m);

// Cross-section toward the design angle of a surface whose phase profile
// cancels the tangential mismatch for this angle pair: the sinc factors sit
// at their peak and only the projected-aperture terms remain.
double configured_rcs(const RisSpec &spec, const ReflectionGeometry &geom, double lambda_m);

// Green's-function two-hop field sum at `obs` for illumination from `source`,
// reflection coefficient exp(j*psi)/sqrt(chi) per element. Summation order is
// fixed by element index for bit-reproducibility.
std::complex<double> aperture_field(const RisSpec &spec, const Codebook &cb, const Vec3 &source,
                                    const Vec3 &obs, double lambda_m);

// Upper bound on |aperture_field|: all element contributions aligned in phase.
double aperture_field_bound(const RisSpec &spec, const Vec3 &source, const Vec3 &obs);

struct PatternSample {
    Spherical direction{};
    double power_db = 0.0; // normalized, peak at 0 dB
};

struct ReradiationPattern {
    std::vector<PatternSample> samples;
    Spherical peak_direction{};
};

// Normalized power pattern of the configured surface on a spherical grid.
// Grid radius must be at least 3 * max(aperture_x, aperture_y).
ReradiationPattern reradiation_pattern(const RisSpec &spec, const Codebook &cb, const Vec3 &source,
                                       const std::vector<Spherical> &grid, double lambda_m);

// Amplitude gain in [0, 1] of the configured surface toward `obs`: the field
// sum normalized by its coherent-alignment bound. Equals 1 exactly when the
// codebook focuses at `obs`.
double ris_amplitude_gain(const RisSpec &spec, const Codebook &cb, const Vec3 &source,
                          const Vec3 &obs, double lambda_m);

// Fraunhofer boundary 2*D^2/lambda with D the largest aperture dimension.
double fraunhofer_distance(const RisSpec &spec, double lambda_m);

} // namespace risim
