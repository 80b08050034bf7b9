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

#include <array>
#include <cmath>
#include <vector>

namespace risim {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light = 299792458.0; // m/s

inline double deg2rad(double deg) { return deg * pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

// Wraps an angle into [0, 2*pi). Adding 2*pi to a tiny negative remainder can
// round back to 2*pi exactly; fold that case to 0.
inline double wrap_2pi(double x)
{
    double r = std::fmod(x, 2.0 * pi);
    if (r < 0.0)
        r += 2.0 * pi;
    if (r >= 2.0 * pi)
        r = 0.0;
    return r;
}

inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin2db(double lin) { return 10.0 * std::log10(lin); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3 &o) const
    {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline Vec3 operator*(double s, const Vec3 &v) { return v * s; }

// Zenith angle theta from the local +z axis, azimuth phi from local +x.
struct Spherical {
    double theta = 0.0; // rad, [0, pi]
    double phi = 0.0;   // rad, [0, 2*pi)
    double r = 0.0;     // m, >= 0
};

// Rigid transform from a local frame into the world frame. The rotation is
// stored row-major; it must be orthonormal with determinant +1.
struct Pose {
    Vec3 origin{};
    std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    Vec3 rotate(const Vec3 &v) const;
    Vec3 to_world(const Vec3 &local) const;
    Vec3 to_local(const Vec3 &world) const;
    bool is_rotation(double tol = 1e-9) const;
};

// Right-handed rotation by `angle` radians about a (non-zero) axis.
Pose rotation_about_axis(const Vec3 &axis, double angle);

// Piecewise-linear position track; velocity is the segment slope.
struct Trajectory {
    struct Waypoint {
        double t = 0.0; // s
        Vec3 position{};
    };
    std::vector<Waypoint> waypoints;

    void validate() const;
    double start_time() const { return waypoints.front().t; }
    double end_time() const { return waypoints.back().t; }
    Vec3 position(double t) const; // clamped outside [start, end]
    Vec3 velocity(double t) const; // zero outside [start, end]
};

// Antenna (or unit cell) element positions in the local frame.
struct ArrayLayout {
    std::vector<Vec3> element_positions;

    std::size_t count() const { return element_positions.size(); }
    void validate() const;
    static ArrayLayout single();
    // Uniform linear array along the local x axis, centered on the origin.
    static ArrayLayout linear_x(std::size_t n, double spacing_m);
};

Vec3 spherical_to_cartesian(const Spherical &s);
Spherical cartesian_to_spherical(const Vec3 &v); // throws degenerate_input on zero vector
Vec3 unit_direction(const Vec3 &from, const Vec3 &to); // throws degenerate_input when coincident

} // namespace risim
