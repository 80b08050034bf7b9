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

#include "risim/geometry.hpp"

#include "risim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace risim {

Vec3 Pose::rotate(const Vec3 &v) const
{
    const auto &R = rotation;
    return {R[0][0] * v.x + R[0][1] * v.y + R[0][2] * v.z,
            R[1][0] * v.x + R[1][1] * v.y + R[1][2] * v.z,
            R[2][0] * v.x + R[2][1] * v.y + R[2][2] * v.z};
}

Vec3 Pose::to_world(const Vec3 &local) const { return rotate(local) + origin; }

Vec3 Pose::to_local(const Vec3 &world) const
{
    const Vec3 d = world - origin;
    const auto &R = rotation; // orthonormal: inverse = transpose
    return {R[0][0] * d.x + R[1][0] * d.y + R[2][0] * d.z,
            R[0][1] * d.x + R[1][1] * d.y + R[2][1] * d.z,
            R[0][2] * d.x + R[1][2] * d.y + R[2][2] * d.z};
}

bool Pose::is_rotation(double tol) const
{
    const auto &R = rotation;
    // R * R^T == I
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k)
                dot += R[i][k] * R[j][k];
            if (std::abs(dot - (i == j ? 1.0 : 0.0)) > tol)
                return false;
        }
    const double det = R[0][0] * (R[1][1] * R[2][2] - R[1][2] * R[2][1]) -
                       R[0][1] * (R[1][0] * R[2][2] - R[1][2] * R[2][0]) +
                       R[0][2] * (R[1][0] * R[2][1] - R[1][1] * R[2][0]);
    return std::abs(det - 1.0) <= tol;
}

Pose rotation_about_axis(const Vec3 &axis, double angle)
{
    const double n = axis.norm();
    if (n <= 0.0)
        throw degenerate_input("rotation_about_axis: zero axis");
    const Vec3 u = axis / n;
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Pose p;
    p.rotation = {{{t * u.x * u.x + c, t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y},
                   {t * u.x * u.y + s * u.z, t * u.y * u.y + c, t * u.y * u.z - s * u.x},
                   {t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c}}};
    return p;
}

void Trajectory::validate() const
{
    if (waypoints.empty())
        throw degenerate_input("trajectory: no waypoints");
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        if (!(waypoints[i].t > waypoints[i - 1].t))
            throw degenerate_input("trajectory: waypoint times must be strictly increasing");
}

Vec3 Trajectory::position(double t) const
{
    validate();
    if (t <= waypoints.front().t)
        return waypoints.front().position;
    if (t >= waypoints.back().t)
        return waypoints.back().position;
    auto it = std::upper_bound(waypoints.begin(), waypoints.end(), t,
                               [](double v, const Waypoint &w) { return v < w.t; });
    const Waypoint &b = *it;
    const Waypoint &a = *(it - 1);
    const double u = (t - a.t) / (b.t - a.t);
    return a.position + (b.position - a.position) * u;
}

Vec3 Trajectory::velocity(double t) const
{
    validate();
    if (t < waypoints.front().t || t > waypoints.back().t)
        return {};
    auto it = std::upper_bound(waypoints.begin(), waypoints.end(), t,
                               [](double v, const Waypoint &w) { return v < w.t; });
    if (it == waypoints.end())
        it = waypoints.end() - 1; // t == last waypoint: use the final segment
    const Waypoint &b = *it;
    const Waypoint &a = *(it - 1);
    return (b.position - a.position) / (b.t - a.t);
}

void ArrayLayout::validate() const
{
    if (element_positions.empty())
        throw degenerate_input("array layout: no elements");
    for (std::size_t i = 0; i < element_positions.size(); ++i)
        for (std::size_t j = i + 1; j < element_positions.size(); ++j)
            if ((element_positions[i] - element_positions[j]).norm() == 0.0)
                throw degenerate_input("array layout: duplicate element positions");
}

ArrayLayout ArrayLayout::single() { return ArrayLayout{{Vec3{}}}; }

ArrayLayout ArrayLayout::linear_x(std::size_t n, double spacing_m)
{
    ArrayLayout a;
    const double mid = 0.5 * static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        a.element_positions.push_back({(static_cast<double>(i) - mid) * spacing_m, 0.0, 0.0});
    return a;
}

Vec3 spherical_to_cartesian(const Spherical &s)
{
    const double st = std::sin(s.theta);
    return {s.r * st * std::cos(s.phi), s.r * st * std::sin(s.phi), s.r * std::cos(s.theta)};
}

Spherical cartesian_to_spherical(const Vec3 &v)
{
    const double r = v.norm();
    if (r <= 0.0)
        throw degenerate_input("cartesian_to_spherical: zero vector has no angles");
    Spherical s;
    s.r = r;
    s.theta = std::acos(std::clamp(v.z / r, -1.0, 1.0));
    s.phi = wrap_2pi(std::atan2(v.y, v.x));
    return s;
}

Vec3 unit_direction(const Vec3 &from, const Vec3 &to)
{
    const Vec3 d = to - from;
    const double n = d.norm();
    if (n <= 0.0)
        throw degenerate_input("unit_direction: coincident points");
    return d / n;
}

} // namespace risim
