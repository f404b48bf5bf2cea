// SPDX-License-Identifier: Apache-2.0
//
// isacsim: HAPS integrated sensing and communication simulator
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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iterator>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "core/errors.hpp"

namespace isacsim
{
    using cvec = Eigen::VectorXcd;
    using cmat = Eigen::MatrixXcd;

    // Ground-fixed Cartesian frame in meters, z is altitude.
    struct Position
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        friend bool operator==(const Position &, const Position &) = default;
    };

    inline void validate(const Position &p)
    {
        detail::require(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z),
                        "position coordinates must be finite");
        detail::require(p.z >= 0.0, "position altitude must be non-negative, got " + std::to_string(p.z));
    }

    inline double distance(const Position &a, const Position &b)
    {
        return std::hypot(b.x - a.x, b.y - a.y, b.z - a.z);
    }

    // Azimuth in [-pi, pi), elevation in [-pi/2, pi/2].
    struct Direction
    {
        double azimuth = 0.0;
        double elevation = 0.0;
    };

    inline Direction direction_between(const Position &from, const Position &to)
    {
        const double dx = to.x - from.x;
        const double dy = to.y - from.y;
        const double dz = to.z - from.z;
        if (dx == 0.0 && dy == 0.0 && dz == 0.0)
            throw DegenerateGeometry("direction between coincident positions is undefined");

        double az = std::atan2(dy, dx);
        if (az >= std::numbers::pi)
            az = -std::numbers::pi;
        return {az, std::atan2(dz, std::hypot(dx, dy))};
    }

    // Unit vector of a direction in the ground frame.
    inline Eigen::Vector3d unit_vector(const Direction &d)
    {
        const double c = std::cos(d.elevation);
        return {c * std::cos(d.azimuth), c * std::sin(d.azimuth), std::sin(d.elevation)};
    }

    // Uniform planar array lying in the horizontal plane, element pitch in wavelengths.
    struct ArrayGeometry
    {
        std::size_t rows = 1;
        std::size_t cols = 1;
        double spacing = 0.5;

        std::size_t elements() const noexcept { return rows * cols; }

        friend bool operator==(const ArrayGeometry &, const ArrayGeometry &) = default;
    };

    inline void validate(const ArrayGeometry &g)
    {
        detail::require(g.rows >= 1 && g.cols >= 1, "array must have at least one row and one column");
        detail::require(g.spacing > 0.0 && std::isfinite(g.spacing), "array spacing must be positive");
    }

    /// Array response toward `dir`. Entry (m, n) sits at index m * cols + n and
    /// carries phase 2*pi*spacing*(m*cos(el)*cos(az) + n*cos(el)*sin(az)).
    /// Entries have unit modulus, so the squared norm equals the element count.
    inline cvec steering_vector(const ArrayGeometry &geom, const Direction &dir)
    {
        validate(geom);
        const double c = std::cos(dir.elevation);
        const double kx = 2.0 * std::numbers::pi * geom.spacing * c * std::cos(dir.azimuth);
        const double ky = 2.0 * std::numbers::pi * geom.spacing * c * std::sin(dir.azimuth);

        cvec a(static_cast<Eigen::Index>(geom.elements()));
        for (std::size_t m = 0; m < geom.rows; ++m)
            for (std::size_t n = 0; n < geom.cols; ++n)
                a(static_cast<Eigen::Index>(m * geom.cols + n)) =
                    std::polar(1.0, kx * static_cast<double>(m) + ky * static_cast<double>(n));
        return a;
    }

    // Largest pairwise angle (radians) between the lines of sight from `origin`.
    template <typename Range>
    double angular_spread(const Position &origin, const Range &points)
    {
        double spread = 0.0;
        for (auto i = std::begin(points); i != std::end(points); ++i)
        {
            const auto ui = unit_vector(direction_between(origin, *i));
            for (auto j = std::next(i); j != std::end(points); ++j)
            {
                const auto uj = unit_vector(direction_between(origin, *j));
                spread = std::max(spread, std::atan2(ui.cross(uj).norm(), ui.dot(uj)));
            }
        }
        return spread;
    }
}
