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
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace isacsim::evolver
{
    using Point2 = std::array<double, 2>;

    /// Area dominated by `points` (maximized) and bounded below by `ref`.
    /// Points not strictly better than `ref` in both objectives contribute nothing.
    inline double hypervolume_2d(std::span<const Point2> points, const Point2 &ref)
    {
        std::vector<Point2> p;
        p.reserve(points.size());
        for (const auto &q : points)
            if (q[0] > ref[0] && q[1] > ref[1] && std::isfinite(q[0]) && std::isfinite(q[1]))
                p.push_back(q);
        std::sort(p.begin(), p.end(), [](const Point2 &a, const Point2 &b)
                  { return a[0] > b[0] || (a[0] == b[0] && a[1] > b[1]); });

        double area = 0.0;
        double ceiling = ref[1];
        for (const auto &q : p)
        {
            if (q[1] > ceiling)
            {
                area += (q[0] - ref[0]) * (q[1] - ceiling);
                ceiling = q[1];
            }
        }
        return area;
    }

    // Hypervolume in 1 or 2 objectives; NaN for higher dimensions.
    inline double hypervolume(const std::vector<std::vector<double>> &points, std::span<const double> ref)
    {
        if (ref.size() == 1)
        {
            double best = ref[0];
            for (const auto &q : points)
                if (std::isfinite(q[0]))
                    best = std::max(best, q[0]);
            return best - ref[0];
        }
        if (ref.size() == 2)
        {
            std::vector<Point2> p;
            p.reserve(points.size());
            for (const auto &q : points)
                p.push_back({q[0], q[1]});
            return hypervolume_2d(p, {ref[0], ref[1]});
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
}
