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

#include "types.hpp"

// Small benchmark problems used by the tests and the self-test command.
namespace isacsim::evolver::problems
{
    // maximize -sum x^2 over [lo, hi]^D; optional constraint x_0 <= cap.
    struct Sphere
    {
        std::size_t dim = 4;
        double lo = -1.0;
        double hi = 1.0;
        double cap = std::numeric_limits<double>::infinity();

        std::size_t dimension() const { return dim; }
        std::size_t objective_count() const { return 1; }
        std::vector<double> lower_bounds() const { return std::vector<double>(dim, lo); }
        std::vector<double> upper_bounds() const { return std::vector<double>(dim, hi); }

        Evaluation evaluate(std::span<const double> x) const
        {
            double s = 0.0;
            for (double v : x)
                s += v * v;
            return {{-s}, std::max(0.0, x[0] - cap)};
        }
    };

    struct Constant
    {
        std::size_t dim = 3;

        std::size_t dimension() const { return dim; }
        std::size_t objective_count() const { return 1; }
        std::vector<double> lower_bounds() const { return std::vector<double>(dim, 0.0); }
        std::vector<double> upper_bounds() const { return std::vector<double>(dim, 1.0); }
        Evaluation evaluate(std::span<const double>) const { return {{1.0}, 0.0}; }
    };

    // ZDT1 values (f1, f2), both to be minimized.
    inline std::array<double, 2> zdt1_values(std::span<const double> x)
    {
        const double f1 = x[0];
        double s = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i)
            s += x[i];
        const double g = 1.0 + 9.0 * s / static_cast<double>(x.size() - 1);
        return {f1, g * (1.0 - std::sqrt(f1 / g))};
    }

    // ZDT1 as a maximization problem: objectives are (-f1, -f2).
    struct Zdt1
    {
        std::size_t dim = 10;

        std::size_t dimension() const { return dim; }
        std::size_t objective_count() const { return 2; }
        std::vector<double> lower_bounds() const { return std::vector<double>(dim, 0.0); }
        std::vector<double> upper_bounds() const { return std::vector<double>(dim, 1.0); }
        std::vector<double> reference_point() const { return {-1.1, -1.1}; }

        Evaluation evaluate(std::span<const double> x) const
        {
            const auto f = zdt1_values(x);
            return {{-f[0], -f[1]}, 0.0};
        }
    };

    /// Inverted generational distance of ZDT1 values (minimization space) against
    /// `samples` points of the analytic front f2 = 1 - sqrt(f1).
    inline double zdt1_igd(const std::vector<std::array<double, 2>> &front, std::size_t samples = 1000)
    {
        if (front.empty())
            return std::numeric_limits<double>::infinity();
        double total = 0.0;
        for (std::size_t i = 0; i < samples; ++i)
        {
            const double f1 = static_cast<double>(i) / static_cast<double>(samples - 1);
            const double f2 = 1.0 - std::sqrt(f1);
            double best = std::numeric_limits<double>::infinity();
            for (const auto &p : front)
                best = std::min(best, std::hypot(p[0] - f1, p[1] - f2));
            total += best;
        }
        return total / static_cast<double>(samples);
    }

    // Two reachable outcomes: (0, 1) for x < 0.5 and (1, 0) otherwise.
    struct TwoPoint
    {
        std::size_t dimension() const { return 1; }
        std::size_t objective_count() const { return 2; }
        std::vector<double> lower_bounds() const { return {0.0}; }
        std::vector<double> upper_bounds() const { return {1.0}; }
        Evaluation evaluate(std::span<const double> x) const
        {
            if (x[0] < 0.5)
                return {{0.0, 1.0}, 0.0};
            return {{1.0, 0.0}, 0.0};
        }
    };
}
