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
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace isacsim::evolver
{
    // Pareto dominance on maximized objectives.
    inline bool pareto_dominates(std::span<const double> a, std::span<const double> b)
    {
        bool strictly = false;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            if (a[i] < b[i])
                return false;
            if (a[i] > b[i])
                strictly = true;
        }
        return strictly;
    }

    /// Feasibility-first dominance: feasible beats infeasible, smaller violation
    /// beats larger among infeasible, Pareto dominance among feasible.
    inline bool dominates(const Individual &a, const Individual &b)
    {
        const bool fa = a.feasible();
        const bool fb = b.feasible();
        if (fa != fb)
            return fa;
        if (!fa)
            return a.violation < b.violation;
        return pareto_dominates(a.objectives, b.objectives);
    }

    /// Fronts as index lists into `pop`; front 0 is non-dominated. Sets each rank.
    inline std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<Individual> pop)
    {
        if (pop.empty())
            throw std::invalid_argument("non-dominated sort of an empty population");

        const std::size_t n = pop.size();
        std::vector<std::vector<std::size_t>> dominated(n);
        std::vector<std::size_t> counter(n, 0);
        std::vector<std::vector<std::size_t>> fronts(1);

        for (std::size_t p = 0; p < n; ++p)
        {
            for (std::size_t q = p + 1; q < n; ++q)
            {
                if (dominates(pop[p], pop[q]))
                {
                    dominated[p].push_back(q);
                    ++counter[q];
                }
                else if (dominates(pop[q], pop[p]))
                {
                    dominated[q].push_back(p);
                    ++counter[p];
                }
            }
        }
        for (std::size_t p = 0; p < n; ++p)
            if (counter[p] == 0)
                fronts[0].push_back(p);

        for (std::size_t f = 0; !fronts[f].empty(); ++f)
        {
            std::vector<std::size_t> next;
            for (auto p : fronts[f])
            {
                pop[p].rank = f;
                for (auto q : dominated[p])
                    if (--counter[q] == 0)
                        next.push_back(q);
            }
            std::sort(next.begin(), next.end());
            fronts.push_back(std::move(next));
        }
        fronts.pop_back();
        return fronts;
    }

    /// Crowding distance of each member of `front` (indices into `pop`), also stored
    /// in Individual::crowding. Extremes in any objective get +inf; interior members
    /// get the sum of neighbor gaps normalized by the objective's range on the front.
    inline std::vector<double> crowding_distance(std::span<Individual> pop, std::span<const std::size_t> front)
    {
        const std::size_t n = front.size();
        std::vector<double> dist(n, 0.0);
        if (n == 0)
            return dist;
        const std::size_t m = pop[front[0]].objectives.size();
        constexpr double inf = std::numeric_limits<double>::infinity();

        std::vector<std::size_t> order(n);
        for (std::size_t obj = 0; obj < m; ++obj)
        {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                             { return pop[front[a]].objectives[obj] < pop[front[b]].objectives[obj]; });
            const double lo = pop[front[order.front()]].objectives[obj];
            const double hi = pop[front[order.back()]].objectives[obj];
            dist[order.front()] = inf;
            dist[order.back()] = inf;
            const double range = hi - lo;
            if (!(range > 0.0) || !std::isfinite(range))
                continue;
            for (std::size_t i = 1; i + 1 < n; ++i)
            {
                const double gap = pop[front[order[i + 1]]].objectives[obj] - pop[front[order[i - 1]]].objectives[obj];
                dist[order[i]] += gap / range;
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            pop[front[i]].crowding = dist[i];
        return dist;
    }

    // Total order used by single-objective selection: feasible first, then
    // higher objective; infeasible ones by smaller violation.
    inline bool better_single(const Individual &a, const Individual &b)
    {
        const bool fa = a.feasible();
        const bool fb = b.feasible();
        if (fa != fb)
            return fa;
        if (!fa)
            return a.violation < b.violation;
        return a.objectives[0] > b.objectives[0];
    }

    // Crowded-comparison order: lower rank first, then larger crowding distance.
    inline bool crowded_better(const Individual &a, const Individual &b)
    {
        if (a.rank != b.rank)
            return a.rank < b.rank;
        return a.crowding > b.crowding;
    }
}
