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
#include <vector>

#include "hypervolume.hpp"
#include "sorting.hpp"
#include "variation.hpp"

namespace isacsim::evolver
{
    struct NsgaGeneration
    {
        std::size_t generation = 0;
        std::vector<double> best;  // per objective, over feasible members
        std::vector<double> mean;  // per objective, over feasible members
        double hypervolume = 0.0;  // of the feasible first front
        std::size_t feasible_count = 0;
    };

    struct NsgaResult
    {
        std::vector<Individual> front; // sorted by first objective
        std::vector<NsgaGeneration> trace;
        std::vector<double> reference_point;
        bool feasible = false;
    };

    namespace detail
    {
        // Ranks and crowding for the whole population; returns the fronts.
        inline std::vector<std::vector<std::size_t>> rank_population(std::span<Individual> pop)
        {
            auto fronts = non_dominated_sort(pop);
            for (const auto &f : fronts)
                crowding_distance(pop, f);
            return fronts;
        }

        inline std::vector<double> default_reference(std::span<const Individual> pop, std::size_t m)
        {
            std::vector<double> ref(m, std::numeric_limits<double>::infinity());
            bool any_feasible = std::any_of(pop.begin(), pop.end(), [](const Individual &i) { return i.feasible(); });
            for (const auto &ind : pop)
            {
                if (any_feasible && !ind.feasible())
                    continue;
                for (std::size_t k = 0; k < m; ++k)
                    if (std::isfinite(ind.objectives[k]))
                        ref[k] = std::min(ref[k], ind.objectives[k]);
            }
            for (auto &r : ref)
                if (!std::isfinite(r))
                    r = 0.0;
            return ref;
        }

        inline NsgaGeneration summarize_mo(std::size_t gen, std::span<const Individual> pop,
                                           std::span<const std::size_t> first, std::span<const double> ref)
        {
            const std::size_t m = ref.size();
            NsgaGeneration g;
            g.generation = gen;
            g.best.assign(m, std::numeric_limits<double>::quiet_NaN());
            g.mean.assign(m, 0.0);
            for (const auto &ind : pop)
            {
                if (!ind.feasible())
                    continue;
                ++g.feasible_count;
                for (std::size_t k = 0; k < m; ++k)
                {
                    g.best[k] = std::isnan(g.best[k]) ? ind.objectives[k] : std::max(g.best[k], ind.objectives[k]);
                    g.mean[k] += ind.objectives[k];
                }
            }
            for (auto &v : g.mean)
                v = g.feasible_count ? v / static_cast<double>(g.feasible_count) : std::numeric_limits<double>::quiet_NaN();

            std::vector<std::vector<double>> pts;
            for (auto i : first)
                if (pop[i].feasible())
                    pts.push_back(pop[i].objectives);
            g.hypervolume = hypervolume(pts, ref);
            return g;
        }
    }

    /// NSGA-II: crowded binary tournament, the GA's variation operators, and
    /// (mu + lambda) environmental selection by (rank, crowding).
    template <Problem P>
    NsgaResult run_nsga2(const P &problem, const EvolverConfig &cfg)
    {
        validate(cfg);
        const Bounds b = bounds_of(problem);
        const std::size_t m = problem.objective_count();
        const std::size_t n = cfg.population_size;

        std::vector<Individual> pop = initial_population(problem, b, cfg);
        auto fronts = detail::rank_population(pop);

        NsgaResult result;
        if constexpr (HasReferencePoint<P>)
            result.reference_point = problem.reference_point();
        else
            result.reference_point = detail::default_reference(pop, m);
        result.trace.push_back(detail::summarize_mo(0, pop, fronts[0], result.reference_point));

        const auto crossovers = static_cast<std::size_t>(std::lround(cfg.crossover_fraction * static_cast<double>(n)));
        auto crowded = [](const Individual &a, const Individual &c) { return crowded_better(a, c); };

        for (std::size_t gen = 1; gen <= cfg.generations; ++gen)
        {
            auto offspring = make_offspring(pop, b, cfg, gen, n, crossovers, crowded);
            evaluate_all(problem, std::span<Individual>(offspring), cfg.workers);

            std::vector<Individual> merged = std::move(pop);
            std::move(offspring.begin(), offspring.end(), std::back_inserter(merged));
            auto merged_fronts = detail::rank_population(merged);

            pop.clear();
            pop.reserve(n);
            for (const auto &f : merged_fronts)
            {
                if (pop.size() + f.size() <= n)
                {
                    for (auto i : f)
                        pop.push_back(std::move(merged[i]));
                    continue;
                }
                std::vector<std::size_t> last(f.begin(), f.end());
                std::stable_sort(last.begin(), last.end(), [&](std::size_t a, std::size_t c)
                                 { return merged[a].crowding > merged[c].crowding; });
                for (std::size_t i = 0; pop.size() < n; ++i)
                    pop.push_back(std::move(merged[last[i]]));
                break;
            }

            fronts = detail::rank_population(pop);
            result.trace.push_back(detail::summarize_mo(gen, pop, fronts[0], result.reference_point));
        }

        for (auto i : fronts[0])
            result.front.push_back(pop[i]);
        result.feasible = std::any_of(result.front.begin(), result.front.end(),
                                      [](const Individual &i) { return i.feasible(); });
        if (result.feasible)
            std::erase_if(result.front, [](const Individual &i) { return !i.feasible(); });
        std::stable_sort(result.front.begin(), result.front.end(), [](const Individual &a, const Individual &c)
                         { return a.objectives[0] < c.objectives[0]; });
        return result;
    }
}
