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
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "sorting.hpp"
#include "variation.hpp"

namespace isacsim::evolver
{
    struct GaGeneration
    {
        std::size_t generation = 0;
        double best_objective = std::numeric_limits<double>::quiet_NaN(); // best feasible so far
        double mean_objective = std::numeric_limits<double>::quiet_NaN(); // over feasible members
        double population_best = std::numeric_limits<double>::quiet_NaN(); // best feasible in this generation
        double best_violation = 0.0;
        std::size_t feasible_count = 0;
    };

    struct GaResult
    {
        Individual best;
        std::vector<GaGeneration> trace;
        bool feasible = false;
    };

    inline std::size_t elite_count(std::size_t population) { return std::max<std::size_t>(1, population / 20); }

    namespace detail
    {
        inline GaGeneration summarize(std::size_t gen, std::span<const Individual> pop, const Individual &best)
        {
            GaGeneration g;
            g.generation = gen;
            g.best_violation = std::numeric_limits<double>::infinity();
            double sum = 0.0;
            for (const auto &ind : pop)
            {
                g.best_violation = std::min(g.best_violation, ind.violation);
                if (ind.feasible())
                {
                    ++g.feasible_count;
                    sum += ind.objectives[0];
                    if (!(ind.objectives[0] <= g.population_best))
                        g.population_best = ind.objectives[0];
                }
            }
            if (g.feasible_count > 0)
                g.mean_objective = sum / static_cast<double>(g.feasible_count);
            if (best.feasible())
                g.best_objective = best.objectives[0];
            return g;
        }
    }

    /// Single-objective real-coded GA with elitism, tournament selection,
    /// arithmetic crossover and Gaussian mutation with geometric step decay.
    /// Constraints are handled by feasibility-first comparison.
    template <Problem P>
    GaResult run_ga(const P &problem, const EvolverConfig &cfg)
    {
        validate(cfg);
        isacsim::detail::require(problem.objective_count() == 1, "run_ga needs a single-objective problem");
        const Bounds b = bounds_of(problem);

        std::vector<Individual> pop = initial_population(problem, b, cfg);
        auto by_quality = [](const Individual &a, const Individual &c) { return better_single(a, c); };
        std::stable_sort(pop.begin(), pop.end(), by_quality);

        GaResult result;
        result.best = pop.front();
        result.trace.push_back(detail::summarize(0, pop, result.best));

        const std::size_t elites = std::min(elite_count(cfg.population_size), cfg.population_size);
        const std::size_t kids = cfg.population_size - elites;
        const auto crossovers = static_cast<std::size_t>(std::lround(cfg.crossover_fraction * static_cast<double>(kids)));

        for (std::size_t gen = 1; gen <= cfg.generations; ++gen)
        {
            auto offspring = make_offspring(pop, b, cfg, gen, kids, crossovers, by_quality);
            evaluate_all(problem, std::span<Individual>(offspring), cfg.workers);

            pop.resize(elites);
            std::move(offspring.begin(), offspring.end(), std::back_inserter(pop));
            std::stable_sort(pop.begin(), pop.end(), by_quality);

            if (better_single(pop.front(), result.best))
                result.best = pop.front();
            result.trace.push_back(detail::summarize(gen, pop, result.best));
        }
        result.feasible = result.best.feasible();
        return result;
    }
}
