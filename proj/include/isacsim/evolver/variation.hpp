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
#include <random>
#include <span>
#include <vector>

#include "../core/parallel.hpp"
#include "../core/random.hpp"
#include "types.hpp"

namespace isacsim::evolver
{
    struct Bounds
    {
        std::vector<double> lower;
        std::vector<double> upper;

        std::size_t size() const noexcept { return lower.size(); }
        double range(std::size_t d) const { return upper[d] - lower[d]; }
    };

    template <Problem P>
    Bounds bounds_of(const P &problem)
    {
        Bounds b{problem.lower_bounds(), problem.upper_bounds()};
        isacsim::detail::require(b.lower.size() == problem.dimension() && b.upper.size() == problem.dimension(),
                        "bounds do not match problem dimension");
        for (std::size_t d = 0; d < b.size(); ++d)
            isacsim::detail::require(b.lower[d] <= b.upper[d], "lower bound exceeds upper bound");
        return b;
    }

    inline void clamp_to(const Bounds &b, std::span<double> x)
    {
        for (std::size_t d = 0; d < x.size(); ++d)
            x[d] = std::clamp(x[d], b.lower[d], b.upper[d]);
    }

    inline std::vector<double> random_genome(const Bounds &b, Rng &rng)
    {
        std::vector<double> x(b.size());
        for (std::size_t d = 0; d < b.size(); ++d)
        {
            std::uniform_real_distribution<double> u(b.lower[d], b.upper[d]);
            x[d] = b.range(d) > 0.0 ? u(rng) : b.lower[d];
        }
        return x;
    }

    // child = u*a + (1-u)*b with one u ~ U[0, 1] for the whole vector.
    inline std::vector<double> arithmetic_crossover(std::span<const double> a, std::span<const double> b, Rng &rng)
    {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        std::vector<double> child(a.size());
        for (std::size_t d = 0; d < a.size(); ++d)
            child[d] = u * a[d] + (1.0 - u) * b[d];
        return child;
    }

    // Adds N(0, (scale * range_d)^2) to every coordinate, then clamps.
    inline std::vector<double> gaussian_mutation(std::span<const double> parent, const Bounds &b, double scale,
                                                 Rng &rng)
    {
        std::normal_distribution<double> n(0.0, 1.0);
        std::vector<double> child(parent.begin(), parent.end());
        for (std::size_t d = 0; d < child.size(); ++d)
            child[d] += scale * b.range(d) * n(rng);
        clamp_to(b, child);
        return child;
    }

    template <typename Better>
    std::size_t tournament(std::span<const Individual> pop, std::size_t size, Rng &rng, Better &&better)
    {
        std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
        std::size_t winner = pick(rng);
        for (std::size_t i = 1; i < size; ++i)
        {
            const std::size_t c = pick(rng);
            if (better(pop[c], pop[winner]))
                winner = c;
        }
        return winner;
    }

    /// Repairs (if the problem supports it) and evaluates one genome in place.
    template <Problem P>
    void evaluate_into(const P &problem, Individual &ind)
    {
        if constexpr (Repairable<P>)
            problem.repair(std::span<double>(ind.genome));
        Evaluation e = problem.evaluate(std::span<const double>(ind.genome));
        ind.objectives = std::move(e.objectives);
        ind.violation = e.violation;
        bool finite = std::isfinite(ind.violation) && ind.violation >= 0.0 &&
                      ind.objectives.size() == problem.objective_count();
        for (double o : ind.objectives)
            finite = finite && std::isfinite(o);
        if (!finite)
        {
            ind.objectives.resize(problem.objective_count());
            mark_invalid(ind);
        }
    }

    template <Problem P>
    void evaluate_all(const P &problem, std::span<Individual> inds, std::size_t workers)
    {
        parallel_for(inds.size(), workers, [&](std::size_t i) { evaluate_into(problem, inds[i]); });
    }

    template <Problem P>
    std::vector<Individual> initial_population(const P &problem, const Bounds &b, const EvolverConfig &cfg)
    {
        std::vector<Individual> pop(cfg.population_size);
        for (std::size_t i = 0; i < pop.size(); ++i)
        {
            Rng rng = make_stream({cfg.seed, tag(StreamTag::evolver), 0, i});
            pop[i].genome = random_genome(b, rng);
        }
        evaluate_all(problem, std::span<Individual>(pop), cfg.workers);
        return pop;
    }

    inline double mutation_scale(const EvolverConfig &cfg, std::size_t generation)
    {
        return cfg.mutation_sigma0 * std::pow(cfg.sigma_decay, static_cast<double>(generation));
    }

    /// Builds `count` offspring for `generation` (1-based). The first `crossovers`
    /// slots are crossover children, the rest are mutants. Slot i draws from its own
    /// stream derived from (seed, generation, i), so results do not depend on scheduling.
    template <typename Better>
    std::vector<Individual> make_offspring(std::span<const Individual> pop, const Bounds &b,
                                           const EvolverConfig &cfg, std::size_t generation, std::size_t count,
                                           std::size_t crossovers, Better &&better)
    {
        const double scale = mutation_scale(cfg, generation - 1);
        std::vector<Individual> kids(count);
        for (std::size_t i = 0; i < count; ++i)
        {
            Rng rng = make_stream({cfg.seed, tag(StreamTag::evolver), generation, i});
            if (i < crossovers)
            {
                const auto a = tournament(pop, cfg.tournament_size, rng, better);
                const auto c = tournament(pop, cfg.tournament_size, rng, better);
                kids[i].genome = arithmetic_crossover(pop[a].genome, pop[c].genome, rng);
            }
            else
            {
                const auto a = tournament(pop, cfg.tournament_size, rng, better);
                kids[i].genome = gaussian_mutation(pop[a].genome, b, scale, rng);
            }
        }
        return kids;
    }
}
