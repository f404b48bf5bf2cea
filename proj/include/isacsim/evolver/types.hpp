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

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "../core/errors.hpp"

namespace isacsim::evolver
{
    struct Evaluation
    {
        std::vector<double> objectives; // maximized
        double violation = 0.0;         // 0 iff feasible
    };

    // A problem exposes box bounds and a deterministic evaluate(); repair() is
    // optional and, when present, is applied to every genome before evaluation.
    template <typename P>
    concept Problem = requires(const P &p, std::span<const double> x) {
        { p.dimension() } -> std::convertible_to<std::size_t>;
        { p.objective_count() } -> std::convertible_to<std::size_t>;
        { p.lower_bounds() } -> std::convertible_to<std::vector<double>>;
        { p.upper_bounds() } -> std::convertible_to<std::vector<double>>;
        { p.evaluate(x) } -> std::convertible_to<Evaluation>;
    };

    template <typename P>
    concept Repairable = requires(const P &p, std::span<double> x) { p.repair(x); };

    template <typename P>
    concept HasReferencePoint = requires(const P &p) {
        { p.reference_point() } -> std::convertible_to<std::vector<double>>;
    };

    struct Individual
    {
        std::vector<double> genome;
        std::vector<double> objectives;
        double violation = 0.0;
        std::size_t rank = 0;
        double crowding = 0.0;

        bool feasible() const noexcept { return violation == 0.0; }
    };

    struct EvolverConfig
    {
        std::size_t population_size = 100;
        std::size_t generations = 200;
        double crossover_fraction = 0.8;
        double mutation_sigma0 = 0.1;
        double sigma_decay = 0.999;
        std::size_t tournament_size = 2;
        std::uint64_t seed = 1;
        std::size_t workers = 1;
        std::string preset = "custom";
    };

    inline void validate(const EvolverConfig &c)
    {
        isacsim::detail::require(c.population_size >= 4 && c.population_size % 2 == 0,
                        "population size must be even and at least 4");
        isacsim::detail::require(c.generations >= 1, "generations must be at least 1");
        isacsim::detail::require(c.crossover_fraction >= 0.0 && c.crossover_fraction <= 1.0,
                        "crossover fraction must lie in [0, 1]");
        isacsim::detail::require(c.mutation_sigma0 >= 0.0, "mutation sigma must be non-negative");
        isacsim::detail::require(c.sigma_decay >= 0.0 && c.sigma_decay <= 1.0, "sigma decay must lie in [0, 1]");
        isacsim::detail::require(c.tournament_size >= 1, "tournament size must be at least 1");
    }

    // Genomes whose evaluation produced a non-finite objective get this treatment.
    inline void mark_invalid(Individual &ind)
    {
        for (auto &o : ind.objectives)
            o = -std::numeric_limits<double>::infinity();
        ind.violation = std::numeric_limits<double>::infinity();
    }
}
