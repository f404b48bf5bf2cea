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

#include <optional>
#include <string_view>

#include "types.hpp"

namespace isacsim::evolver::presets
{
    /// Small budget that finishes in seconds per solve. Variation is tighter than
    /// the large-population settings because 200 generations leave little room
    /// for a wide initial search.
    inline EvolverConfig desk()
    {
        EvolverConfig c;
        c.population_size = 100;
        c.generations = 200;
        c.crossover_fraction = 0.5;
        c.mutation_sigma0 = 0.02;
        c.sigma_decay = 0.985;
        c.tournament_size = 4;
        c.preset = "desk";
        return c;
    }

    // Large-budget settings for the two-objective UAV problem family.
    inline EvolverConfig paper_system_a()
    {
        EvolverConfig c;
        c.population_size = 1700;
        c.generations = 5000;
        c.crossover_fraction = 0.8;
        c.mutation_sigma0 = 0.1;
        c.sigma_decay = 0.999;
        c.tournament_size = 2;
        c.preset = "paper";
        return c;
    }

    // Large-budget settings for the HAPS-only problem family.
    inline EvolverConfig paper_system_b()
    {
        EvolverConfig c = paper_system_a();
        c.population_size = 2500;
        c.generations = 1500;
        return c;
    }

    enum class Family
    {
        system_a,
        system_b,
    };

    inline std::optional<EvolverConfig> by_name(std::string_view name, Family family)
    {
        if (name == "desk")
            return desk();
        if (name == "paper")
            return family == Family::system_a ? paper_system_a() : paper_system_b();
        return std::nullopt;
    }
}
