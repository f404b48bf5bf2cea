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

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "../evolver/types.hpp"
#include "experiments.hpp"
#include "scenario_file.hpp"

#ifndef ISACSIM_VERSION
#define ISACSIM_VERSION "0.1.0"
#endif

namespace isacsim::harness
{
    using json = nlohmann::ordered_json;

    namespace echo
    {
        inline json position(const Position &p) { return {{"x", p.x}, {"y", p.y}, {"z", p.z}}; }
        inline json array(const ArrayGeometry &a) { return {{"rows", a.rows}, {"cols", a.cols}, {"spacing", a.spacing}}; }
        inline json link(const LinkBudget &l)
        {
            return {{"carrier_freq", l.carrier_freq}, {"noise_power", l.noise_power}, {"bandwidth", l.bandwidth}};
        }
        inline json placements(const std::vector<scenarios::GroundPlacement> &v)
        {
            json out = json::array();
            for (const auto &g : v)
                out.push_back({g.ground_range, g.azimuth_deg, g.rcs});
            return out;
        }

        template <typename S>
        void population(json &j, const S &s)
        {
            j["users"] = s.users;
            j["targets"] = s.targets;
            j["user_antennas"] = s.user_antennas;
            j["user_radius"] = s.user_radius;
            j["target_radius"] = s.target_radius;
            j["target_rcs"] = s.target_rcs;
            j["k_factor"] = s.k_factor;
            j["power_mode"] = std::string(to_string(s.power_mode));
            j["user_placements"] = placements(s.user_placements);
            j["target_placements"] = placements(s.target_placements);
        }
    }

    /// Every resolved scenario value in SI units, so a run can be rebuilt without the source file.
    inline json config_json(const ScenarioConfig &c)
    {
        json j;
        j["system"] = std::string(to_string(c.system));
        j["preset"] = c.preset;
        if (c.system == System::b)
        {
            const auto &b = c.b;
            j["haps"] = echo::position(b.haps);
            j["array"] = echo::array(b.array);
            echo::population(j, b);
            j["p_max"] = b.p_max;
            j["sinr_floor"] = b.sinr_floor;
            j["link"] = echo::link(b.link);
            j["sweep"] = {{"altitudes", c.grid.altitudes}, {"gamma_fractions", c.grid.gamma_fractions}};
            json dec = json::array();
            for (auto d : c.grid.decoders)
                dec.push_back(std::string(to_string(d)));
            j["sweep"]["decoders"] = dec;
        }
        else
        {
            const auto &a = c.a;
            j["haps"] = echo::position(a.haps);
            j["uav"] = echo::position(a.uav);
            j["haps_array"] = echo::array(a.haps_array);
            j["uav_array"] = echo::array(a.uav_array);
            echo::population(j, a);
            j["decoder"] = std::string(to_string(a.decoder));
            j["access"] = echo::link(a.access);
            j["backhaul_freq"] = a.backhaul_freq;
            j["uav_power"] = a.uav_power;
            j["mu"] = a.mu;
            j["sweep"] = {{"user_counts", c.grid.user_counts}, {"mus", c.grid.mus}};
        }
        return j;
    }

    inline json evolver_json(const evolver::EvolverConfig &e)
    {
        return {{"preset", e.preset},
                {"population_size", e.population_size},
                {"generations", e.generations},
                {"crossover_fraction", e.crossover_fraction},
                {"mutation_sigma0", e.mutation_sigma0},
                {"sigma_decay", e.sigma_decay},
                {"tournament_size", e.tournament_size}};
    }

    struct RunManifest
    {
        std::string kind;
        std::string scenario_path; // empty for presets
        std::vector<std::string> command_line;
        std::optional<ScenarioConfig> config;
        std::vector<std::uint64_t> seeds;
        std::optional<evolver::EvolverConfig> evolver;
        std::size_t workers = 1;
        std::string started_utc;
        double wall_seconds = 0.0;
        std::vector<std::string> files;
        std::vector<SeedFeasibility> feasibility;
        int exit_code = 0;
    };

    inline json manifest_json(const RunManifest &m)
    {
        json j;
        j["software"] = {{"name", "isacsim"}, {"version", ISACSIM_VERSION}};
        j["kind"] = m.kind;
        j["command_line"] = m.command_line;
        j["scenario_path"] = m.scenario_path;
        j["config"] = m.config ? config_json(*m.config) : json(nullptr);
        j["seeds"] = m.seeds;
        j["evolver"] = m.evolver ? evolver_json(*m.evolver) : json(nullptr);
        j["workers"] = m.workers;
        j["started_utc"] = m.started_utc;
        j["wall_seconds"] = m.wall_seconds;
        j["files"] = m.files;
        json feas = json::array();
        for (const auto &f : m.feasibility)
            feas.push_back({{"seed", f.seed}, {"cells", f.cells}, {"feasible", f.feasible}});
        j["feasibility"] = feas;
        j["exit_code"] = m.exit_code;
        return j;
    }

    // Write to a sibling temporary, then rename over the target.
    inline void write_atomic(const std::filesystem::path &path, const std::string &body)
    {
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f)
                throw std::runtime_error("cannot write " + tmp.string());
            f << body;
            f.flush();
            if (!f)
                throw std::runtime_error("write failed for " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

    inline void write_manifest(const std::filesystem::path &path, const RunManifest &m)
    {
        write_atomic(path, manifest_json(m).dump(2) + "\n");
    }
}
