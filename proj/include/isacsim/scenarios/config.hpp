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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "../channel.hpp"
#include "../core/random.hpp"
#include "../isac_metrics.hpp"

namespace isacsim::scenarios
{
    enum class PowerMode
    {
        repair,    // scale down onto the power ball when the budget is exceeded
        normalize, // always scale to exactly the budget
    };

    inline std::string_view to_string(PowerMode m) { return m == PowerMode::repair ? "repair" : "normalize"; }

    inline std::optional<PowerMode> parse_power_mode(std::string_view s)
    {
        if (s == "repair") return PowerMode::repair;
        if (s == "normalize") return PowerMode::normalize;
        return std::nullopt;
    }

    // Ground placement relative to the point below a platform.
    struct GroundPlacement
    {
        double ground_range = 0.0; // m
        double azimuth_deg = 0.0;
        double rcs = 1.0;          // targets only
    };

    /// HAPS acting as a super macro base station: one UPA serving single-antenna
    /// users (or M-antenna users in the threshold study) and illuminating targets.
    struct SystemBScenario
    {
        Position haps{0.0, 0.0, 20'000.0};
        ArrayGeometry array{8, 8, 0.5};
        std::size_t users = 4;
        std::size_t targets = 4;
        std::vector<GroundPlacement> user_placements;   // empty: random layout
        std::vector<GroundPlacement> target_placements; // empty: random layout
        double user_radius = 5'000.0;
        double target_radius = 10'000.0;
        double target_rcs = 1.0;
        double p_max = dbm_to_watts(52.0);
        double sinr_floor = db_to_linear(1.0);
        double k_factor = 10.0;
        LinkBudget link{2.545e9, dbm_to_watts(-100.0), 20e6};
        std::size_t user_antennas = 2;
        PowerMode power_mode = PowerMode::repair;
    };

    /// HAPS acting as the processing hub above one UAV cluster: the UAV UPA serves
    /// multi-antenna users and illuminates targets whose echoes reach the HAPS.
    struct SystemAScenario
    {
        Position haps{0.0, 0.0, 20'000.0};
        Position uav{0.0, 0.0, 40.0};
        ArrayGeometry haps_array{20, 20, 0.5};
        ArrayGeometry uav_array{4, 4, 0.5};
        std::size_t users = 4;
        std::size_t user_antennas = 2;
        std::size_t targets = 4;
        std::vector<GroundPlacement> user_placements;
        std::vector<GroundPlacement> target_placements;
        double user_radius = 500.0;
        double target_radius = 1'000.0;
        double target_rcs = 1.0;
        DecoderKind decoder = DecoderKind::mmse;
        LinkBudget access{3.5e9, dbm_to_watts(-100.0), 20e6};
        double backhaul_freq = 120e9;
        double uav_power = dbm_to_watts(40.0);
        double mu = 0.5;
        double k_factor = 10.0;
        PowerMode power_mode = PowerMode::repair;
    };

    inline void validate(const SystemBScenario &s)
    {
        validate(s.haps);
        validate(s.array);
        validate(s.link);
        detail::require(s.haps.z > 0.0, "HAPS altitude must be positive");
        detail::require(s.targets >= 1, "System B needs at least one target");
        detail::require(s.p_max > 0.0 && std::isfinite(s.p_max), "p_max must be positive");
        detail::require(s.sinr_floor >= 0.0 && std::isfinite(s.sinr_floor), "sinr_floor must be non-negative");
        detail::require(s.k_factor >= 0.0, "k_factor must be non-negative");
        detail::require(s.user_antennas >= 1, "user_antennas must be at least 1");
        detail::require(s.user_radius >= 0.0 && s.target_radius >= 0.0, "layout radii must be non-negative");
        detail::require(s.target_rcs > 0.0, "target_rcs must be positive");
        detail::require(s.user_placements.empty() || s.user_placements.size() == s.users,
                        "explicit user placements must match the user count");
        detail::require(s.target_placements.empty() || s.target_placements.size() == s.targets,
                        "explicit target placements must match the target count");
    }

    inline void validate(const SystemAScenario &s)
    {
        validate(s.haps);
        validate(s.uav);
        validate(s.haps_array);
        validate(s.uav_array);
        validate(s.access);
        detail::require(s.uav.z > 0.0, "UAV altitude must be positive");
        detail::require(s.haps.z > s.uav.z, "HAPS must fly above the UAV");
        detail::require(s.users >= 1, "System A needs at least one user");
        detail::require(s.targets >= 1, "System A needs at least one target");
        detail::require(s.user_antennas >= 1, "user_antennas must be at least 1");
        detail::require(s.backhaul_freq > 0.0, "backhaul_freq must be positive");
        detail::require(s.uav_power > 0.0 && std::isfinite(s.uav_power), "uav_power must be positive");
        detail::require(s.mu >= 0.0 && s.mu <= 1.0, "mu must lie in [0, 1]");
        detail::require(s.k_factor >= 0.0, "k_factor must be non-negative");
        detail::require(s.target_rcs > 0.0, "target_rcs must be positive");
        detail::require(s.user_placements.empty() || s.user_placements.size() == s.users,
                        "explicit user placements must match the user count");
        detail::require(s.target_placements.empty() || s.target_placements.size() == s.targets,
                        "explicit target placements must match the target count");
    }

    inline Position place(const Position &center, const GroundPlacement &g)
    {
        const double az = g.azimuth_deg * std::numbers::pi / 180.0;
        return {center.x + g.ground_range * std::cos(az), center.y + g.ground_range * std::sin(az), 0.0};
    }

    // Uniform point in a ground disk of the given radius around `center`.
    inline Position uniform_in_disk(const Position &center, double radius, Rng &rng)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = radius * std::sqrt(u(rng));
        const double a = 2.0 * std::numbers::pi * u(rng);
        return {center.x + r * std::cos(a), center.y + r * std::sin(a), 0.0};
    }

    struct Layout
    {
        std::vector<Position> users;
        std::vector<SensingTarget> targets;
    };

    /// Ground positions for one seed. Users are drawn before targets from the
    /// layout stream, so the layout depends only on (seed, counts, radii, center).
    inline Layout resolve_layout(const Position &center, std::size_t users, std::size_t targets,
                                 const std::vector<GroundPlacement> &user_placements,
                                 const std::vector<GroundPlacement> &target_placements, double user_radius,
                                 double target_radius, double rcs, std::uint64_t seed)
    {
        Rng rng = make_stream({seed, tag(StreamTag::layout)});
        Layout out;
        for (std::size_t k = 0; k < users; ++k)
            out.users.push_back(user_placements.empty() ? uniform_in_disk(center, user_radius, rng)
                                                        : place(center, user_placements[k]));
        for (std::size_t j = 0; j < targets; ++j)
        {
            if (target_placements.empty())
                out.targets.push_back({uniform_in_disk(center, target_radius, rng), rcs});
            else
                out.targets.push_back({place(center, target_placements[j]), target_placements[j].rcs});
        }
        return out;
    }

    inline Layout resolve_layout(const SystemBScenario &s, std::uint64_t seed)
    {
        return resolve_layout(s.haps, s.users, s.targets, s.user_placements, s.target_placements, s.user_radius,
                              s.target_radius, s.target_rcs, seed);
    }

    inline Layout resolve_layout(const SystemAScenario &s, std::uint64_t seed)
    {
        return resolve_layout(s.uav, s.users, s.targets, s.user_placements, s.target_placements, s.user_radius,
                              s.target_radius, s.target_rcs, seed);
    }
}
