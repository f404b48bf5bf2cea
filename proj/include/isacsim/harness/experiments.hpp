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
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "../scenarios/sweeps.hpp"
#include "csv.hpp"
#include "scenario_file.hpp"

namespace isacsim::harness
{
    enum class Kind
    {
        pareto_front,
        mu_sweep,
        altitude_sweep,
        threshold_sweep,
        user_count_sweep,
        single_solve,
        selftest,
    };

    inline constexpr Kind all_kinds[] = {Kind::pareto_front,     Kind::mu_sweep,         Kind::altitude_sweep,
                                         Kind::threshold_sweep,  Kind::user_count_sweep, Kind::single_solve,
                                         Kind::selftest};

    inline std::string_view to_string(Kind k)
    {
        switch (k)
        {
        case Kind::pareto_front: return "pareto_front";
        case Kind::mu_sweep: return "mu_sweep";
        case Kind::altitude_sweep: return "altitude_sweep";
        case Kind::threshold_sweep: return "threshold_sweep";
        case Kind::user_count_sweep: return "user_count_sweep";
        case Kind::single_solve: return "single_solve";
        case Kind::selftest: return "selftest";
        }
        return "?";
    }

    inline std::optional<Kind> parse_kind(std::string_view s)
    {
        for (Kind k : all_kinds)
            if (to_string(k) == s)
                return k;
        return std::nullopt;
    }

    // The system a kind runs on; nullopt when either works.
    inline std::optional<System> required_system(Kind k)
    {
        switch (k)
        {
        case Kind::pareto_front:
        case Kind::mu_sweep:
        case Kind::user_count_sweep: return System::a;
        case Kind::altitude_sweep:
        case Kind::threshold_sweep: return System::b;
        default: return std::nullopt;
        }
    }

    inline std::string default_preset(Kind k)
    {
        return required_system(k) == System::a ? "system_a.default" : "system_b.default";
    }

    struct OutputFile
    {
        std::string name;
        std::string body;
    };

    struct SeedFeasibility
    {
        std::uint64_t seed = 0;
        std::size_t cells = 0;
        std::size_t feasible = 0;
    };

    struct ExperimentOutput
    {
        std::vector<OutputFile> files;
        std::vector<SeedFeasibility> feasibility;

        bool any_feasible() const
        {
            for (const auto &f : feasibility)
                if (f.feasible > 0)
                    return true;
            return false;
        }
    };

    namespace emit
    {
        inline double to_db(double lin) { return lin > 0.0 ? linear_to_db(lin) : -std::numeric_limits<double>::infinity(); }
        inline double to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

        inline std::string seed_file(Kind k, std::uint64_t seed)
        {
            return std::string(to_string(k)) + "_seed" + std::to_string(seed) + ".csv";
        }
        inline std::string median_file(Kind k) { return std::string(to_string(k)) + "_median.csv"; }

        // Splits cells into one table per seed, preserving cell order.
        template <typename Cell, typename Fill>
        void per_seed(ExperimentOutput &out, Kind kind, std::span<const std::uint64_t> seeds,
                      const std::vector<Cell> &cells, const std::vector<std::string> &header, Fill fill)
        {
            for (auto seed : seeds)
            {
                CsvTable t(header);
                SeedFeasibility f{seed, 0, 0};
                for (const auto &c : cells)
                    if (c.seed == seed)
                    {
                        fill(t.row(), c);
                        ++f.cells;
                        f.feasible += c.feasible ? 1 : 0;
                    }
                out.files.push_back({seed_file(kind, seed), t.str()});
                out.feasibility.push_back(f);
            }
        }

        inline ExperimentOutput altitude(const ScenarioConfig &cfg, std::span<const std::uint64_t> seeds,
                                         const scenarios::SweepOptions &o)
        {
            const auto r = scenarios::altitude_sweep(cfg.b, cfg.grid.altitudes, seeds, o);
            ExperimentOutput out;
            per_seed(out, Kind::altitude_sweep, seeds, r.cells,
                     {"seed", "altitude_m", "min_gain_watts", "min_sinr_linear", "min_sinr_db", "feasible",
                      "angular_spread_deg", "reference_power_watts", "genome_hex"},
                     [](CsvTable::Row &row, const scenarios::AltitudeCell &c) {
                         row << c.seed << c.altitude << c.min_gain << c.min_sinr << to_db(c.min_sinr) << c.feasible
                             << to_deg(c.angular_spread) << c.reference_power << genome_hex(c.genome);
                     });
            CsvTable m({"altitude_m", "median_min_gain_watts", "median_min_sinr_linear", "median_min_sinr_db",
                        "median_angular_spread_deg", "median_reference_power_watts", "feasible_count", "seeds"});
            for (const auto &p : r.points)
                m.row() << p.altitude << p.median_min_gain << p.median_min_sinr << to_db(p.median_min_sinr)
                        << to_deg(p.median_angular_spread) << p.median_reference_power << p.feasible_count << p.seeds;
            out.files.push_back({median_file(Kind::altitude_sweep), m.str()});
            return out;
        }

        inline ExperimentOutput threshold(const ScenarioConfig &cfg, std::span<const std::uint64_t> seeds,
                                          const scenarios::SweepOptions &o)
        {
            const auto r = scenarios::threshold_sweep(cfg.b, cfg.grid.gamma_fractions, cfg.grid.decoders, seeds, o);
            ExperimentOutput out;
            per_seed(out, Kind::threshold_sweep, seeds, r.cells,
                     {"seed", "decoder", "gamma_fraction", "gamma_watts", "min_sinr_linear", "min_rate_bps_hz",
                      "min_gain_watts", "feasible", "source_gamma_fraction", "genome_hex"},
                     [](CsvTable::Row &row, const scenarios::ThresholdCell &c) {
                         row << c.seed << to_string(c.decoder) << c.gamma_fraction << c.gamma << c.min_sinr
                             << c.min_rate << c.min_gain << c.feasible << c.source_fraction << genome_hex(c.genome);
                     });
            CsvTable m({"decoder", "gamma_fraction", "gamma_watts", "median_min_rate_bps_hz", "feasible_count", "seeds"});
            for (const auto &p : r.points)
                m.row() << to_string(p.decoder) << p.gamma_fraction << p.gamma << p.median_min_rate << p.feasible_count
                        << p.seeds;
            out.files.push_back({median_file(Kind::threshold_sweep), m.str()});
            return out;
        }

        inline ExperimentOutput user_count(const ScenarioConfig &cfg, std::span<const std::uint64_t> seeds,
                                           const scenarios::SweepOptions &o)
        {
            const auto r = scenarios::user_count_sweep(cfg.a, cfg.grid.user_counts, seeds, o);
            ExperimentOutput out;
            per_seed(out, Kind::user_count_sweep, seeds, r.cells,
                     {"seed", "users", "method", "weights", "min_rate_bps_hz", "sum_rate_bps_hz", "feasible",
                      "source_method", "genome_hex"},
                     [](CsvTable::Row &row, const scenarios::UserCountCell &c) {
                         row << c.seed << c.users << to_string(c.method)
                             << (c.method == scenarios::Method::sum_rate ? "unit" : "") << c.min_rate << c.sum_rate
                             << c.feasible << to_string(c.source) << genome_hex(c.genome);
                     });
            CsvTable m({"users", "method", "median_min_rate_bps_hz", "median_sum_rate_bps_hz", "feasible_count", "seeds"});
            for (const auto &p : r.points)
                m.row() << p.users << to_string(p.method) << p.median_min_rate << p.median_sum_rate << p.feasible_count
                        << p.seeds;
            out.files.push_back({median_file(Kind::user_count_sweep), m.str()});
            return out;
        }

        inline ExperimentOutput mu(Kind kind, const ScenarioConfig &cfg, std::span<const double> mus,
                                   std::span<const std::uint64_t> seeds, const scenarios::SweepOptions &o)
        {
            const auto r = scenarios::mu_sweep(cfg.a, mus, seeds, o);
            ExperimentOutput out;
            per_seed(out, kind, seeds, r.cells,
                     {"seed", "mu", "eta_linear", "eta_db", "omega_watts", "objective", "eta_star", "omega_star",
                      "feasible", "source_mu", "genome_hex"},
                     [&](CsvTable::Row &row, const scenarios::MuCell &c) {
                         const auto ref = std::find_if(r.references.begin(), r.references.end(),
                                                       [&](const auto &x) { return x.seed == c.seed; });
                         row << c.seed << c.mu << c.eta << to_db(c.eta) << c.omega << c.objective << ref->eta_star
                             << ref->omega_star << c.feasible << c.source_mu << genome_hex(c.genome);
                     });
            CsvTable m({"mu", "median_eta_linear", "median_eta_db", "median_omega_watts", "feasible_count", "seeds"});
            for (const auto &p : r.points)
                m.row() << p.mu << p.median_eta << to_db(p.median_eta) << p.median_omega << p.feasible_count << p.seeds;
            out.files.push_back({median_file(kind), m.str()});
            return out;
        }

        inline ExperimentOutput pareto(const ScenarioConfig &cfg, std::span<const std::uint64_t> seeds,
                                       const scenarios::SweepOptions &o)
        {
            const auto fronts = scenarios::pareto_front(cfg.a, seeds, o);
            ExperimentOutput out;
            CsvTable m({"seed", "front_size", "median_eta_linear", "median_eta_db", "median_omega_watts",
                        "max_eta_linear", "max_omega_watts"});
            for (std::size_t i = 0; i < seeds.size(); ++i)
            {
                const auto &front = fronts[i];
                CsvTable t({"seed", "solution_id", "eta_linear", "eta_db", "omega_watts", "feasible", "genome_hex"});
                std::vector<double> eta, omega;
                SeedFeasibility f{seeds[i], front.size(), 0};
                for (const auto &s : front)
                {
                    t.row() << s.seed << s.id << s.eta << to_db(s.eta) << s.omega << s.feasible << genome_hex(s.genome);
                    eta.push_back(s.eta);
                    omega.push_back(s.omega);
                    f.feasible += s.feasible ? 1 : 0;
                }
                out.files.push_back({seed_file(Kind::pareto_front, seeds[i]), t.str()});
                out.feasibility.push_back(f);
                if (front.empty())
                {
                    const double nan = std::numeric_limits<double>::quiet_NaN();
                    m.row() << seeds[i] << std::size_t{0} << nan << nan << nan << nan << nan;
                    continue;
                }
                m.row() << seeds[i] << front.size() << scenarios::median(eta) << to_db(scenarios::median(eta))
                        << scenarios::median(omega) << *std::max_element(eta.begin(), eta.end())
                        << *std::max_element(omega.begin(), omega.end());
            }
            out.files.push_back({median_file(Kind::pareto_front), m.str()});
            return out;
        }

        inline ExperimentOutput single_b(const ScenarioConfig &cfg, std::span<const std::uint64_t> seeds,
                                         const scenarios::SweepOptions &o)
        {
            const auto r = scenarios::single_solve(cfg.b, seeds, o);
            ExperimentOutput out;
            per_seed(out, Kind::single_solve, seeds, r,
                     {"seed", "min_gain_watts", "min_sinr_linear", "min_sinr_db", "feasible", "genome_hex"},
                     [](CsvTable::Row &row, const scenarios::SystemBSolution &c) {
                         row << c.seed << c.min_gain << c.min_sinr << to_db(c.min_sinr) << c.feasible
                             << genome_hex(c.genome);
                     });
            std::vector<double> gain, sinr;
            std::size_t feasible = 0;
            for (const auto &c : r)
            {
                gain.push_back(c.min_gain);
                sinr.push_back(c.min_sinr);
                feasible += c.feasible ? 1 : 0;
            }
            CsvTable m({"median_min_gain_watts", "median_min_sinr_linear", "median_min_sinr_db", "feasible_count", "seeds"});
            m.row() << scenarios::median(gain) << scenarios::median(sinr) << to_db(scenarios::median(sinr)) << feasible
                    << seeds.size();
            out.files.push_back({median_file(Kind::single_solve), m.str()});
            return out;
        }
    }

    /// Runs one experiment and returns the CSV bodies; nothing touches the disk.
    /// Selftest is handled by the caller.
    inline ExperimentOutput run_experiment(Kind kind, const ScenarioConfig &cfg, std::span<const std::uint64_t> seeds,
                                           const scenarios::SweepOptions &o)
    {
        detail::require(!seeds.empty(), "seed list must not be empty");
        if (const auto sys = required_system(kind); sys && *sys != cfg.system)
            throw std::invalid_argument(std::string(to_string(kind)) + " needs a System " +
                                        std::string(to_string(*sys)) + " scenario");
        switch (kind)
        {
        case Kind::pareto_front: return emit::pareto(cfg, seeds, o);
        case Kind::mu_sweep: return emit::mu(kind, cfg, cfg.grid.mus, seeds, o);
        case Kind::altitude_sweep: return emit::altitude(cfg, seeds, o);
        case Kind::threshold_sweep: return emit::threshold(cfg, seeds, o);
        case Kind::user_count_sweep: return emit::user_count(cfg, seeds, o);
        case Kind::single_solve:
            if (cfg.system == System::b)
                return emit::single_b(cfg, seeds, o);
            return emit::mu(kind, cfg, std::vector<double>{cfg.a.mu}, seeds, o);
        case Kind::selftest: break;
        }
        throw std::invalid_argument("run_experiment does not handle " + std::string(to_string(kind)));
    }
}
