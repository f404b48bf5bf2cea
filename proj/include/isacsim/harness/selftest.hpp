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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../evolver/sorting.hpp"
#include "../scenarios/sweeps.hpp"
#include "csv.hpp"
#include "experiments.hpp"

namespace isacsim::harness
{
    struct CheckResult
    {
        std::string name;
        bool passed = false;
        std::string detail;
        double seconds = 0.0;
    };

    namespace oracle
    {
        /// Fronts by repeated peeling: O(n^3), used only to cross-check the fast sort.
        inline std::vector<std::size_t> brute_force_ranks(const std::vector<evolver::Individual> &pop)
        {
            std::vector<std::size_t> rank(pop.size(), 0);
            std::vector<bool> done(pop.size(), false);
            std::size_t left = pop.size();
            for (std::size_t r = 0; left > 0; ++r)
            {
                std::vector<std::size_t> layer;
                for (std::size_t i = 0; i < pop.size(); ++i)
                {
                    if (done[i])
                        continue;
                    bool dominated = false;
                    for (std::size_t j = 0; j < pop.size() && !dominated; ++j)
                        dominated = !done[j] && j != i && evolver::dominates(pop[j], pop[i]);
                    if (!dominated)
                        layer.push_back(i);
                }
                for (auto i : layer)
                {
                    rank[i] = r;
                    done[i] = true;
                }
                left -= layer.size();
            }
            return rank;
        }

        // Random population with coarse objective values so ties and duplicates occur.
        inline std::vector<evolver::Individual> random_population(Rng &rng, std::size_t n, std::size_t objectives)
        {
            std::uniform_int_distribution<int> level(0, 5);
            std::bernoulli_distribution infeasible(0.2);
            std::vector<evolver::Individual> pop(n);
            for (auto &ind : pop)
            {
                for (std::size_t m = 0; m < objectives; ++m)
                    ind.objectives.push_back(level(rng));
                ind.violation = infeasible(rng) ? 0.5 * (1 + level(rng)) : 0.0;
            }
            return pop;
        }

        inline cmat random_matrix(Rng &rng, Eigen::Index r, Eigen::Index c)
        {
            cmat m(r, c);
            for (Eigen::Index i = 0; i < r; ++i)
                for (Eigen::Index j = 0; j < c; ++j)
                    m(i, j) = complex_gaussian(rng);
            return m;
        }
    }

    namespace checks
    {
        using Outcome = std::pair<bool, std::string>;

        inline Outcome fspl_oracle()
        {
            const double db = -linear_to_db(fspl_gain(20e3, 2.545e9));
            return {std::abs(db - 126.58) < 0.01, "FSPL(20 km, 2.545 GHz) = " + format_number(db) + " dB"};
        }

        inline Outcome steering_norm()
        {
            Rng rng = make_stream({1, tag(StreamTag::probe), 1});
            std::uniform_real_distribution<double> az(-std::numbers::pi, std::numbers::pi), el(-1.5, 1.5);
            double worst = 0.0;
            for (const ArrayGeometry g : {ArrayGeometry{8, 8, 0.5}, ArrayGeometry{20, 20, 0.5}, ArrayGeometry{4, 4, 0.5}})
                for (int i = 0; i < 100; ++i)
                {
                    const double n = static_cast<double>(g.elements());
                    worst = std::max(worst, std::abs(steering_vector(g, {az(rng), el(rng)}).squaredNorm() - n) / n);
                }
            return {worst <= 1e-12, "max relative deviation of |a|^2 from N: " + format_number(worst)};
        }

        inline Outcome rician_moments()
        {
            constexpr int draws = 10'000;
            const double beta = 3e-11;
            Rng rng = make_stream({2, tag(StreamTag::probe), 2});
            const cvec a_tx = steering_vector({2, 2, 0.5}, {0.3, -0.8});
            bool ok = true;
            std::string detail;
            for (double k : {0.0, 10.0})
            {
                const RicianParams p{k, beta};
                cmat mean = cmat::Zero(1, a_tx.size());
                double power = 0.0;
                for (int d = 0; d < draws; ++d)
                {
                    const auto h = rician_channel(rng, p, single_antenna(), a_tx);
                    mean += h.matrix;
                    power += h.matrix.squaredNorm();
                }
                mean /= draws;
                power /= draws * static_cast<double>(a_tx.size());
                const cmat los = std::sqrt(beta * k / (k + 1.0)) * a_tx.adjoint();
                const double power_err = std::abs(power / beta - 1.0);
                const double mean_err = (mean - los).norm() / std::sqrt(beta * static_cast<double>(a_tx.size()));
                ok = ok && power_err <= 0.02 && mean_err <= 0.02;
                detail += "K=" + format_number(k) + ": power err " + format_number(power_err) + ", mean err " +
                          format_number(mean_err) + (k == 0.0 ? "; " : "");
            }
            return {ok, detail};
        }

        inline Outcome codec_round_trip()
        {
            Rng rng = make_stream({3, tag(StreamTag::probe), 3});
            std::normal_distribution<double> g(0.0, 3.0);
            double worst_trip = 0.0, worst_over = 0.0, worst_norm = 0.0;
            for (auto mode : {scenarios::PowerMode::repair, scenarios::PowerMode::normalize})
            {
                const scenarios::GenomeCodec codec(16, 4, 10.0, mode);
                for (int i = 0; i < 200; ++i)
                {
                    std::vector<double> x(codec.dimension());
                    for (auto &v : x)
                        v = g(rng);
                    const auto back = codec.encode(codec.decode(x));
                    for (std::size_t j = 0; j < x.size(); ++j)
                        worst_trip = std::max(worst_trip, std::abs(back[j] - x[j]));
                    codec.repair(x);
                    const double p = total_power(codec.decode(x));
                    worst_over = std::max(worst_over, p / 10.0 - 1.0);
                    if (mode == scenarios::PowerMode::normalize)
                        worst_norm = std::max(worst_norm, std::abs(p / 10.0 - 1.0));
                }
            }
            const bool ok = worst_trip <= 1e-12 && worst_over <= 1e-9 && worst_norm <= 1e-9;
            return {ok, "round trip " + format_number(worst_trip) + ", budget excess " + format_number(worst_over)};
        }

        inline Outcome decoder_ordering()
        {
            Rng rng = make_stream({4, tag(StreamTag::probe), 4});
            std::size_t bad = 0;
            for (int i = 0; i < 300; ++i)
            {
                const cmat g = oracle::random_matrix(rng, 2, 3);
                const double noise = 0.1;
                const double mmse = sinr_with_decoder(DecoderKind::mmse, g, 0, noise);
                for (auto k : {DecoderKind::zf, DecoderKind::mrc, DecoderKind::single_antenna})
                    if (sinr_with_decoder(k, g, 0, noise) > mmse * (1.0 + 1e-9))
                        ++bad;
            }
            return {bad == 0, std::to_string(bad) + " of 900 comparisons beat MMSE"};
        }

        inline Outcome sort_matches_brute_force()
        {
            Rng rng = make_stream({5, tag(StreamTag::probe), 5});
            std::size_t mismatches = 0;
            for (int t = 0; t < 200; ++t)
            {
                auto pop = oracle::random_population(rng, 5 + static_cast<std::size_t>(t % 30), 2 + t % 2);
                const auto want = oracle::brute_force_ranks(pop);
                evolver::non_dominated_sort(std::span<evolver::Individual>(pop));
                for (std::size_t i = 0; i < pop.size(); ++i)
                    mismatches += pop[i].rank != want[i] ? 1 : 0;
            }
            return {mismatches == 0, std::to_string(mismatches) + " rank mismatches over 200 populations"};
        }

        // A small System B scenario that the desk preset solves in about a second.
        inline scenarios::SystemBScenario small_b()
        {
            scenarios::SystemBScenario s;
            s.array = {4, 4, 0.5};
            s.users = 2;
            s.targets = 2;
            return s;
        }

        inline Outcome elitism_monotonicity()
        {
            const scenarios::SystemBProblem p(small_b(), 7);
            auto cfg = evolver::presets::desk();
            cfg.seed = 7;
            cfg.generations = 60;
            const auto r = evolver::run_ga(p, cfg);
            double prev = -std::numeric_limits<double>::infinity();
            std::size_t drops = 0, feasible_gens = 0;
            for (const auto &g : r.trace)
            {
                if (std::isnan(g.population_best))
                    continue;
                ++feasible_gens;
                drops += g.population_best < prev ? 1 : 0;
                prev = g.population_best;
            }
            return {drops == 0 && feasible_gens > 0,
                    std::to_string(drops) + " drops of the population best over " + std::to_string(feasible_gens) +
                        " feasible generations"};
        }

        inline Outcome feasibility_recheck()
        {
            const auto scn = small_b();
            std::size_t feasible = 0, violations = 0;
            for (std::uint64_t seed = 1; seed <= 3; ++seed)
            {
                const auto sol = scenarios::solve_system_b(scn, seed, {});
                if (!sol.feasible)
                    continue;
                ++feasible;
                const scenarios::SystemBInstance inst(scn, seed);
                for (double s : inst.sinr_single(inst.codec().decode(sol.genome)))
                    violations += s < scn.sinr_floor * (1.0 - 1e-9) ? 1 : 0;
            }
            return {feasible > 0 && violations == 0,
                    std::to_string(feasible) + " feasible solutions, " + std::to_string(violations) +
                        " SINR values below the floor"};
        }

        inline ScenarioConfig tiny_altitude_config()
        {
            ScenarioConfig cfg = *preset("system_b.default");
            cfg.b = small_b();
            cfg.grid.altitudes = {20e3, 35e3};
            return cfg;
        }

        inline scenarios::SweepOptions tiny_options(std::size_t workers)
        {
            scenarios::SweepOptions o;
            o.evolver.population_size = 12;
            o.evolver.generations = 8;
            o.workers = workers;
            return o;
        }

        inline Outcome worker_determinism(std::size_t workers)
        {
            const std::vector<std::uint64_t> seeds{1, 2, 3};
            const auto cfg = tiny_altitude_config();
            const auto one = run_experiment(Kind::altitude_sweep, cfg, seeds, tiny_options(1));
            const auto many = run_experiment(Kind::altitude_sweep, cfg, seeds, tiny_options(std::max<std::size_t>(workers, 2)));

            auto ga_one = evolver::presets::desk();
            ga_one.generations = 10;
            auto ga_many = ga_one;
            ga_many.workers = std::max<std::size_t>(workers, 2);
            const scenarios::SystemBProblem p(small_b(), 3);
            const bool ga_same = evolver::run_ga(p, ga_one).best.genome == evolver::run_ga(p, ga_many).best.genome;

            bool same = one.files.size() == many.files.size();
            for (std::size_t i = 0; same && i < one.files.size(); ++i)
                same = one.files[i].name == many.files[i].name && one.files[i].body == many.files[i].body;
            return {same && ga_same, std::string(same ? "CSV bytes identical" : "CSV bytes differ") +
                                         ", GA " + (ga_same ? "identical" : "differs") + " across worker counts"};
        }

        inline Outcome csv_revalidation()
        {
            const std::vector<std::uint64_t> seeds{4};
            const auto cfg = tiny_altitude_config();
            const auto out = run_experiment(Kind::altitude_sweep, cfg, seeds, tiny_options(1));
            const auto rows = read_csv(out.files.front().body);
            if (rows.size() < 2)
                return {false, "no rows"};
            const auto &h = rows.front();
            auto col = [&](const char *name) {
                return static_cast<std::size_t>(std::find(h.begin(), h.end(), name) - h.begin());
            };
            double worst = 0.0;
            for (std::size_t r = 1; r < rows.size(); ++r)
            {
                auto scn = cfg.b;
                scn.haps.z = std::stod(rows[r][col("altitude_m")]);
                const scenarios::SystemBInstance inst(scn, std::stoull(rows[r][col("seed")]));
                const auto m = inst.metrics(inst.codec().decode(genome_from_hex(rows[r][col("genome_hex")])));
                const double gain = std::stod(rows[r][col("min_gain_watts")]);
                const double sinr = std::stod(rows[r][col("min_sinr_linear")]);
                worst = std::max({worst, std::abs(m.min_beampattern_gain - gain) / std::abs(gain),
                                  std::abs(m.min_sinr - sinr) / std::abs(sinr)});
            }
            return {worst <= 1e-9, "max relative deviation of recomputed metrics: " + format_number(worst)};
        }
    }

    /// The invariant suite behind `isacsim selftest`.
    inline std::vector<CheckResult> run_selftest(std::size_t workers = 2)
    {
        const std::vector<std::pair<std::string, std::function<checks::Outcome()>>> suite = {
            {"fspl_oracle", checks::fspl_oracle},
            {"steering_norm", checks::steering_norm},
            {"rician_moments", checks::rician_moments},
            {"codec_round_trip", checks::codec_round_trip},
            {"decoder_ordering", checks::decoder_ordering},
            {"sort_matches_brute_force", checks::sort_matches_brute_force},
            {"elitism_monotonicity", checks::elitism_monotonicity},
            {"feasibility_recheck", checks::feasibility_recheck},
            {"worker_determinism", [workers] { return checks::worker_determinism(workers); }},
            {"csv_revalidation", checks::csv_revalidation},
        };
        std::vector<CheckResult> out;
        for (const auto &[name, fn] : suite)
        {
            const auto t0 = std::chrono::steady_clock::now();
            CheckResult r{name, false, "", 0.0};
            try
            {
                std::tie(r.passed, r.detail) = fn();
            }
            catch (const std::exception &e)
            {
                r.detail = std::string("threw: ") + e.what();
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            out.push_back(std::move(r));
        }
        return out;
    }

    inline CsvTable selftest_table(const std::vector<CheckResult> &results)
    {
        CsvTable t({"check", "passed", "detail"});
        for (const auto &r : results)
            t.row() << r.name << r.passed << r.detail;
        return t;
    }
}
