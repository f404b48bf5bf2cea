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
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "../core/parallel.hpp"
#include "../evolver/ga.hpp"
#include "../evolver/nsga2.hpp"
#include "../evolver/presets.hpp"
#include "system_a.hpp"
#include "system_b.hpp"

namespace isacsim::scenarios
{
    inline double median(std::vector<double> v)
    {
        detail::require(!v.empty(), "median of an empty sample");
        std::sort(v.begin(), v.end());
        const std::size_t h = v.size() / 2;
        return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    }

    /// Shared knobs. Cells run concurrently on `workers` threads; every solve
    /// inside a cell is single-threaded and seeded with the cell's seed, so the
    /// output does not depend on the worker count.
    struct SweepOptions
    {
        evolver::EvolverConfig evolver = evolver::presets::desk();
        std::size_t workers = 1;
    };

    namespace cell
    {
        inline evolver::EvolverConfig config(const SweepOptions &o, std::uint64_t seed)
        {
            evolver::EvolverConfig c = o.evolver;
            c.seed = seed;
            c.workers = 1;
            return c;
        }

        // Index of the best genome under p, feasibility first. Ties go to `own`,
        // then to the lower index.
        template <evolver::Problem P>
        std::size_t best_of(const P &p, const std::vector<const std::vector<double> *> &genomes, std::size_t own)
        {
            auto score = [&](std::size_t i) {
                const auto e = p.evaluate(*genomes[i]);
                return evolver::Individual{{}, e.objectives, e.violation};
            };
            std::size_t best = own;
            evolver::Individual incumbent = score(own);
            for (std::size_t i = 0; i < genomes.size(); ++i)
            {
                if (i == own)
                    continue;
                auto cand = score(i);
                if (evolver::better_single(cand, incumbent))
                {
                    best = i;
                    incumbent = std::move(cand);
                }
            }
            return best;
        }
    }

    // ---- single solve ------------------------------------------------------

    struct SystemBSolution
    {
        std::uint64_t seed = 0;
        double min_gain = 0.0;
        double min_sinr = 0.0;
        bool feasible = false;
        std::vector<double> genome;
    };

    inline SystemBSolution solve_system_b(const SystemBScenario &scn, std::uint64_t seed, const SweepOptions &o)
    {
        const SystemBProblem problem(scn, seed);
        const auto r = evolver::run_ga(problem, cell::config(o, seed));
        const auto m = problem.metrics(r.best.genome);
        return {seed, m.min_beampattern_gain, m.min_sinr, r.feasible, r.best.genome};
    }

    inline std::vector<SystemBSolution> single_solve(const SystemBScenario &scn, std::span<const std::uint64_t> seeds,
                                                     const SweepOptions &o)
    {
        std::vector<SystemBSolution> out(seeds.size());
        parallel_for(seeds.size(), o.workers, [&](std::size_t i) { out[i] = solve_system_b(scn, seeds[i], o); });
        return out;
    }

    // ---- altitude sweep ----------------------------------------------------

    struct AltitudeCell
    {
        double altitude = 0.0;
        std::uint64_t seed = 0;
        double min_gain = 0.0;
        double min_sinr = 0.0;
        bool feasible = false;
        double angular_spread = 0.0;  // rad, users and targets seen from the HAPS
        double reference_power = 0.0; // W, fixed precoder into a nadir probe user
        std::vector<double> genome;
    };

    struct AltitudePoint
    {
        double altitude = 0.0;
        double median_min_gain = 0.0;
        double median_min_sinr = 0.0;
        double median_angular_spread = 0.0;
        double median_reference_power = 0.0;
        std::size_t feasible_count = 0;
        std::size_t seeds = 0;
    };

    struct AltitudeSweep
    {
        std::vector<AltitudeCell> cells; // altitude-major
        std::vector<AltitudePoint> points;
    };

    /// Received power of a probe user directly below the HAPS under a precoder
    /// that depends only on the seed. The nadir steering vector and the scattered
    /// part are altitude independent, so only the path gain changes with altitude.
    inline double nadir_reference_power(const SystemBScenario &scn, std::uint64_t seed)
    {
        Rng rng = make_stream({seed, tag(StreamTag::probe)});
        const auto n = static_cast<Eigen::Index>(scn.array.elements());
        const auto beams = static_cast<Eigen::Index>(std::max<std::size_t>(scn.users, 1));
        cmat w(n, beams);
        for (Eigen::Index c = 0; c < beams; ++c)
            for (Eigen::Index r = 0; r < n; ++r)
                w(r, c) = complex_gaussian(rng);
        w *= std::sqrt(scn.p_max) / w.norm();

        const Position probe{scn.haps.x, scn.haps.y, 0.0};
        const RicianParams params{scn.k_factor, fspl_gain(distance(scn.haps, probe), scn.link.carrier_freq)};
        const auto h = rician_channel(rng, params, single_antenna(),
                                      steering_vector(scn.array, direction_between(scn.haps, probe)));
        return (h.matrix * w).squaredNorm();
    }

    inline double layout_spread(const SystemBScenario &scn, const Layout &layout)
    {
        std::vector<Position> pts = layout.users;
        for (const auto &t : layout.targets)
            pts.push_back(t.position);
        return angular_spread(scn.haps, pts);
    }

    inline AltitudeSweep altitude_sweep(const SystemBScenario &scn, std::span<const double> altitudes,
                                        std::span<const std::uint64_t> seeds, const SweepOptions &o)
    {
        detail::require(!altitudes.empty() && !seeds.empty(), "altitude sweep needs altitudes and seeds");
        AltitudeSweep out;
        out.cells.resize(altitudes.size() * seeds.size());
        parallel_for(out.cells.size(), o.workers, [&](std::size_t i) {
            SystemBScenario s = scn;
            s.haps.z = altitudes[i / seeds.size()];
            const std::uint64_t seed = seeds[i % seeds.size()];
            const SystemBProblem problem(s, seed);
            const auto r = evolver::run_ga(problem, cell::config(o, seed));
            const auto m = problem.metrics(r.best.genome);
            out.cells[i] = {s.haps.z,
                            seed,
                            m.min_beampattern_gain,
                            m.min_sinr,
                            r.feasible,
                            layout_spread(s, problem.instance().layout()),
                            nadir_reference_power(s, seed),
                            r.best.genome};
        });

        for (std::size_t a = 0; a < altitudes.size(); ++a)
        {
            std::vector<double> gain, sinr, spread, ref;
            AltitudePoint p;
            p.altitude = altitudes[a];
            p.seeds = seeds.size();
            for (std::size_t k = 0; k < seeds.size(); ++k)
            {
                const auto &c = out.cells[a * seeds.size() + k];
                gain.push_back(c.min_gain);
                sinr.push_back(c.min_sinr);
                spread.push_back(c.angular_spread);
                ref.push_back(c.reference_power);
                p.feasible_count += c.feasible ? 1 : 0;
            }
            p.median_min_gain = median(gain);
            p.median_min_sinr = median(sinr);
            p.median_angular_spread = median(spread);
            p.median_reference_power = median(ref);
            out.points.push_back(p);
        }
        return out;
    }

    // ---- beampattern threshold sweep (dual problem) ------------------------

    struct ThresholdCell
    {
        double gamma_fraction = 0.0; // of p_max * N
        double gamma = 0.0;          // W
        DecoderKind decoder = DecoderKind::single_antenna;
        std::uint64_t seed = 0;
        double min_sinr = 0.0;
        double min_rate = 0.0;
        double min_gain = 0.0;
        bool feasible = false;
        double source_fraction = 0.0; // threshold of the solve that produced the genome
        std::vector<double> genome;
    };

    struct ThresholdPoint
    {
        DecoderKind decoder = DecoderKind::single_antenna;
        double gamma_fraction = 0.0;
        double gamma = 0.0;
        double median_min_rate = 0.0;
        std::size_t feasible_count = 0;
        std::size_t seeds = 0;
    };

    struct ThresholdSweep
    {
        std::vector<ThresholdCell> cells; // decoder-major, then threshold, then seed
        std::vector<ThresholdPoint> points;
    };

    /// Solves the dual problem for every (decoder, threshold, seed). A genome that
    /// meets a higher threshold also meets every lower one, so each cell finally
    /// keeps the best feasible genome among all solves of its (decoder, seed).
    inline ThresholdSweep threshold_sweep(const SystemBScenario &scn, std::span<const double> fractions,
                                          std::span<const DecoderKind> decoders, std::span<const std::uint64_t> seeds,
                                          const SweepOptions &o)
    {
        detail::require(!fractions.empty() && !decoders.empty() && !seeds.empty(),
                        "threshold sweep needs thresholds, decoders and seeds");
        for (double f : fractions)
            detail::require(f >= 0.0 && std::isfinite(f), "threshold fractions must be non-negative");
        const double unit = scn.p_max * static_cast<double>(scn.array.elements());
        const std::size_t nf = fractions.size(), ns = seeds.size();

        std::vector<SystemBInstance> instances;
        for (auto seed : seeds)
            instances.emplace_back(scn, seed);

        ThresholdSweep out;
        out.cells.resize(decoders.size() * nf * ns);
        auto index = [&](std::size_t d, std::size_t f, std::size_t s) { return (d * nf + f) * ns + s; };

        parallel_for(out.cells.size(), o.workers, [&](std::size_t i) {
            const std::size_t d = i / (nf * ns), f = (i / ns) % nf, s = i % ns;
            const SystemBDualProblem problem(instances[s], fractions[f] * unit, decoders[d]);
            const auto r = evolver::run_ga(problem, cell::config(o, seeds[s]));
            auto &c = out.cells[i];
            c.gamma_fraction = fractions[f];
            c.gamma = fractions[f] * unit;
            c.decoder = decoders[d];
            c.seed = seeds[s];
            c.source_fraction = fractions[f];
            c.genome = r.best.genome;
        });

        // Pool the solves of each (decoder, seed) and keep the best genome per threshold.
        std::vector<ThresholdCell> polished(out.cells.size());
        parallel_for(decoders.size() * ns, o.workers, [&](std::size_t job) {
            const std::size_t d = job / ns, s = job % ns;
            std::vector<const std::vector<double> *> pool;
            for (std::size_t g = 0; g < nf; ++g)
                pool.push_back(&out.cells[index(d, g, s)].genome);
            for (std::size_t f = 0; f < nf; ++f)
            {
                const SystemBDualProblem problem(instances[s], fractions[f] * unit, decoders[d]);
                const std::size_t pick = cell::best_of(problem, pool, f);
                ThresholdCell c = out.cells[index(d, f, s)];
                c.source_fraction = fractions[pick];
                c.genome = *pool[pick];
                const auto e = problem.evaluate(c.genome);
                c.feasible = e.violation == 0.0;
                c.min_sinr = e.objectives[0];
                c.min_rate = achievable_rate(c.min_sinr);
                c.min_gain = instances[s].target_gains(problem.codec().decode(c.genome)).minCoeff();
                polished[index(d, f, s)] = std::move(c);
            }
        });
        out.cells = std::move(polished);

        for (std::size_t d = 0; d < decoders.size(); ++d)
            for (std::size_t f = 0; f < nf; ++f)
            {
                ThresholdPoint p{decoders[d], fractions[f], fractions[f] * unit, 0.0, 0, ns};
                std::vector<double> rates;
                for (std::size_t s = 0; s < ns; ++s)
                {
                    const auto &c = out.cells[index(d, f, s)];
                    rates.push_back(c.min_rate);
                    p.feasible_count += c.feasible ? 1 : 0;
                }
                p.median_min_rate = median(rates);
                out.points.push_back(p);
            }
        return out;
    }

    // ---- user count sweep: max-min vs. sum-rate baseline -------------------

    enum class Method
    {
        max_min,
        sum_rate,
    };

    inline std::string_view to_string(Method m) { return m == Method::max_min ? "max_min" : "sum_rate"; }

    struct UserCountCell
    {
        std::size_t users = 0;
        std::uint64_t seed = 0;
        Method method = Method::max_min;
        Method source = Method::max_min; // solve that produced the genome
        double min_rate = 0.0;
        double sum_rate = 0.0;
        bool feasible = false;
        std::vector<double> genome;
    };

    struct UserCountPoint
    {
        std::size_t users = 0;
        Method method = Method::max_min;
        double median_min_rate = 0.0;
        double median_sum_rate = 0.0;
        std::size_t feasible_count = 0;
        std::size_t seeds = 0;
    };

    struct UserCountSweep
    {
        std::vector<UserCountCell> cells; // user count, seed, method
        std::vector<UserCountPoint> points;
    };

    inline UserCountCell rate_summary(const SystemAProblemBase &p, std::span<const double> genome)
    {
        UserCountCell c;
        c.genome.assign(genome.begin(), genome.end());
        if (const auto m = p.metrics(genome))
        {
            c.feasible = true;
            c.min_rate = min_of(m->rate_per_user);
            for (double r : m->rate_per_user)
                c.sum_rate += r;
        }
        return c;
    }

    inline UserCountSweep user_count_sweep(const SystemAScenario &scn, std::span<const std::size_t> user_counts,
                                           std::span<const std::uint64_t> seeds, const SweepOptions &o)
    {
        detail::require(!user_counts.empty() && !seeds.empty(), "user count sweep needs user counts and seeds");
        detail::require(scn.user_placements.empty(), "user count sweep needs a random user layout");
        const std::size_t ns = seeds.size();
        std::vector<SystemAInstance> instances;
        for (std::size_t u = 0; u < user_counts.size(); ++u)
            for (std::size_t k = 0; k < ns; ++k)
            {
                SystemAScenario sc = scn;
                sc.users = user_counts[u];
                instances.emplace_back(sc, seeds[k]);
            }

        // Both methods share channels and budgets; cell i is (instance i / 2, method i % 2).
        auto method_of = [](std::size_t i) { return i % 2 == 0 ? Method::max_min : Method::sum_rate; };
        std::vector<std::vector<double>> solved(instances.size() * 2);
        parallel_for(solved.size(), o.workers, [&](std::size_t i) {
            const auto &inst = instances[i / 2];
            const auto cfg = cell::config(o, seeds[(i / 2) % ns]);
            if (method_of(i) == Method::max_min)
                solved[i] = evolver::run_ga(ScalarizedSystemA(inst, 0.0), cfg).best.genome;
            else
                solved[i] = evolver::run_ga(SumRateProblem(inst), cfg).best.genome;
        });

        // Each method keeps whichever of the two genomes scores better under its own objective.
        UserCountSweep out;
        out.cells.resize(solved.size());
        parallel_for(solved.size(), o.workers, [&](std::size_t i) {
            const auto &inst = instances[i / 2];
            const std::vector<const std::vector<double> *> pool{&solved[i & ~std::size_t{1}],
                                                                &solved[i | std::size_t{1}]};
            const std::size_t own = i % 2;
            std::size_t pick = own;
            if (method_of(i) == Method::max_min)
                pick = cell::best_of(ScalarizedSystemA(inst, 0.0), pool, own);
            else
                pick = cell::best_of(SumRateProblem(inst), pool, own);
            UserCountCell c = rate_summary(SumRateProblem(inst), *pool[pick]);
            c.users = inst.scenario().users;
            c.seed = seeds[(i / 2) % ns];
            c.method = method_of(i);
            c.source = method_of(pick);
            out.cells[i] = std::move(c);
        });

        for (std::size_t u = 0; u < user_counts.size(); ++u)
            for (Method m : {Method::max_min, Method::sum_rate})
            {
                UserCountPoint p{user_counts[u], m, 0.0, 0.0, 0, ns};
                std::vector<double> mins, sums;
                for (std::size_t k = 0; k < ns; ++k)
                {
                    const auto &c = out.cells[(u * ns + k) * 2 + (m == Method::max_min ? 0 : 1)];
                    mins.push_back(c.min_rate);
                    sums.push_back(c.sum_rate);
                    p.feasible_count += c.feasible ? 1 : 0;
                }
                p.median_min_rate = median(mins);
                p.median_sum_rate = median(sums);
                out.points.push_back(p);
            }
        return out;
    }

    // ---- scalarization weight sweep ----------------------------------------

    struct MuCell
    {
        double mu = 0.0;
        std::uint64_t seed = 0;
        double source_mu = 0.0; // weight of the solve that produced the genome
        double eta = 0.0;       // min SINR, linear
        double omega = 0.0;     // echo power at the HAPS, W
        double objective = 0.0; // normalized scalarization
        bool feasible = false;
        std::vector<double> genome;
    };

    struct MuReference
    {
        std::uint64_t seed = 0;
        double eta_star = 1.0;
        double omega_star = 1.0;
    };

    struct MuPoint
    {
        double mu = 0.0;
        double median_eta = 0.0;
        double median_omega = 0.0;
        std::size_t feasible_count = 0;
        std::size_t seeds = 0;
    };

    struct MuSweep
    {
        std::vector<MuReference> references;
        std::vector<MuCell> cells; // mu-major
        std::vector<MuPoint> points;
    };

    /// eta and omega are normalized by their single-objective optima, each found by
    /// a GA run at mu = 0 and mu = 1 with unit references.
    inline MuSweep mu_sweep(const SystemAScenario &scn, std::span<const double> mus,
                            std::span<const std::uint64_t> seeds, const SweepOptions &o)
    {
        detail::require(!mus.empty() && !seeds.empty(), "mu sweep needs weights and seeds");
        const std::size_t ns = seeds.size();
        std::vector<SystemAInstance> instances;
        for (auto seed : seeds)
            instances.emplace_back(scn, seed);

        MuSweep out;
        out.references.resize(ns);
        std::vector<double> refs(2 * ns);
        parallel_for(2 * ns, o.workers, [&](std::size_t i) {
            const ScalarizedSystemA p(instances[i / 2], i % 2 == 0 ? 0.0 : 1.0);
            const auto r = evolver::run_ga(p, cell::config(o, seeds[i / 2]));
            refs[i] = r.feasible ? r.best.objectives[0] : 0.0;
        });
        for (std::size_t s = 0; s < ns; ++s)
        {
            // A degenerate optimum would break the normalization; fall back to unit scale.
            const double eta = refs[2 * s], omega = refs[2 * s + 1];
            out.references[s] = {seeds[s], eta > 0.0 ? eta : 1.0, omega > 0.0 ? omega : 1.0};
        }

        std::vector<std::vector<double>> solved(mus.size() * ns);
        parallel_for(solved.size(), o.workers, [&](std::size_t i) {
            const std::size_t s = i % ns;
            const auto &ref = out.references[s];
            const ScalarizedSystemA p(instances[s], mus[i / ns], ref.eta_star, ref.omega_star);
            solved[i] = evolver::run_ga(p, cell::config(o, seeds[s])).best.genome;
        });

        // Every weight of a seed picks the best of that seed's solves under its own scalarization.
        out.cells.resize(solved.size());
        parallel_for(solved.size(), o.workers, [&](std::size_t i) {
            const std::size_t k = i / ns, s = i % ns;
            const auto &ref = out.references[s];
            const ScalarizedSystemA p(instances[s], mus[k], ref.eta_star, ref.omega_star);
            std::vector<const std::vector<double> *> pool;
            for (std::size_t j = 0; j < mus.size(); ++j)
                pool.push_back(&solved[j * ns + s]);
            const std::size_t pick = cell::best_of(p, pool, k);
            const auto e = p.evaluate(*pool[pick]);
            MuCell c{mus[k], seeds[s], mus[pick], 0.0, 0.0, e.objectives[0], e.violation == 0.0, *pool[pick]};
            if (const auto m = p.metrics(c.genome))
            {
                c.eta = m->min_sinr;
                c.omega = m->sensing_power;
            }
            out.cells[i] = std::move(c);
        });

        for (std::size_t k = 0; k < mus.size(); ++k)
        {
            MuPoint p{mus[k], 0.0, 0.0, 0, ns};
            std::vector<double> eta, omega;
            for (std::size_t s = 0; s < ns; ++s)
            {
                const auto &c = out.cells[k * ns + s];
                eta.push_back(c.eta);
                omega.push_back(c.omega);
                p.feasible_count += c.feasible ? 1 : 0;
            }
            p.median_eta = median(eta);
            p.median_omega = median(omega);
            out.points.push_back(p);
        }
        return out;
    }

    // ---- Pareto front ------------------------------------------------------

    struct ParetoSolution
    {
        std::uint64_t seed = 0;
        std::size_t id = 0;
        double eta = 0.0;
        double omega = 0.0;
        bool feasible = false;
        std::vector<double> genome;
    };

    inline std::vector<std::vector<ParetoSolution>> pareto_front(const SystemAScenario &scn,
                                                                 std::span<const std::uint64_t> seeds,
                                                                 const SweepOptions &o)
    {
        detail::require(!seeds.empty(), "Pareto front needs seeds");
        std::vector<std::vector<ParetoSolution>> out(seeds.size());
        parallel_for(seeds.size(), o.workers, [&](std::size_t i) {
            const SystemAProblem p(scn, seeds[i]);
            const auto r = evolver::run_nsga2(p, cell::config(o, seeds[i]));
            for (std::size_t k = 0; k < r.front.size(); ++k)
            {
                const auto &ind = r.front[k];
                out[i].push_back({seeds[i], k, ind.objectives[0], ind.objectives[1], ind.feasible(), ind.genome});
            }
        });
        return out;
    }
}
