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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <isacsim/evolver/ga.hpp>
#include <isacsim/evolver/hypervolume.hpp>
#include <isacsim/evolver/nsga2.hpp>
#include <isacsim/evolver/presets.hpp>
#include <isacsim/evolver/test_problems.hpp>
#include <isacsim/harness/selftest.hpp>

using namespace isacsim;
using namespace isacsim::evolver;

namespace
{
    Individual ind(std::vector<double> obj, double violation = 0.0)
    {
        Individual i;
        i.objectives = std::move(obj);
        i.violation = violation;
        return i;
    }

    EvolverConfig small(std::uint64_t seed, std::size_t gens = 60)
    {
        auto c = presets::desk();
        c.population_size = 40;
        c.generations = gens;
        c.seed = seed;
        return c;
    }
}

TEST(Dominance, ParetoRules)
{
    EXPECT_TRUE(pareto_dominates(std::vector{2.0, 1.0}, std::vector{1.0, 1.0}));
    EXPECT_FALSE(pareto_dominates(std::vector{1.0, 1.0}, std::vector{1.0, 1.0}));
    EXPECT_FALSE(pareto_dominates(std::vector{2.0, 0.0}, std::vector{1.0, 1.0}));
}

TEST(Dominance, FeasibilityFirst)
{
    EXPECT_TRUE(dominates(ind({0.0}), ind({100.0}, 0.1)));
    EXPECT_TRUE(dominates(ind({0.0}, 0.1), ind({100.0}, 0.2)));
    EXPECT_FALSE(dominates(ind({0.0}, 0.2), ind({0.0}, 0.2)));
}

TEST(Sorting, MatchesBruteForceOnRandomPopulations)
{
    Rng rng = make_stream({21});
    for (int t = 0; t < 1000; ++t)
    {
        auto pop = harness::oracle::random_population(rng, 2 + static_cast<std::size_t>(t % 40), 1 + t % 3);
        const auto want = harness::oracle::brute_force_ranks(pop);
        const auto fronts = non_dominated_sort(std::span<Individual>(pop));
        std::size_t members = 0;
        for (std::size_t f = 0; f < fronts.size(); ++f)
            for (auto i : fronts[f])
            {
                ASSERT_EQ(pop[i].rank, f);
                ++members;
            }
        ASSERT_EQ(members, pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i)
            ASSERT_EQ(pop[i].rank, want[i]) << "population " << t << " member " << i;
    }
}

TEST(Sorting, EmptyPopulationRejected)
{
    std::vector<Individual> none;
    EXPECT_THROW(non_dominated_sort(std::span<Individual>(none)), std::invalid_argument);
}

TEST(Crowding, InteriorPointSumsNormalizedGaps)
{
    std::vector<Individual> pop{ind({0.0, 3.0}), ind({1.0, 1.0}), ind({3.0, 0.0})};
    const std::vector<std::size_t> front{0, 1, 2};
    const auto d = crowding_distance(std::span<Individual>(pop), front);
    EXPECT_TRUE(std::isinf(d[0]));
    EXPECT_TRUE(std::isinf(d[2]));
    EXPECT_NEAR(d[1], 2.0, 1e-15);
}

TEST(Hypervolume, TwoPointUnion)
{
    const std::vector<Point2> pts{{1.0, 2.0}, {2.0, 1.0}};
    EXPECT_NEAR(hypervolume_2d(pts, {0.0, 0.0}), 3.0, 1e-15);
    // Dominated and out-of-box points add nothing.
    const std::vector<Point2> more{{1.0, 2.0}, {2.0, 1.0}, {0.5, 0.5}, {-1.0, 5.0}};
    EXPECT_NEAR(hypervolume_2d(more, {0.0, 0.0}), 3.0, 1e-15);
}

TEST(Zdt1, KnownValues)
{
    const std::vector<double> zero(10, 0.0);
    const auto f = problems::zdt1_values(zero);
    EXPECT_DOUBLE_EQ(f[0], 0.0);
    EXPECT_DOUBLE_EQ(f[1], 1.0);
    std::vector<std::array<double, 2>> exact;
    for (int i = 0; i <= 2000; ++i)
    {
        const double f1 = i / 2000.0;
        exact.push_back({f1, 1.0 - std::sqrt(f1)});
    }
    EXPECT_LT(problems::zdt1_igd(exact), 1e-3);
}

TEST(Variation, OperatorsRespectBounds)
{
    Rng rng = make_stream({22});
    const Bounds b{{-1.0, 0.0}, {1.0, 2.0}};
    for (int i = 0; i < 1000; ++i)
    {
        const auto x = random_genome(b, rng);
        const auto m = gaussian_mutation(x, b, 5.0, rng);
        const auto y = random_genome(b, rng);
        const auto c = arithmetic_crossover(x, y, rng);
        for (std::size_t d = 0; d < 2; ++d)
        {
            EXPECT_GE(m[d], b.lower[d]);
            EXPECT_LE(m[d], b.upper[d]);
            EXPECT_GE(c[d], std::min(x[d], y[d]) - 1e-15);
            EXPECT_LE(c[d], std::max(x[d], y[d]) + 1e-15);
        }
    }
}

TEST(Config, Validation)
{
    auto c = presets::desk();
    EXPECT_NO_THROW(validate(c));
    c.population_size = 51;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = presets::desk();
    c.crossover_fraction = 1.5;
    EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(Presets, Budgets)
{
    const auto d = presets::desk();
    EXPECT_EQ(d.population_size, 100u);
    EXPECT_EQ(d.generations, 200u);
    EXPECT_EQ(presets::paper_system_a().population_size, 1700u);
    EXPECT_EQ(presets::paper_system_a().generations, 5000u);
    EXPECT_EQ(presets::paper_system_b().population_size, 2500u);
    EXPECT_EQ(presets::paper_system_b().generations, 1500u);
    EXPECT_FALSE(presets::by_name("huge", presets::Family::system_a));
}

TEST(Ga, SolvesSphere)
{
    const problems::Sphere p{6, -2.0, 2.0};
    const auto r = run_ga(p, presets::desk());
    EXPECT_TRUE(r.feasible);
    EXPECT_GT(r.best.objectives[0], -1e-4);
}

TEST(Ga, RespectsConstraint)
{
    const problems::Sphere p{3, -1.0, 1.0, -0.5}; // x0 <= -0.5 forces the optimum to the boundary
    const auto r = run_ga(p, small(3, 120));
    ASSERT_TRUE(r.feasible);
    EXPECT_LE(r.best.genome[0], -0.5);
    EXPECT_NEAR(r.best.objectives[0], -0.25, 1e-2);
}

TEST(Ga, ElitismKeepsPopulationBest)
{
    const problems::Sphere p{5, -3.0, 3.0, 0.0};
    const auto r = run_ga(p, small(4));
    double prev = -INFINITY;
    for (const auto &g : r.trace)
        if (!std::isnan(g.population_best))
        {
            EXPECT_GE(g.population_best, prev);
            prev = g.population_best;
        }
}

TEST(Ga, IndependentOfWorkerCount)
{
    const problems::Sphere p{8, -1.0, 1.0};
    auto one = small(5, 30), four = small(5, 30);
    four.workers = 4;
    EXPECT_EQ(run_ga(p, one).best.genome, run_ga(p, four).best.genome);
}

TEST(Ga, ConstantProblemIsStable)
{
    const auto r = run_ga(problems::Constant{}, small(6, 5));
    EXPECT_EQ(r.best.objectives[0], 1.0);
    EXPECT_EQ(r.trace.size(), 6u);
}

TEST(Ga, RejectsMultiObjective)
{
    EXPECT_THROW(run_ga(problems::Zdt1{}, small(1)), std::invalid_argument);
}

TEST(Nsga2, KeepsBothExtremesOfTwoPoints)
{
    const auto r = run_nsga2(problems::TwoPoint{}, small(7, 10));
    ASSERT_TRUE(r.feasible);
    bool low = false, high = false;
    for (const auto &i : r.front)
    {
        low = low || i.objectives[0] == 0.0;
        high = high || i.objectives[0] == 1.0;
    }
    EXPECT_TRUE(low && high);
}

TEST(Nsga2, ApproachesZdt1FrontQuickly)
{
    EvolverConfig cfg;
    cfg.population_size = 40;
    cfg.generations = 100;
    cfg.seed = 8;
    const auto r = run_nsga2(problems::Zdt1{}, cfg);
    std::vector<std::array<double, 2>> front;
    for (const auto &i : r.front)
        front.push_back({-i.objectives[0], -i.objectives[1]});
    EXPECT_LT(problems::zdt1_igd(front), 0.3);
}
