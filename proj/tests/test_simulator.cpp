#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cmgiant/branching.hpp"
#include "cmgiant/simulator.hpp"

using namespace cmgiant;

TEST(DegreeSequence, RejectsOddTotal) {
    EXPECT_THROW(DegreeSequence({1, 2}), std::invalid_argument);
    EXPECT_EQ(DegreeSequence({1, 3}).total(), 4u);
}

TEST(Sampling, PointMassNeedsNoFix) {
    const auto ds = sample_degree_sequence(FinitePmf::point_mass(2), 10, 1);
    for (auto d : ds.degrees()) EXPECT_EQ(d, 2u);
}

TEST(Sampling, ParityFixBumpsOneNode) {
    const auto ds = sample_degree_sequence(FinitePmf::point_mass(1), 3, 7);
    EXPECT_EQ(ds.total(), 4u);
    EXPECT_EQ(std::count(ds.degrees().begin(), ds.degrees().end(), 2u), 1);
}

TEST(Sampling, PoissonEmpiricalPmf) {
    constexpr std::uint64_t n = 1'000'000;
    const auto ds = sample_degree_sequence(Poisson{2.0}, n, 3);
    std::vector<double> counts(11, 0.0);
    for (auto d : ds.degrees())
        if (d <= 10) counts[d] += 1;
    for (std::uint64_t k = 0; k <= 10; ++k) {
        const double p = pmf(Poisson{2.0}, k);
        const double se = std::sqrt(p * (1 - p) / n);
        EXPECT_NEAR(counts[k] / n, p, 3 * se) << "k = " << k;
    }
}

TEST(Sampling, MixedAndThinnedMeans) {
    constexpr std::uint64_t n = 400'000;
    const std::vector<DegreeDistribution> laws{
        Binomial{10, 0.3},
        MixedPoisson{Pareto{3.0, 2.0}},
        MixedPoisson{Lognormal{0.2, 0.4}},
        MixedPoisson{Dirac{1.5}},
        DegreeDistribution::thinned(Poisson{4.0}, 0.25),
        FinitePmf({{0, 0.2}, {3, 0.5}, {8, 0.3}}),
    };
    for (const auto& d : laws) {
        const auto ds = sample_degree_sequence(d, n, 17);
        const double emp = static_cast<double>(ds.total()) / n;
        const double sd = std::sqrt(variance(d) / n);
        EXPECT_NEAR(emp, mean(d), 5 * sd + 1.0 / n);
    }
}

TEST(Sampling, SeedDeterminism) {
    const auto a = sample_degree_sequence(Poisson{3.0}, 1000, 42);
    const auto b = sample_degree_sequence(Poisson{3.0}, 1000, 42);
    const auto c = sample_degree_sequence(Poisson{3.0}, 1000, 43);
    EXPECT_EQ(a.degrees(), b.degrees());
    EXPECT_NE(a.degrees(), c.degrees());
    EXPECT_EQ(match_stubs(a, 5).edges, match_stubs(b, 5).edges);
}

TEST(Matching, SmallCases) {
    const auto g = match_stubs(DegreeSequence({1, 1}), 1);
    ASSERT_EQ(g.edges.size(), 1u);
    EXPECT_EQ(std::minmax(g.edges[0].first, g.edges[0].second), std::minmax(0u, 1u));
    const auto loop = match_stubs(DegreeSequence({2}), 1);
    ASSERT_EQ(loop.edges.size(), 1u);
    EXPECT_EQ(loop.edges[0], MultiGraph::Edge(0, 0));
    EXPECT_EQ(loop.degrees(), std::vector<std::uint64_t>{2});
}

TEST(Matching, UniformOverPerfectMatchings) {
    constexpr int trials = 30'000;
    int hits = 0;
    const DegreeSequence ds({1, 1, 1, 1});
    for (int s = 0; s < trials; ++s) {
        const auto g = match_stubs(ds, static_cast<std::uint64_t>(s));
        const auto a = std::minmax(g.edges[0].first, g.edges[0].second);
        hits += (a == std::minmax(0u, 1u) || a == std::minmax(2u, 3u));
    }
    const double p = 1.0 / 3, sd = std::sqrt(p * (1 - p) / trials);
    EXPECT_NEAR(static_cast<double>(hits) / trials, p, 3 * sd);
}

TEST(Matching, StubConservation) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto ds = sample_degree_sequence(MixedPoisson{Pareto{2.5, 1.0}}, 5000, seed);
        const auto g = match_stubs(ds, seed + 100);
        EXPECT_EQ(2 * g.edges.size(), ds.total());
        EXPECT_EQ(g.degrees(), ds.degrees());
    }
}

TEST(Components, Examples) {
    MultiGraph path{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}};
    EXPECT_EQ(largest_component_fraction(path), 1.0);
    EXPECT_EQ(largest_component_fraction(MultiGraph{5, {}}), 0.2);
    MultiGraph two{5, {{0, 1}, {1, 2}, {3, 4}, {3, 4}, {2, 2}}};
    EXPECT_EQ(largest_component_fraction(two), 0.6);
    EXPECT_THROW(largest_component_fraction(MultiGraph{}), std::invalid_argument);
}

TEST(EdgeList, OneIndexedWithLoops) {
    std::ostringstream os;
    write_edge_list(os, MultiGraph{3, {{0, 1}, {2, 2}}});
    EXPECT_EQ(os.str(), "1 2\n3 3\n");
}

TEST(Simulate, Basics) {
    const auto s = simulate_zeta(Poisson{2.0}, 20000, 4, 9);
    EXPECT_EQ(s.fractions.size(), 4u);
    EXPECT_NEAR(s.mean, std::accumulate(s.fractions.begin(), s.fractions.end(), 0.0) / 4, 1e-15);
    for (double f : s.fractions) {
        EXPECT_GT(f, 0.0);
        EXPECT_LE(f, 1.0);
    }
    ASSERT_TRUE(s.predicted_zeta);
    EXPECT_NEAR(*s.predicted_zeta, 0.7968, 1e-4);
    EXPECT_FALSE(s.outside_regularity);
    EXPECT_THROW(simulate_zeta(Poisson{2.0}, 0, 1, 1), std::invalid_argument);
    EXPECT_THROW(simulate_zeta(Poisson{2.0}, 10, 0, 1), std::invalid_argument);
}

TEST(Simulate, Determinism) {
    MultiGraph g1, g2;
    const auto a = simulate_zeta(MixedPoisson{Pareto{2.5, 1.5}}, 5000, 3, 77, &g1);
    const auto b = simulate_zeta(MixedPoisson{Pareto{2.5, 1.5}}, 5000, 3, 77, &g2);
    EXPECT_EQ(a.fractions, b.fractions);
    EXPECT_EQ(g1.edges, g2.edges);
}

TEST(Simulate, Labels) {
    const auto two = simulate_zeta(FinitePmf::point_mass(2), 1000, 2, 1);
    EXPECT_TRUE(two.outside_regularity);
    EXPECT_NEAR(*two.predicted_zeta, 1.0, 1e-12);
    EXPECT_TRUE(simulate_zeta(MixedPoisson{Pareto{1.8, 1.0}}, 1000, 1, 1).outside_regularity);
    EXPECT_FALSE(simulate_zeta(FinitePmf::point_mass(0), 10, 1, 1).predicted_zeta.has_value());
}

TEST(Simulate, SubcriticalIsSmall) {
    EXPECT_LT(simulate_zeta(Poisson{0.8}, 100000, 5, 4).mean, 0.01);
    EXPECT_LT(simulate_zeta(FinitePmf({{1, 0.5}, {2, 0.5}}), 100000, 5, 4).mean, 0.01);
}

TEST(Simulate, ConvergenceTrend) {
    const double target = zeta_cm(Poisson{2.0}).zeta_cm;
    double prev_err = 1.0, prev_sd = 1.0;
    for (std::uint64_t n : {1000u, 10000u, 100000u}) {
        const auto s = simulate_zeta(Poisson{2.0}, n, 20, 12);
        const double err = std::abs(s.mean - target);
        EXPECT_LE(err, prev_err + 2 * prev_sd) << "n = " << n;
        prev_err = err;
        prev_sd = s.stddev;
    }
}
