#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "corrnet/error.hpp"
#include "corrnet/filters.hpp"
#include "oracles.hpp"

using namespace corrnet;

namespace {

SimilarityMatrix hub_matrix() {
    // Stock 0 is 0.9-similar to everyone; all other pairs are 0.01.
    SimilarityMatrix sim;
    sim.stocks = {"H", "A", "B", "C", "D", "E"};
    sim.values = Eigen::MatrixXd::Constant(6, 6, 0.01);
    for (Eigen::Index j = 1; j < 6; ++j) sim.values(0, j) = sim.values(j, 0) = 0.9;
    sim.values.diagonal().setZero();
    return sim;
}

}  // namespace

TEST_CASE("round half up") {
    CHECK(round_half_up(2.5) == 3);
    CHECK(round_half_up(2.4999) == 2);
    CHECK(round_half_up(0.5) == 1);
    CHECK(round_half_up(7.0) == 7);
    // Accumulated error just under a half still rounds up.
    CHECK(round_half_up(0.1 + 0.2 + 0.2) == 1);
}

TEST_CASE("cascade rounding preserves the rounded total") {
    const std::vector<double> even(5, 2.4);
    CHECK(cascade_round(even) == std::vector<std::size_t>{2, 3, 2, 3, 2});
    const std::vector<double> small{0.6, 0.6, 0.8};
    CHECK(cascade_round(small) == std::vector<std::size_t>{1, 0, 1});
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> d(1 + static_cast<std::size_t>(trial % 30));
        for (auto& x : d) x = u(rng);
        const auto r = cascade_round(d);
        const double total = std::accumulate(d.begin(), d.end(), 0.0);
        CHECK(static_cast<long long>(std::accumulate(r.begin(), r.end(), std::size_t{0})) == round_half_up(total));
        double prefix = 0.0;
        std::size_t rounded = 0;
        for (std::size_t k = 0; k < d.size(); ++k) {
            prefix += d[k];
            rounded += r[k];
            CHECK(static_cast<long long>(rounded) == round_half_up(prefix));
        }
    }
}

TEST_CASE("proportional degrees") {
    const SimilarityMatrix sim = oracle::random_similarity(12, 8);
    const StockWeights w = stock_weights(sim);
    const auto d = proportional_degrees(w, 30);
    CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(60.0).epsilon(1e-12));
    StockWeights scaled = w;
    for (auto& x : scaled.w) x *= 10.0;
    const auto d10 = proportional_degrees(scaled, 30);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d10[i] == doctest::Approx(d[i]).epsilon(1e-13));
    CHECK_THROWS_AS(proportional_degrees(StockWeights{{0.0, 0.0, 0.0}}, 2), ValidationError);
    CHECK_THROWS_AS(proportional_degrees(w, 0), ValidationError);
}

TEST_CASE("descending weight order breaks ties by index") {
    const StockWeights w{{1.0, 3.0, 1.0, 3.0}};
    CHECK(descending_weight_order(w) == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("degree budget clips a dominant hub and re-spreads the surplus") {
    const SimilarityMatrix sim = hub_matrix();
    const DegreeBudget b = degree_budget(stock_weights(sim), 6, 12);
    // Hub: 4.5 / 9.2 * 24 = 11.74 > 5, clipped. The other five share 19 edges
    // equally (3.8 each): cascade gives 4, 4, 3, 4, 4.
    CHECK(b.int_budgets == std::vector<std::size_t>{5, 4, 4, 3, 4, 4});
    CHECK(b.order.front() == 0);
}

TEST_CASE("PD shortfall is reported, matching a hand-traced greedy run") {
    const SimilarityMatrix sim = hub_matrix();
    const PdNetwork pd = build_pd(sim, 12);
    const std::vector<std::size_t> budgets{5, 4, 4, 3, 4, 4};
    const auto expected = oracle::greedy_pd(sim, budgets, 12);
    CHECK(oracle::edge_pairs(pd.network) == expected);
    CHECK(expected.size() == 11);
    CHECK(pd.shortfall() == 1);
    const auto unmet = pd.unmet_budget();
    CHECK(std::accumulate(unmet.begin(), unmet.end(), std::size_t{0}) == 2);
}

TEST_CASE("PD matches the independent greedy oracle on random inputs") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 6 + seed % 30;
        const SimilarityMatrix sim = oracle::random_similarity(n, seed);
        const std::size_t m = planar_edge_count(n);
        const auto budgets = oracle::unclipped_budgets(sim, m);
        if (*std::max_element(budgets.begin(), budgets.end()) > n - 1) continue;
        const PdNetwork pd = build_pd(sim, m);
        CHECK(pd.budget.int_budgets == budgets);
        CHECK(oracle::edge_pairs(pd.network) == oracle::greedy_pd(sim, budgets, m));
        // Structural guarantees.
        for (std::size_t i = 0; i < n; ++i) CHECK(pd.network.degree(i) <= pd.budget.int_budgets[i]);
        CHECK(pd.network.edge_count() <= m);
    }
}

TEST_CASE("PD keeps the strongest pair and rejects impossible edge counts") {
    const SimilarityMatrix sim = oracle::random_similarity(10, 99);
    const auto pairs = oracle::ranked_pairs(sim);
    const PdNetwork pd = build_pd(sim, 24);
    CHECK(pd.network.has_edge(pairs.front().first, pairs.front().second));
    CHECK(pd.network.weight(pairs.front().first, pairs.front().second) == sim(pairs.front().first, pairs.front().second));
    CHECK_THROWS_AS(build_pd(sim, 46), ValidationError);
    CHECK_NOTHROW(build_pd(sim, 45));
}

TEST_CASE("PMFG matches greedy insertion with an independent planarity test") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const std::size_t n = 4 + seed % 22;
        const SimilarityMatrix sim = oracle::random_similarity(n, 1000 + seed);
        const Network pmfg = build_pmfg(sim);
        CHECK(pmfg.edge_count() == 3 * n - 6);
        CHECK(oracle::edge_pairs(pmfg) == oracle::greedy_pmfg(sim));
        for (const auto& c : maximal_cliques(pmfg)) CHECK(c.members.size() <= 4);
    }
}

TEST_CASE("ties follow the descending-weight relabelling") {
    // All similarities equal: pairs are taken in rank order, which for equal
    // weights is index order.
    SimilarityMatrix sim;
    sim.stocks = {"a", "b", "c", "d", "e"};
    sim.values = Eigen::MatrixXd::Constant(5, 5, 0.5);
    sim.values.diagonal().setZero();
    const auto order = descending_weight_order(stock_weights(sim));
    const auto pairs = ranked_pairs(sim, order);
    CHECK(pairs.front().i == 0);
    CHECK(pairs.front().j == 1);
    CHECK(pairs.back().i == 3);
    CHECK(pairs.back().j == 4);
    const Network pmfg = build_pmfg(sim);
    CHECK(oracle::edge_pairs(pmfg) == oracle::greedy_pmfg(sim));
}
