#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "corrnet/error.hpp"
#include "corrnet/graph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace corrnet;

namespace {

Network make(std::size_t n, const std::vector<oracle::Pair>& edges) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    Network net(names);
    for (const auto& [u, v] : edges) net.add_edge(u, v, 0.5);
    return net;
}

Network complete(std::size_t n) {
    std::vector<oracle::Pair> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return make(n, edges);
}

Network random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<oracle::Pair> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (coin(rng)) edges.emplace_back(i, j);
        }
    }
    return make(n, edges);
}

std::vector<std::vector<std::size_t>> members(const std::vector<Clique>& cliques) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& c : cliques) out.push_back(c.members);
    return out;
}

}  // namespace

TEST_CASE("network construction rules") {
    Network net({"a", "b", "c"});
    net.add_edge(2, 0, 0.7);
    CHECK(net.has_edge(0, 2));
    CHECK(net.weight(2, 0) == 0.7);
    CHECK(net.edges() == std::vector<Edge>{{0, 2, 0.7}});
    CHECK_THROWS_AS(net.add_edge(1, 1, 0.5), ValidationError);
    CHECK_THROWS_AS(net.add_edge(0, 2, 0.5), ValidationError);
    CHECK_THROWS_AS(net.add_edge(0, 1, 1.5), ValidationError);
    CHECK_THROWS_AS(net.add_edge(0, 3, 0.5), ValidationError);
    net.remove_edge(0, 2);
    CHECK(net.edge_count() == 0);
    CHECK_THROWS_AS(net.remove_edge(0, 2), ValidationError);
}

TEST_CASE("planarity of classic graphs") {
    CHECK(is_planar(complete(4)));
    CHECK_FALSE(is_planar(complete(5)));
    std::vector<oracle::Pair> k33;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 3; b < 6; ++b) k33.emplace_back(a, b);
    }
    CHECK_FALSE(is_planar(make(6, k33)));
    // Petersen graph: non-planar without violating the edge bound.
    const std::vector<oracle::Pair> petersen{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 5}, {1, 6}, {2, 7},
                                             {3, 8}, {4, 9}, {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}};
    CHECK_FALSE(is_planar(make(10, petersen)));
    // 4x4 grid is planar.
    std::vector<oracle::Pair> grid;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            if (c + 1 < 4) grid.emplace_back(r * 4 + c, r * 4 + c + 1);
            if (r + 1 < 4) grid.emplace_back(r * 4 + c, (r + 1) * 4 + c);
        }
    }
    CHECK(is_planar(make(16, grid)));
    CHECK(is_planar(make(3, {})));
}

TEST_CASE("planarity agrees with Boyer-Myrvold on random graphs") {
    std::mt19937_64 rng(2024);
    std::size_t planar_count = 0;
    for (int trial = 0; trial < 600; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(trial % 20);
        const double p = 2.6 / static_cast<double>(n) + 0.02 * (trial % 7);
        const Network net = random_graph(n, p, rng);
        const bool expected = oracle::planar(n, oracle::edge_pairs(net));
        planar_count += expected ? 1 : 0;
        REQUIRE(is_planar(net) == expected);
    }
    // Both verdicts must be well represented for the comparison to mean anything.
    CHECK(planar_count > 100);
    CHECK(planar_count < 500);
}

TEST_CASE("subdividing an edge never changes the planarity verdict") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 6 + static_cast<std::size_t>(trial % 8);
        const Network net = random_graph(n, 0.45, rng);
        auto edges = oracle::edge_pairs(net);
        if (edges.empty()) continue;
        const auto [u, v] = edges[static_cast<std::size_t>(trial) % edges.size()];
        edges.erase(edges.begin() + static_cast<long>(static_cast<std::size_t>(trial) % edges.size()));
        edges.emplace_back(u, n);
        edges.emplace_back(v, n);
        CHECK(is_planar(make(n + 1, edges)) == is_planar(net));
    }
}

TEST_CASE("maximal cliques and m-cliques match brute force") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(trial % 9);
        const Network net = random_graph(n, 0.3 + 0.05 * (trial % 10), rng);
        const auto all = oracle::all_cliques(net);
        const auto maximal = oracle::maximal_only(all);

        CHECK(members(maximal_cliques(net)) == maximal);
        std::vector<std::vector<std::size_t>> big;
        for (const auto& c : maximal) {
            if (c.size() >= 3) big.push_back(c);
        }
        CHECK(members(maximal_cliques(net, 3)) == big);

        for (std::size_t m : {2u, 3u, 4u}) {
            std::vector<std::vector<std::size_t>> expected;
            for (const auto& c : all) {
                if (c.size() == m) expected.push_back(c);
            }
            const auto got = enumerate_m_cliques(net, m);
            REQUIRE(members(got) == expected);
            for (const auto& c : got) {
                const bool is_max = std::find(maximal.begin(), maximal.end(), c.members) != maximal.end();
                CHECK(c.maximal == is_max);
            }
        }
    }
}

TEST_CASE("clique helpers") {
    const Network k4 = complete(4);
    const std::vector<std::size_t> trio{0, 1, 3};
    CHECK(is_clique(k4, trio));
    CHECK(enumerate_m_cliques(k4, 3).size() == 4);
    CHECK_THROWS_AS(enumerate_m_cliques(k4, 1), ValidationError);
    const auto cliques = maximal_cliques(make(3, {}));
    CHECK(cliques.size() == 3);  // isolated vertices are maximal singletons
    CHECK(maximal_cliques(make(3, {}), 2).empty());
}

TEST_CASE("edge list and vertex table round-trip") {
    const auto dir = testutil::scratch("graph_io");
    Network net({"A", "B", "C", "D"});
    net.add_edge(0, 1, 0.25);
    net.add_edge(1, 3, 1.0 / 3.0);
    net.set_sectors({"x", "y", "x", "z"});
    write_edge_list(dir / "e.csv", net);
    write_vertex_table(dir / "v.csv", net);
    CHECK(load_network(dir / "e.csv", dir / "v.csv") == net);
}

TEST_CASE("weight and adjacency matrices") {
    Network net({"A", "B", "C"});
    net.add_edge(0, 2, 0.4);
    const Eigen::MatrixXd w = net.weight_matrix();
    CHECK(w(0, 2) == 0.4);
    CHECK(w(2, 0) == 0.4);
    CHECK(w(0, 1) == 0.0);
    CHECK(net.binary_adjacency().sum() == 2.0);
}
