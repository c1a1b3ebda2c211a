#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "corrnet/clustering.hpp"
#include "corrnet/error.hpp"
#include "corrnet/metrics.hpp"
#include "oracles.hpp"

using namespace corrnet;

namespace {

Eigen::MatrixXd two_triangles() {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(6, 6);
    const int edges[][2] = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    for (const auto& e : edges) w(e[0], e[1]) = w(e[1], e[0]) = 1.0;
    return w;
}

Eigen::MatrixXd random_weights(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = i + 1; j < N; ++j) {
            if (coin(rng)) w(i, j) = w(j, i) = u(rng);
        }
    }
    return w;
}

}  // namespace

TEST_CASE("partition canonicalisation") {
    const std::vector<std::size_t> labels{7, 7, 3, 9, 3};
    const Partition p(labels);
    CHECK(p.assignment() == std::vector<std::size_t>{0, 0, 1, 2, 1});
    CHECK(p.cluster_count() == 3);
    CHECK(p.clusters() == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 4}, {3}});
    const std::vector<std::string> names{"x", "y", "x"};
    CHECK(Partition::from_names(names).assignment() == std::vector<std::size_t>{0, 1, 0});
    CHECK(Partition::singletons(3).cluster_count() == 3);
}

TEST_CASE("modularity matches the pairwise definition") {
    const Eigen::MatrixXd w = two_triangles();
    const std::vector<std::size_t> split{0, 0, 0, 1, 1, 1};
    CHECK(modularity(w, Partition(split)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(modularity(w, Partition::single_cluster(6)) == doctest::Approx(0.0).scale(1.0));
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::MatrixXd r = random_weights(12, 0.4, rng);
        if (r.sum() == 0.0) continue;
        std::vector<std::size_t> labels(12);
        for (auto& l : labels) l = rng() % 4;
        CHECK(modularity(r, Partition(labels)) == doctest::Approx(oracle::modularity(r, labels)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(modularity(Eigen::MatrixXd::Zero(3, 3), Partition::singletons(3)), ValidationError);
}

TEST_CASE("Louvain on clear-cut graphs") {
    const std::vector<std::size_t> order{0, 1, 2, 3, 4, 5};
    CHECK(louvain(two_triangles(), order).assignment() == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
    Eigen::MatrixXd k5 = Eigen::MatrixXd::Ones(5, 5);
    k5.diagonal().setZero();
    CHECK(louvain(k5, std::uint64_t{1}).cluster_count() == 1);
    const std::vector<std::size_t> bad{0, 1, 1, 3, 4, 5};
    CHECK_THROWS_AS(louvain(two_triangles(), bad), ValidationError);
}

TEST_CASE("Louvain results admit no improving single-vertex move") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 8 + static_cast<std::size_t>(trial % 17);
        const Eigen::MatrixXd w = random_weights(n, 0.3, rng);
        if (w.sum() == 0.0) continue;
        const Partition p = louvain(w, static_cast<std::uint64_t>(trial));
        const double q = oracle::modularity(w, p.assignment());
        CHECK(q == doctest::Approx(modularity(w, p)).epsilon(1e-12));
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t c = 0; c <= p.cluster_count(); ++c) {
                auto labels = p.assignment();
                labels[v] = c;
                CHECK(oracle::modularity(w, labels) <= q + 1e-12);
            }
        }
    }
}

TEST_CASE("Louvain is deterministic for a given order") {
    std::mt19937_64 rng(23);
    const Eigen::MatrixXd w = random_weights(30, 0.2, rng);
    CHECK(louvain(w, std::uint64_t{5}) == louvain(w, std::uint64_t{5}));
    const auto order = random_order(30, 5);
    CHECK(louvain(w, order) == louvain(w, std::uint64_t{5}));
}

TEST_CASE("generalised spectrum") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd w = random_weights(15, 0.3, rng);
        const EigenSpectrum s = generalized_spectrum(w);
        // L v = lambda D v on the kept vertices.
        const auto m = static_cast<Eigen::Index>(s.vertices.size());
        Eigen::MatrixXd wk(m, m);
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = 0; b < m; ++b) wk(a, b) = w(s.vertices[a], s.vertices[b]);
        }
        const Eigen::VectorXd d = wk.rowwise().sum();
        const Eigen::MatrixXd lap = Eigen::MatrixXd(d.asDiagonal()) - wk;
        for (Eigen::Index k = 0; k < m; ++k) {
            const Eigen::VectorXd v = s.vectors.col(k);
            const Eigen::VectorXd resid = lap * v - s.values(k) * d.cwiseProduct(v);
            CHECK(resid.norm() <= 1e-9 * (1.0 + v.norm()));
            CHECK(s.values(k) >= -1e-10);
            CHECK(s.values(k) <= 2.0 + 1e-10);
        }
    }
}

TEST_CASE("zero eigenvalue multiplicity equals component count") {
    Eigen::MatrixXd w = two_triangles();
    const EigenSpectrum s = generalized_spectrum(w);
    CHECK(std::abs(s.values(0)) < 1e-12);
    CHECK(std::abs(s.values(1)) < 1e-12);
    CHECK(s.values(2) > 1e-6);
}

TEST_CASE("NSC recovers planted blocks and isolates zero-degree vertices") {
    const Eigen::MatrixXd w = oracle::planted_blocks(3, 10, 0.8, 0.1, 0.05, 2);
    std::vector<std::size_t> truth(30);
    for (std::size_t i = 0; i < 30; ++i) truth[i] = i / 10;
    CHECK(ari(nsc(w, 3, 1), Partition(truth)) == 1.0);

    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(32, 32);
    padded.topLeftCorner(30, 30) = w;
    const Partition p = nsc(padded, 3, 1);
    CHECK(p.cluster_count() == 5);
    CHECK(p[30] != p[31]);
    CHECK_THROWS_AS(nsc(w, 1, 1), ValidationError);
    CHECK_THROWS_AS(nsc(w, 31, 1), ValidationError);
}

TEST_CASE("k-means separates distant points") {
    Eigen::MatrixXd pts(6, 2);
    pts << 0, 0, 0.1, 0, 0, 0.1, 10, 10, 10.1, 10, 10, 10.1;
    const KMeansResult r = kmeans(pts, 2, 4);
    CHECK(r.labels[0] == r.labels[1]);
    CHECK(r.labels[0] == r.labels[2]);
    CHECK(r.labels[3] == r.labels[4]);
    CHECK(r.labels[0] != r.labels[3]);
    CHECK(r.inertia == doctest::Approx(4 * 0.1 * 0.1 * 2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("eigengap selection") {
    const std::vector<double> values{0.0, 0.1, 0.2, 0.3, 1.0, 1.1, 1.5, 1.6};
    CHECK(eigengap_k(values, 2, 6) == 4);      // lambda_5 - lambda_4 = 0.7
    CHECK(eigengap_k(values, 5, 7) == 6);      // 0.4 beats 0.1, 0.1
    const std::vector<double> tied{0.0, 1.0, 2.0, 3.0};
    CHECK(eigengap_k(tied, 2, 3) == 2);        // equal gaps: smallest k
    const auto ranked = ranked_eigengaps(values, 2, 7);
    CHECK(ranked.front().k == 4);
    CHECK(ranked.front().gap == doctest::Approx(0.7));
    CHECK(ranked[1].k == 6);
    CHECK_THROWS_AS(eigengap_k(values, 1, 3), ValidationError);
    CHECK_THROWS_AS(eigengap_k(values, 2, 8), ValidationError);
}
