#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "corrnet/error.hpp"
#include "corrnet/infotheory.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace corrnet;

TEST_CASE("entropy of simple distributions") {
    CHECK(entropy(Distribution{{0.25, 0.25, 0.25, 0.25}}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(entropy(Distribution{{1.0, 0.0}}) == 0.0);
    CHECK(entropy(Distribution{{0.5, 0.0, 0.5}}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("2x2 joint distribution with 0.4 on the diagonal") {
    const JointDistribution j{2, {0.4, 0.1, 0.1, 0.4}};
    const double hxy = joint_entropy(j);
    CHECK(hxy == doctest::Approx(1.7219280948873623).epsilon(1e-14));
    const double mi = mutual_information(1.0, 1.0, hxy);
    CHECK(mi == doctest::Approx(0.2780719051126377).epsilon(1e-14));
    CHECK(nmi(mi, 1.0, 1.0) == doctest::Approx(0.2780719051126377).epsilon(1e-14));
}

TEST_CASE("mutual information guards") {
    CHECK(mutual_information(1.0, 1.0, 2.0 + 1e-12) == 0.0);
    CHECK_THROWS_WITH_AS(mutual_information(1.0, 1.0, 2.1), doctest::Contains("inconsistent entropies"),
                         ValidationError);
    CHECK(nmi(0.0, 0.0, 0.0) == 0.0);
}

TEST_CASE("NMI from binned series agrees with the KL-form oracle") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t len = 40 + static_cast<std::size_t>(trial) * 7;
        const std::size_t q = 2 + static_cast<std::size_t>(trial) % 9;
        std::vector<double> x(len), y(len);
        for (std::size_t t = 0; t < len; ++t) {
            x[t] = z(rng);
            y[t] = 0.6 * x[t] + z(rng);
        }
        const BinAssignment bx = bin_series(x, q);
        const BinAssignment by = bin_series(y, q);
        const JointDistribution j = joint_histogram(bx, by);
        const double hx = entropy(marginal_distribution(bx));
        const double hy = entropy(marginal_distribution(by));
        const double got = nmi(mutual_information(hx, hy, joint_entropy(j)), hx, hy);

        std::vector<std::vector<double>> counts(q, std::vector<double>(q, 0.0));
        for (std::size_t t = 0; t < len; ++t) counts[bx.labels[t]][by.labels[t]] += 1.0;
        CHECK(got == doctest::Approx(oracle::nmi_from_counts(counts)).epsilon(1e-10));
    }
}

TEST_CASE("similarity matrix structure") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> z;
    ReturnMatrix r;
    r.stocks = {"A", "B", "C", "D"};
    r.returns.assign(4, std::vector<double>(200));
    for (std::size_t t = 0; t < 200; ++t) {
        const double f = z(rng);
        r.returns[0][t] = f + 0.1 * z(rng);
        r.returns[1][t] = 2.0 * r.returns[0][t];  // monotone copy: identical bins
        r.returns[2][t] = f + z(rng);
        r.returns[3][t] = z(rng);
    }
    const SimilarityMatrix sim = similarity_matrix(r, 10);
    sim.validate();
    CHECK(sim(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sim(0, 2) > sim(0, 3));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(sim(i, i) == 0.0);
        for (std::size_t j = 0; j < 4; ++j) CHECK(sim(i, j) == sim(j, i));
    }

    const std::vector<std::size_t> pick{2, 0};
    const SimilarityMatrix sub = sim.restrict(pick);
    CHECK(sub.stocks == std::vector<std::string>{"C", "A"});
    CHECK(sub(0, 1) == sim(2, 0));
}

TEST_CASE("similarity CSV round-trips exactly") {
    const auto dir = testutil::scratch("similarity_csv");
    const SimilarityMatrix sim = oracle::random_similarity(7, 3);
    write_similarity_csv(dir / "s.csv", sim);
    const SimilarityMatrix back = load_similarity_csv(dir / "s.csv");
    CHECK(back.stocks == sim.stocks);
    CHECK(back.values == sim.values);
}

TEST_CASE("validate rejects malformed matrices") {
    SimilarityMatrix sim = oracle::random_similarity(4, 1);
    sim.values(0, 1) = 0.3;
    CHECK_THROWS_AS(sim.validate(), ValidationError);
    sim = oracle::random_similarity(4, 1);
    sim.values(2, 2) = 0.1;
    CHECK_THROWS_AS(sim.validate(), ValidationError);
}
