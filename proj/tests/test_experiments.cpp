#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "corrnet/error.hpp"
#include "corrnet/experiments.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace corrnet;

namespace {

struct Market {
    SimilarityMatrix sim;
    SectorTable sectors;
};

Market synthetic(std::size_t n, std::size_t k, std::size_t days, std::uint64_t seed, double intra = 1.0,
                 double inter = 0.2) {
    SynthParams p;
    p.stocks = n;
    p.sectors = k;
    p.days = days;
    p.intra = intra;
    p.inter = inter;
    p.seed = seed;
    const SyntheticMarket m = synth_market(p);
    return {similarity_matrix(log_returns(m.prices), 10), m.sectors};
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.samples = 3;
    cfg.louvain_orders = 5;
    cfg.removal_samples = 4;
    cfg.k_min = 3;
    cfg.k_max = 6;
    cfg.seed = 9;
    return cfg;
}

void check_aggregates(const ExperimentReport& report) {
    ExperimentReport copy = report;
    copy.aggregate();
    REQUIRE(copy.aggregates.size() == report.aggregates.size());
    for (const Aggregate& a : report.aggregates) {
        std::vector<double> values;
        for (const RunRecord& r : report.records) {
            if (r.group != a.group) continue;
            if (const double* v = r.find(a.metric)) values.push_back(*v);
        }
        CHECK(a.count == values.size());
        CHECK(a.mean == mean_of(values));
        CHECK(a.variance == variance_of(values));
    }
}

}  // namespace

TEST_CASE("seed derivation is a fixed function of its inputs") {
    const auto a = derive_seed(1, "x", 0.5, 3);
    CHECK(a == derive_seed(1, "x", 0.5, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t master : {0u, 1u}) {
        for (const char* name : {"x", "y"}) {
            for (double p : {0.0, 0.5, 0.75}) {
                for (std::size_t s = 0; s < 5; ++s) seen.insert(derive_seed(master, name, p, s));
            }
        }
    }
    CHECK(seen.size() == 2 * 2 * 3 * 5);
    CHECK(derive_seed(3, "x", -0.0, 1) == derive_seed(3, "x", 0.0, 1));
}

TEST_CASE("sampling helpers") {
    const auto idx = sample_indices(20, 8, 5);
    CHECK(idx.size() == 8);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 8);
    CHECK(idx == sample_indices(20, 8, 5));
    CHECK_THROWS_AS(sample_indices(3, 4, 1), ValidationError);

    const SimilarityMatrix sim = oracle::random_similarity(12, 2);
    const Network pmfg = build_pmfg(sim);
    const Network cut = remove_random_edges(pmfg, 0.3, 11);
    CHECK(cut.edge_count() == pmfg.edge_count() - 9);  // round(0.3 * 30)
    for (const Edge& e : cut.edges()) CHECK(pmfg.has_edge(e.u, e.v));
    CHECK(remove_random_edges(pmfg, 0.0, 11) == pmfg);
    CHECK(remove_random_edges(pmfg, 0.3, 11) == cut);
}

TEST_CASE("synthetic market properties") {
    SynthParams p;
    p.stocks = 12;
    p.sectors = 3;
    p.days = 50;
    p.seed = 4;
    const SyntheticMarket a = synth_market(p);
    CHECK(a.prices == synth_market(p).prices);
    CHECK(a.prices.stock_count() == 12);
    CHECK(a.sectors.sector_of(a.prices.stocks()[0]) != a.sectors.sector_of(a.prices.stocks()[11]));
    p.inter = 2.0;
    CHECK_THROWS_AS(synth_market(p), ValidationError);
}

TEST_CASE("without sector loadings NMI does not see sectors") {
    const Market m = synthetic(30, 3, 2000, 5, 0.0, 0.0);
    double within = 0.0, across = 0.0;
    std::size_t nw = 0, na = 0;
    const auto names = m.sectors.sectors_for(m.sim.stocks);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = i + 1; j < 30; ++j) {
            if (names[i] == names[j]) {
                within += m.sim(i, j);
                ++nw;
            } else {
                across += m.sim(i, j);
                ++na;
            }
        }
    }
    CHECK(std::abs(within / static_cast<double>(nw) - across / static_cast<double>(na)) < 0.02);
}

TEST_CASE("two strong sectors: complete-graph Louvain recovers them") {
    const Market m = synthetic(20, 2, 1000, 6, 2.0, 0.1);
    const auto names = m.sectors.sectors_for(m.sim.stocks);
    const Partition truth = Partition::from_names(names);
    CHECK(ari(louvain(m.sim.values, std::uint64_t{0}), truth) >= 0.9);
}

TEST_CASE("clique study on a planted market") {
    const Market m = synthetic(40, 4, 1000, 1);
    const NetworkPair nets = build_networks(m.sim, planar_edge_count(40));
    const ExperimentReport r = clique_study(nets, m.sectors);
    REQUIRE(r.metrics.size() == 6);
    for (const MetricRecord& rec : r.metrics) {
        CHECK(rec.value >= 0.0);
        CHECK(rec.value <= 1.0);
        CHECK(rec.value == doctest::Approx(rec.numerator / rec.denominator));
    }
    CHECK(r.reference.size() == 6);
}

TEST_CASE("subset homogeneity: r = 1 reproduces the full-data study") {
    const Market m = synthetic(30, 3, 600, 2);
    ExperimentConfig cfg = small_config();
    cfg.proportions = {1.0, 0.5};
    const ExperimentReport sub = subset_homogeneity(m.sim, m.sectors, cfg);
    const NetworkPair nets = build_networks(m.sim, planar_edge_count(30));
    const auto names = m.sectors.sectors_for(m.sim.stocks);
    const CliqueComparison full = compare_cliques(nets.pd.network, nets.pmfg, names);
    REQUIRE(sub.records.front().group == "r=1");
    CHECK(*sub.records.front().find("pd_maximal") == full.pd_maximal.ratio());
    CHECK(*sub.records.front().find("pmfg_four") == full.pmfg_four.ratio());
    CHECK(sub.records.size() == 1 + 3);
    for (const RunRecord& rec : sub.records) {
        for (const auto& [metric, v] : rec.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    check_aggregates(sub);
    CHECK(sub.to_json() == subset_homogeneity(m.sim, m.sectors, cfg).to_json());

    cfg.proportions = {0.3};
    CHECK_THROWS_AS(subset_homogeneity(m.sim, m.sectors, cfg), ValidationError);
}

TEST_CASE("Louvain study") {
    const Market m = synthetic(30, 3, 600, 3);
    const ExperimentConfig cfg = small_config();
    const NetworkPair nets = build_networks(m.sim, planar_edge_count(30));
    const ExperimentReport r = louvain_ari_study(nets, m.sim, &m.sectors, cfg);
    CHECK(r.records.size() == 5);
    check_aggregates(r);
    CHECK(r.partitions.size() == 3);
    CHECK(r.extra.contains("clusters_pd"));

    // The same network in both slots gives identical means.
    const NetworkPair twin{nets.pd, nets.pd.network};
    const ExperimentReport t = louvain_ari_study(twin, m.sim, &m.sectors, cfg);
    CHECK(t.find_aggregate("orders", "ari_pd_sector")->mean == t.find_aggregate("orders", "ari_pmfg_sector")->mean);

    const ExperimentReport no_sectors = louvain_ari_study(nets, m.sim, nullptr, cfg);
    CHECK(no_sectors.find_aggregate("orders", "ari_pd_sector") == nullptr);
}

TEST_CASE("NSC sweep and robustness share the unperturbed state") {
    const Market m = synthetic(30, 3, 800, 4);
    const ExperimentConfig cfg = [] {
        ExperimentConfig c = small_config();
        c.removal_fractions = {0.0, 0.2};
        return c;
    }();
    const NetworkPair nets = build_networks(m.sim, planar_edge_count(30));
    const ExperimentReport sweep = nsc_ari_sweep(m.sim, nets, &m.sectors, cfg);
    CHECK(sweep.records.size() == 4);
    CHECK(sweep.extra["eigengap_k"] == 3);
    for (const RunRecord& r : sweep.records) {
        CHECK(std::isfinite(*r.find("ari_complete_pd")));
        CHECK(*r.find("ari_complete_pd") >= -1.0);
        CHECK(*r.find("ari_complete_pd") <= 1.0);
    }
    CHECK(*sweep.records.front().find("eigengap_rank") == 1.0);  // k = 3 is the planted count

    const ExperimentReport rob = edge_removal_robustness(nets, m.sim, cfg);
    check_aggregates(rob);
    for (std::size_t k = 3; k <= 6; ++k) {
        const std::string metric = "k=" + std::to_string(k);
        const double base = sweep.records[k - 3].find("ari_complete_pd")[0];
        CHECK(rob.find_aggregate("pd f=0", metric)->mean == base);
        CHECK(rob.extra["state_variance"]["pd"][metric].get<double>() >= 0.0);
    }
    CHECK(rob.to_json() == edge_removal_robustness(nets, m.sim, cfg).to_json());
}

TEST_CASE("subset ARI study") {
    const Market m = synthetic(30, 3, 600, 5);
    ExperimentConfig cfg = small_config();
    cfg.proportions = {0.5};
    const ExperimentReport r = subset_ari_study(m.sim, cfg);
    CHECK(r.records.size() == 3 * 4);
    for (const Aggregate& a : r.aggregates) {
        CHECK(a.mean >= -1.0);
        CHECK(a.mean <= 1.0);
    }
    check_aggregates(r);
    CHECK(r.to_json() == subset_ari_study(m.sim, cfg).to_json());
}

TEST_CASE("config parsing") {
    const auto dir = testutil::scratch("config");
    const auto path = testutil::write_file(dir / "c.cfg",
                                           "# comment\n"
                                           "input = prices.csv\n"
                                           "proportions = 4/5, 2/3  # trailing comment\n"
                                           "q = 12\n"
                                           "studies = nsc, robustness\n");
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.input == dir / "prices.csv");
    CHECK(cfg.proportions == std::vector<double>{0.8, 2.0 / 3.0});
    CHECK(cfg.q == 12);
    CHECK(cfg.study_enabled("nsc"));
    CHECK_FALSE(cfg.study_enabled("cliques"));
    CHECK(cfg.edge_count(10) == 24);

    const auto bad = testutil::write_file(dir / "bad.cfg", "q = 5\ncolour = red\n");
    try {
        load_config(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    ExperimentConfig c;
    c.proportions = {1.5};
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = ExperimentConfig{};
    c.studies = {"mst"};
    CHECK_THROWS_AS(c.validate(), ValidationError);
    CHECK(parse_fraction("3/4") == 0.75);
}

TEST_CASE("pipeline: configuration errors and determinism") {
    const auto dir = testutil::scratch("pipeline");
    ExperimentConfig cfg = small_config();
    cfg.input = std::filesystem::path(CORRNET_TEST_DATA) / "fixture_prices.csv";
    cfg.out = dir / "a";
    CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("sector file"), ValidationError);

    cfg.sectors = std::filesystem::path(CORRNET_TEST_DATA) / "fixture_sectors.csv";
    cfg.proportions = {0.5};
    const PipelineResult a = run_pipeline(cfg);
    cfg.out = dir / "b";
    run_pipeline(cfg);
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir / "a")) {
        if (!entry.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(entry.path(), dir / "a");
        CHECK_MESSAGE(testutil::read_file(entry.path()) == testutil::read_file(dir / "b" / rel), rel.string());
        ++files;
    }
    CHECK(files > 20);
    CHECK(std::filesystem::exists(dir / "a" / "partitions" / "louvain_pd.csv"));
    CHECK(a.networks.pmfg.edge_count() == 84);
}
