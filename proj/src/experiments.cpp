#include "corrnet/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "corrnet/clustering.hpp"
#include "corrnet/error.hpp"
#include "csv.hpp"

namespace corrnet {
namespace {

constexpr const char* kReferenceNote =
    "published value on a proprietary 125-stock market (2013-2016); not reproducible here";

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string label(double x) { return csv::format(x, 6); }

void add_homogeneity(std::vector<MetricRecord>& out, const std::string& metric, const Homogeneity& h,
                     const nlohmann::json& params = nlohmann::json::object()) {
    out.push_back({metric, h.ratio(), static_cast<double>(h.homogeneous), static_cast<double>(h.total), params});
}

void set_homogeneity(RunRecord& record, const CliqueComparison& c) {
    const std::pair<const char*, const Homogeneity*> parts[] = {
        {"pd_maximal", &c.pd_maximal},     {"pmfg_maximal", &c.pmfg_maximal},
        {"pd_triangles", &c.pd_triangles}, {"pmfg_triangles", &c.pmfg_triangles},
        {"pd_four", &c.pd_four},           {"pmfg_four", &c.pmfg_four},
    };
    for (const auto& [name, h] : parts) {
        // A network without cliques of a kind has no defined homogeneity.
        if (h->total > 0) record.set(name, h->ratio());
    }
}

std::size_t subset_size(double r, std::size_t n) {
    const long long size = round_half_up(r * static_cast<double>(n));
    if (size < 10) {
        throw ValidationError("subset of " + std::to_string(size) + " stocks (r = " + label(r) +
                              ") is too small; need at least 10");
    }
    return std::min(static_cast<std::size_t>(size), n);
}

bool is_full(double r) { return std::abs(r - 1.0) < 1e-12; }

std::vector<std::size_t> subset_for(double r, std::size_t n, std::uint64_t seed) {
    if (is_full(r)) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    return sample_indices(n, subset_size(r, n), seed);
}

std::size_t clamp_k_max(const ExperimentConfig& cfg, std::size_t n) {
    const std::size_t k_max = std::min(cfg.k_max, n - 1);
    if (cfg.k_min > k_max) {
        throw ValidationError("k range [" + std::to_string(cfg.k_min) + ", " + std::to_string(cfg.k_max) +
                              "] is empty for " + std::to_string(n) + " stocks");
    }
    return k_max;
}

nlohmann::json common_params(const ExperimentConfig& cfg) {
    return {{"seed", cfg.seed}, {"k_min", cfg.k_min}, {"k_max", cfg.k_max}};
}

nlohmann::json cluster_table(const Partition& p, std::span<const std::string> stocks, const SectorTable& sectors) {
    nlohmann::json rows = nlohmann::json::array();
    const auto clusters = p.clusters();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        std::vector<std::string> members;
        for (std::size_t v : clusters[c]) members.push_back(stocks[v]);
        const DominantSector dom = dominant_sector(members, sectors);
        nlohmann::json composition = nlohmann::json::array();
        for (const auto& [sector, count] : sector_composition(members, sectors)) {
            composition.push_back({{"sector", sector}, {"count", count}});
        }
        rows.push_back({{"cluster", c + 1},
                        {"size", members.size()},
                        {"dominant_sector", dom.sector},
                        {"dominant_share", dom.share()},
                        {"composition", composition}});
    }
    return rows;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view experiment, double parameter, std::size_t sample) {
    if (parameter == 0.0) parameter = 0.0;  // -0 and +0 share a seed
    std::uint64_t h = splitmix64(master ^ splitmix64(fnv1a(experiment)));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(parameter));
    return splitmix64(h ^ static_cast<std::uint64_t>(sample));
}

std::uint64_t nsc_seed(std::uint64_t master, std::size_t k) {
    return derive_seed(master, "nsc", static_cast<double>(k), 0);
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t size, std::uint64_t seed) {
    if (size > n) throw ValidationError("sample larger than population");
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(size);
    std::sort(all.begin(), all.end());
    return all;
}

Network remove_random_edges(const Network& network, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0)) throw ValidationError("removal fraction must be in [0, 1)");
    auto edges = network.edges();
    const auto remove = static_cast<std::size_t>(round_half_up(fraction * static_cast<double>(edges.size())));
    if (remove >= edges.size() && !edges.empty()) {
        throw ValidationError("removal fraction " + label(fraction) + " leaves no edges");
    }
    std::mt19937_64 rng(seed);
    std::shuffle(edges.begin(), edges.end(), rng);
    Network out = network;
    for (std::size_t e = 0; e < remove; ++e) out.remove_edge(edges[e].u, edges[e].v);
    return out;
}

NetworkPair build_networks(const SimilarityMatrix& sim, std::size_t pd_edge_count) {
    return {build_pd(sim, pd_edge_count), build_pmfg(sim)};
}

CliqueComparison compare_cliques(const Network& pd, const Network& pmfg, std::span<const std::string> vertex_sectors) {
    const auto h = [&](const std::vector<Clique>& cliques) {
        return cliques.empty() ? Homogeneity{} : clique_homogeneity(cliques, vertex_sectors);
    };
    CliqueComparison c;
    c.pd_maximal = h(maximal_cliques(pd, 3));
    c.pmfg_maximal = h(maximal_cliques(pmfg, 3));
    c.pd_triangles = h(enumerate_m_cliques(pd, 3));
    c.pmfg_triangles = h(enumerate_m_cliques(pmfg, 3));
    c.pd_four = h(enumerate_m_cliques(pd, 4));
    c.pmfg_four = h(enumerate_m_cliques(pmfg, 4));
    return c;
}

ExperimentReport clique_study(const NetworkPair& networks, const SectorTable& sectors) {
    const Network& pd = networks.pd.network;
    const Network& pmfg = networks.pmfg;
    const auto vertex_sectors = sectors.sectors_for(pd.stocks());

    ExperimentReport report;
    report.name = "cliques";
    report.params = {{"stocks", pd.vertex_count()}, {"pd_edges", pd.edge_count()}, {"pmfg_edges", pmfg.edge_count()}};

    const CliqueComparison c = compare_cliques(pd, pmfg, vertex_sectors);
    add_homogeneity(report.metrics, "pd_maximal_homogeneity", c.pd_maximal);
    add_homogeneity(report.metrics, "pmfg_maximal_homogeneity", c.pmfg_maximal);
    add_homogeneity(report.metrics, "pd_triangle_homogeneity", c.pd_triangles);
    add_homogeneity(report.metrics, "pmfg_triangle_homogeneity", c.pmfg_triangles);
    add_homogeneity(report.metrics, "pd_four_clique_homogeneity", c.pd_four);
    add_homogeneity(report.metrics, "pmfg_four_clique_homogeneity", c.pmfg_four);

    for (const auto& [name, net] : {std::pair<std::string, const Network*>{"pd", &pd}, {"pmfg", &pmfg}}) {
        std::map<std::size_t, std::size_t> by_size;
        for (const Clique& q : maximal_cliques(*net, 3)) ++by_size[q.members.size()];
        nlohmann::json sizes = nlohmann::json::object();
        for (const auto& [size, count] : by_size) sizes[std::to_string(size)] = count;
        report.extra["maximal_clique_sizes_" + name] = sizes;
    }

    report.reference = {
        {"pd_maximal_homogeneity", 47.0 / 87.0, kReferenceNote},
        {"pmfg_maximal_homogeneity", 43.0 / 122.0, kReferenceNote},
        {"pd_triangle_homogeneity", 178.0 / 236.0, kReferenceNote},
        {"pmfg_triangle_homogeneity", 152.0 / 367.0, kReferenceNote},
        {"pd_four_clique_homogeneity", 91.0 / 101.0, kReferenceNote},
        {"pmfg_four_clique_homogeneity", 43.0 / 122.0, kReferenceNote},
    };
    return report;
}

ExperimentReport subset_homogeneity(const SimilarityMatrix& sim, const SectorTable& sectors,
                                    const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.name = "subset_homogeneity";
    report.params = {{"seed", cfg.seed}, {"samples", cfg.samples}, {"proportions", cfg.proportions}};
    const std::size_t n = sim.size();
    std::map<std::string, double> group_r;

    for (double r : cfg.proportions) {
        const std::size_t samples = is_full(r) ? 1 : cfg.samples;
        group_r["r=" + label(r)] = r;
        for (std::size_t s = 0; s < samples; ++s) {
            const std::uint64_t seed = derive_seed(cfg.seed, report.name, r, s);
            const auto indices = subset_for(r, n, seed);
            const SimilarityMatrix sub = sim.restrict(indices);
            const NetworkPair nets = build_networks(sub, cfg.edge_count(sub.size()));
            const auto vertex_sectors = sectors.sectors_for(sub.stocks);

            RunRecord record{"r=" + label(r), s, seed, {}};
            set_homogeneity(record, compare_cliques(nets.pd.network, nets.pmfg, vertex_sectors));
            for (const auto& [metric, value] : record.values) {
                report.series(metric, "r", "homogeneity").points.emplace_back(r, value);
            }
            report.records.push_back(std::move(record));
        }
    }
    report.aggregate();
    for (const Aggregate& a : report.aggregates) {
        const double r = group_r.at(a.group);
        report.series("mean_" + a.metric, "r", "homogeneity").points.emplace_back(r, a.mean);
    }
    return report;
}

ExperimentReport louvain_ari_study(const NetworkPair& networks, const SimilarityMatrix& sim,
                                   const SectorTable* sectors, const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.name = "louvain";
    report.params = {{"seed", cfg.seed}, {"orders", cfg.louvain_orders}, {"weights", "nmi"}};

    const std::size_t n = sim.size();
    const Eigen::MatrixXd w_pd = networks.pd.network.weight_matrix();
    const Eigen::MatrixXd w_pmfg = networks.pmfg.weight_matrix();
    std::optional<Partition> sector_partition;
    if (sectors != nullptr) {
        const auto names = sectors->sectors_for(sim.stocks);
        sector_partition = Partition::from_names(names);
    }

    for (std::size_t o = 0; o < cfg.louvain_orders; ++o) {
        const std::uint64_t seed = derive_seed(cfg.seed, report.name, 0.0, o);
        const auto order = random_order(n, seed);
        const Partition pd = louvain(w_pd, order);
        const Partition pmfg = louvain(w_pmfg, order);
        const Partition complete = louvain(sim.values, order);

        RunRecord record{"orders", o, seed, {}};
        if (sector_partition) {
            record.set("ari_pd_sector", ari(pd, *sector_partition));
            record.set("ari_pmfg_sector", ari(pmfg, *sector_partition));
            record.set("ari_complete_sector", ari(complete, *sector_partition));
        }
        record.set("ari_pd_complete", ari(pd, complete));
        record.set("ari_pmfg_complete", ari(pmfg, complete));
        record.set("clusters_pd", static_cast<double>(pd.cluster_count()));
        record.set("clusters_pmfg", static_cast<double>(pmfg.cluster_count()));
        record.set("clusters_complete", static_cast<double>(complete.cluster_count()));
        record.set("modularity_pd", modularity(w_pd, pd));
        record.set("modularity_pmfg", modularity(w_pmfg, pmfg));
        record.set("modularity_complete", modularity(sim.values, complete));
        report.records.push_back(std::move(record));

        if (o == 0) {
            report.partitions.push_back({"louvain_pd", sim.stocks, pd});
            report.partitions.push_back({"louvain_pmfg", sim.stocks, pmfg});
            report.partitions.push_back({"louvain_complete", sim.stocks, complete});
            if (sectors != nullptr) {
                report.extra["clusters_pd"] = cluster_table(pd, sim.stocks, *sectors);
                report.extra["clusters_pmfg"] = cluster_table(pmfg, sim.stocks, *sectors);
                report.extra["clusters_complete"] = cluster_table(complete, sim.stocks, *sectors);
            }
        }
    }
    report.aggregate();
    for (const Aggregate& a : report.aggregates) {
        if (a.metric.rfind("ari_", 0) == 0) {
            report.metrics.push_back({"mean_" + a.metric, a.mean, 0.0, static_cast<double>(a.count), {}});
        }
    }
    report.reference = {
        {"mean_ari_pd_sector", 0.31, kReferenceNote},
        {"mean_ari_pmfg_sector", 0.26, kReferenceNote},
    };
    return report;
}

ExperimentReport nsc_ari_sweep(const SimilarityMatrix& sim, const NetworkPair& networks,
                               const SectorTable* sectors, const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.name = "nsc";
    report.params = common_params(cfg);

    const std::size_t n = sim.size();
    const std::size_t k_max = clamp_k_max(cfg, n);
    const EigenSpectrum spec_k = generalized_spectrum(sim.values);
    const EigenSpectrum spec_pd = generalized_spectrum(networks.pd.network.binary_adjacency());
    const EigenSpectrum spec_pmfg = generalized_spectrum(networks.pmfg.binary_adjacency());

    // The eigengap scan ignores one and two clusters.
    const std::vector<double> eigenvalues(spec_k.values.data(), spec_k.values.data() + spec_k.values.size());
    const std::size_t scan_min = 3;
    const std::size_t scan_max = std::min(cfg.eigengap_k_max == 0 ? n - 1 : cfg.eigengap_k_max, eigenvalues.size() - 1);
    std::vector<Eigengap> gaps;
    std::size_t selected = 0;
    if (scan_max >= scan_min) {
        gaps = ranked_eigengaps(eigenvalues, scan_min, scan_max);
        selected = eigengap_k(eigenvalues, scan_min, scan_max);
    }
    const std::size_t flagged_count = std::min<std::size_t>(3, gaps.size());
    const auto eigengap_rank = [&](std::size_t k) -> std::size_t {
        for (std::size_t i = 0; i < flagged_count; ++i) {
            if (gaps[i].k == k) return i + 1;
        }
        return 0;
    };

    std::optional<Partition> sector_partition;
    if (sectors != nullptr) {
        const auto names = sectors->sectors_for(sim.stocks);
        sector_partition = Partition::from_names(names);
    }

    for (std::size_t k = cfg.k_min; k <= k_max; ++k) {
        const std::uint64_t seed = nsc_seed(cfg.seed, k);
        const Partition ck = nsc(spec_k, k, seed);
        const Partition cpd = nsc(spec_pd, k, seed);
        const Partition cpmfg = nsc(spec_pmfg, k, seed);

        RunRecord record{"k=" + std::to_string(k), 0, seed, {}};
        const double a_pd = ari(ck, cpd);
        const double a_pmfg = ari(ck, cpmfg);
        record.set("ari_complete_pd", a_pd);
        record.set("ari_complete_pmfg", a_pmfg);
        report.series("ari_complete_pd", "k", "ari").points.emplace_back(static_cast<double>(k), a_pd);
        report.series("ari_complete_pmfg", "k", "ari").points.emplace_back(static_cast<double>(k), a_pmfg);
        if (sector_partition) {
            const double s_pd = ari(cpd, *sector_partition);
            const double s_pmfg = ari(cpmfg, *sector_partition);
            const double s_k = ari(ck, *sector_partition);
            record.set("ari_pd_sector", s_pd);
            record.set("ari_pmfg_sector", s_pmfg);
            record.set("ari_complete_sector", s_k);
            report.series("ari_pd_sector", "k", "ari").points.emplace_back(static_cast<double>(k), s_pd);
            report.series("ari_pmfg_sector", "k", "ari").points.emplace_back(static_cast<double>(k), s_pmfg);
            report.series("ari_complete_sector", "k", "ari").points.emplace_back(static_cast<double>(k), s_k);
        }
        record.set("eigengap_rank", static_cast<double>(eigengap_rank(k)));
        report.records.push_back(std::move(record));

        if (k == selected) {
            report.partitions.push_back({"nsc_complete_k" + std::to_string(k), sim.stocks, ck});
            report.partitions.push_back({"nsc_pd_k" + std::to_string(k), sim.stocks, cpd});
            report.partitions.push_back({"nsc_pmfg_k" + std::to_string(k), sim.stocks, cpmfg});
        }
    }
    report.aggregate();

    report.extra["eigenvalues"] = eigenvalues;
    nlohmann::json top = nlohmann::json::array();
    for (std::size_t i = 0; i < flagged_count; ++i) top.push_back({{"k", gaps[i].k}, {"gap", gaps[i].gap}});
    report.extra["largest_eigengaps"] = top;
    report.extra["eigengap_k"] = selected;
    if (selected != 0) {
        report.metrics.push_back({"eigengap_k", static_cast<double>(selected), 0.0, 0.0, {}});
        report.metrics.push_back({"eigengap", gaps.front().gap, 0.0, 0.0, {{"k", selected}}});
    }

    report.reference = {
        {"eigengap_k4", 0.74, kReferenceNote},
        {"eigengap_k10", 0.35, kReferenceNote},
        {"eigengap_k11", 0.16, kReferenceNote},
    };
    const struct {
        int k;
        double pd, pmfg, complete;
    } table[] = {{5, 0.195, 0.0585, 0.121}, {6, 0.197, 0.0921, 0.124}, {7, 0.195, 0.069, 0.229},
                 {8, 0.236, 0.1665, 0.27},  {9, 0.339, 0.1557, 0.352}, {10, 0.242, 0.1015, 0.376},
                 {11, 0.274, 0.0833, 0.29}, {12, 0.279, 0.0799, 0.33}};
    for (const auto& row : table) {
        const std::string k = std::to_string(row.k);
        report.reference.push_back({"ari_pd_sector_k" + k, row.pd, kReferenceNote});
        report.reference.push_back({"ari_pmfg_sector_k" + k, row.pmfg, kReferenceNote});
        report.reference.push_back({"ari_complete_sector_k" + k, row.complete, kReferenceNote});
    }
    return report;
}

ExperimentReport subset_ari_study(const SimilarityMatrix& sim, const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.name = "subset_ari";
    report.params = common_params(cfg);
    report.params["samples"] = cfg.samples;
    report.params["proportions"] = cfg.proportions;
    const std::size_t n = sim.size();

    for (double r : cfg.proportions) {
        const std::size_t samples = is_full(r) ? 1 : cfg.samples;
        for (std::size_t s = 0; s < samples; ++s) {
            const std::uint64_t seed = derive_seed(cfg.seed, report.name, r, s);
            const auto indices = subset_for(r, n, seed);
            const SimilarityMatrix sub = sim.restrict(indices);
            const NetworkPair nets = build_networks(sub, cfg.edge_count(sub.size()));
            const EigenSpectrum spec_k = generalized_spectrum(sub.values);
            const EigenSpectrum spec_pd = generalized_spectrum(nets.pd.network.binary_adjacency());
            const EigenSpectrum spec_pmfg = generalized_spectrum(nets.pmfg.binary_adjacency());
            const std::size_t k_max = clamp_k_max(cfg, sub.size());
            for (std::size_t k = cfg.k_min; k <= k_max; ++k) {
                const std::uint64_t kseed = nsc_seed(cfg.seed, k);
                const Partition ck = nsc(spec_k, k, kseed);
                RunRecord record{"r=" + label(r) + " k=" + std::to_string(k), s, seed, {}};
                record.set("ari_complete_pd", ari(ck, nsc(spec_pd, k, kseed)));
                record.set("ari_complete_pmfg", ari(ck, nsc(spec_pmfg, k, kseed)));
                report.records.push_back(std::move(record));
            }
        }
    }
    report.aggregate();
    for (const Aggregate& a : report.aggregates) {
        const auto space = a.group.find(' ');
        const std::string r = a.group.substr(2, space - 2);
        const double k = std::stod(a.group.substr(space + 3));
        const std::string net = a.metric == "ari_complete_pd" ? "pd" : "pmfg";
        report.series("r" + r + "_" + net, "k", "mean_ari").points.emplace_back(k, a.mean);
    }
    return report;
}

ExperimentReport edge_removal_robustness(const NetworkPair& networks, const SimilarityMatrix& sim,
                                         const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.name = "robustness";
    report.params = common_params(cfg);
    report.params["fractions"] = cfg.removal_fractions;
    report.params["samples"] = cfg.removal_samples;

    const std::size_t n = sim.size();
    const std::size_t k_max = clamp_k_max(cfg, n);
    const EigenSpectrum spec_k = generalized_spectrum(sim.values);
    std::vector<Partition> reference;
    for (std::size_t k = cfg.k_min; k <= k_max; ++k) reference.push_back(nsc(spec_k, k, nsc_seed(cfg.seed, k)));

    const auto sweep = [&](const Network& net, RunRecord& record) {
        const EigenSpectrum spec = generalized_spectrum(net.binary_adjacency());
        for (std::size_t k = cfg.k_min; k <= k_max; ++k) {
            const Partition c = nsc(spec, k, nsc_seed(cfg.seed, k));
            record.set("k=" + std::to_string(k), ari(reference[k - cfg.k_min], c));
        }
    };

    const std::pair<std::string, const Network*> nets[] = {{"pd", &networks.pd.network}, {"pmfg", &networks.pmfg}};
    for (const auto& [name, net] : nets) {
        RunRecord base{name + " f=0", 0, 0, {}};
        sweep(*net, base);
        report.records.push_back(std::move(base));
        for (double f : cfg.removal_fractions) {
            for (std::size_t s = 0; s < cfg.removal_samples; ++s) {
                const std::uint64_t seed = derive_seed(cfg.seed, report.name + "/" + name, f, s);
                RunRecord record{name + " f=" + label(f), s, seed, {}};
                sweep(remove_random_edges(*net, f, seed), record);
                report.records.push_back(std::move(record));
            }
        }
    }
    report.aggregate();

    nlohmann::json variance = nlohmann::json::object();
    for (const auto& entry : nets) {
        const std::string& name = entry.first;
        std::vector<std::pair<std::string, double>> groups{{name + " f=0", 0.0}};
        for (double f : cfg.removal_fractions) {
            if (f != 0.0) groups.emplace_back(name + " f=" + label(f), f);
        }
        for (std::size_t k = cfg.k_min; k <= k_max; ++k) {
            const std::string metric = "k=" + std::to_string(k);
            std::vector<double> states;
            for (const auto& [g, f] : groups) {
                const Aggregate* a = report.find_aggregate(g, metric);
                if (a == nullptr) continue;
                states.push_back(a->mean);
                report.series(name + "_f" + label(f), "k", "mean_ari")
                    .points.emplace_back(static_cast<double>(k), a->mean);
            }
            const double v = variance_of(states);
            variance[name][metric] = v;
            report.series("variance_" + name, "k", "variance").points.emplace_back(static_cast<double>(k), v);
        }
    }
    report.extra["state_variance"] = variance;
    return report;
}

}  // namespace corrnet
