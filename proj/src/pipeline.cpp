#include <algorithm>
#include <iostream>
#include <optional>

#include "corrnet/error.hpp"
#include "corrnet/experiments.hpp"
#include "csv.hpp"

namespace corrnet {
namespace {

nlohmann::json degree_summary(const Network& net) {
    const auto degrees = net.degrees();
    const auto [lo, hi] = std::minmax_element(degrees.begin(), degrees.end());
    return {{"vertices", net.vertex_count()},
            {"edges", net.edge_count()},
            {"min_degree", degrees.empty() ? 0 : *lo},
            {"max_degree", degrees.empty() ? 0 : *hi},
            {"planar", is_planar(net)}};
}

nlohmann::json network_report(const PipelineResult& result, const std::vector<std::string>& dropped) {
    const PdNetwork& pd = result.networks.pd;
    nlohmann::json budgets = nlohmann::json::array();
    const auto unmet = pd.unmet_budget();
    for (std::size_t i = 0; i < pd.network.vertex_count(); ++i) {
        budgets.push_back({{"stock", pd.network.stocks()[i]},
                           {"weight_budget", pd.budget.real_budgets[i]},
                           {"budget", pd.budget.int_budgets[i]},
                           {"degree", pd.network.degree(i)},
                           {"unmet", unmet[i]}});
    }
    nlohmann::json pd_json = degree_summary(pd.network);
    pd_json["target_edges"] = pd.target_edges;
    pd_json["shortfall"] = pd.shortfall();
    pd_json["budgets"] = budgets;
    return {{"stocks", result.similarity.size()},
            {"dropped_stocks", dropped},
            {"pd", pd_json},
            {"pmfg", degree_summary(result.networks.pmfg)}};
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<ExperimentReport>& reports) {
    auto out = csv::open_output(path);
    out << "experiment,metric,value,numerator,denominator\n";
    for (const auto& r : reports) {
        for (const auto& m : r.metrics) {
            out << csv::escape(r.name) << ',' << csv::escape(m.metric) << ',' << csv::format(m.value, 6) << ','
                << csv::format(m.numerator, 6) << ',' << csv::format(m.denominator, 6) << '\n';
        }
    }
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.input.empty()) throw ValidationError("configuration error: no price input given");
    const bool needs_sectors = cfg.study_enabled("cliques") || cfg.study_enabled("louvain");
    if (needs_sectors && cfg.sectors.empty()) {
        throw ValidationError("configuration error: the cliques and louvain studies need a sector file");
    }

    LoadedPrices loaded = load_price_table(cfg.input, cfg.format);
    std::optional<SectorTable> sectors;
    if (!cfg.sectors.empty()) sectors = load_sector_table(cfg.sectors);

    const ReturnMatrix returns = log_returns(loaded.prices);
    PipelineResult result{similarity_matrix(returns, cfg.q, cfg.binning), {}, {}};
    result.similarity.validate();
    const std::size_t n = result.similarity.size();
    if (n < 3) throw ValidationError("insufficient data: need at least 3 stocks to build networks");
    result.networks = build_networks(result.similarity, cfg.edge_count(n));
    if (sectors) {
        auto names = sectors->sectors_for(result.similarity.stocks);
        result.networks.pd.network.set_sectors(names);
        result.networks.pmfg.set_sectors(std::move(names));
    }

    const std::filesystem::path& out = cfg.out;
    std::filesystem::create_directories(out);
    write_similarity_csv(out / "similarity.csv", result.similarity);
    write_edge_list(out / "network_pd.csv", result.networks.pd.network);
    write_edge_list(out / "network_pmfg.csv", result.networks.pmfg);
    write_vertex_table(out / "vertices.csv", result.networks.pd.network);
    write_json(out / "reports" / "networks.json", network_report(result, loaded.dropped));

    const SectorTable* sector_ptr = sectors ? &*sectors : nullptr;
    if (cfg.study_enabled("cliques")) {
        result.reports.push_back(clique_study(result.networks, *sectors));
        result.reports.push_back(subset_homogeneity(result.similarity, *sectors, cfg));
    }
    if (cfg.study_enabled("louvain")) {
        result.reports.push_back(louvain_ari_study(result.networks, result.similarity, sector_ptr, cfg));
    }
    if (cfg.study_enabled("nsc")) {
        result.reports.push_back(nsc_ari_sweep(result.similarity, result.networks, sector_ptr, cfg));
    }
    if (cfg.study_enabled("subset_ari")) result.reports.push_back(subset_ari_study(result.similarity, cfg));
    if (cfg.study_enabled("robustness")) {
        result.reports.push_back(edge_removal_robustness(result.networks, result.similarity, cfg));
    }

    nlohmann::json summary = {{"stocks", n},
                              {"days", loaded.prices.day_count()},
                              {"q", cfg.q},
                              {"binning", to_string(cfg.binning)},
                              {"pd_edges", result.networks.pd.network.edge_count()},
                              {"pmfg_edges", result.networks.pmfg.edge_count()},
                              {"seed", cfg.seed},
                              {"studies", nlohmann::json::array()}};
    for (const auto& report : result.reports) {
        write_json(out / "reports" / (report.name + ".json"), report.to_json());
        write_figures(out / "figures", report);
        for (const auto& p : report.partitions) {
            write_partition_csv(out / "partitions" / (p.name + ".csv"), p.stocks, p.partition);
        }
        summary["studies"].push_back(report.name);
    }
    write_json(out / "reports" / "summary.json", summary);
    write_summary_csv(out / "summary.csv", result.reports);
    return result;
}

}  // namespace corrnet
