// corrnet: build NMI stock networks, filter them and run the comparison studies.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "corrnet/error.hpp"
#include "corrnet/experiments.hpp"

namespace {

using namespace corrnet;

struct BuildArgs {
    std::string input;
    std::string format = "wide";
    std::string sectors;
    std::string filter = "both";
    std::size_t q = 20;
    std::string binning = "quantile";
    std::string edges = "3n-6";
    std::string out = "out";
};

int run_build(const BuildArgs& args) {
    ExperimentConfig cfg;
    apply_setting(cfg, "edges", args.edges);
    cfg.q = args.q;
    cfg.validate();

    const LoadedPrices loaded = load_price_table(args.input, parse_price_format(args.format));
    const SimilarityMatrix sim = similarity_matrix(log_returns(loaded.prices), cfg.q, parse_binning(args.binning));
    std::optional<std::vector<std::string>> names;
    if (!args.sectors.empty()) names = load_sector_table(args.sectors).sectors_for(sim.stocks);

    const std::filesystem::path out = args.out;
    write_similarity_csv(out / "similarity.csv", sim);
    const auto finish = [&](Network net, const std::string& file) {
        if (names) net.set_sectors(*names);
        write_edge_list(out / file, net);
        write_vertex_table(out / "vertices.csv", net);
        std::cout << file << ": " << net.vertex_count() << " vertices, " << net.edge_count() << " edges\n";
    };
    if (args.filter == "pd" || args.filter == "both") {
        PdNetwork pd = build_pd(sim, cfg.edge_count(sim.size()));
        if (pd.shortfall() > 0) {
            std::cerr << "warning: PD network placed " << pd.network.edge_count() << " of " << pd.target_edges
                      << " requested edges\n";
        }
        finish(std::move(pd.network), "network_pd.csv");
    }
    if (args.filter == "pmfg" || args.filter == "both") finish(build_pmfg(sim), "network_pmfg.csv");
    return 0;
}

void print_summary(const PipelineResult& result, const std::filesystem::path& out) {
    std::cout << "stocks: " << result.similarity.size() << ", PD edges: " << result.networks.pd.network.edge_count()
              << ", PMFG edges: " << result.networks.pmfg.edge_count() << '\n';
    for (const auto& report : result.reports) {
        for (const auto& m : report.metrics) std::cout << report.name << '.' << m.metric << " = " << m.value << '\n';
    }
    std::cout << "outputs written to " << out.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stock correlation networks from normalised mutual information"};
    app.require_subcommand(1);

    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build", "Similarity matrix and filtered networks");
    build_cmd->add_option("--input", build.input, "Price table (CSV)")->required();
    build_cmd->add_option("--format", build.format, "wide or long")->check(CLI::IsMember({"wide", "long"}));
    build_cmd->add_option("--sectors", build.sectors, "stock,sector table");
    build_cmd->add_option("--filter", build.filter, "pd, pmfg or both")->check(CLI::IsMember({"pd", "pmfg", "both"}));
    build_cmd->add_option("--q", build.q, "Bins per return series");
    build_cmd->add_option("--binning", build.binning, "quantile or width")
        ->check(CLI::IsMember({"quantile", "width"}));
    build_cmd->add_option("--edges", build.edges, "PD edge count, or 3n-6");
    build_cmd->add_option("--out", build.out, "Output directory");

    std::string study;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string input, sectors, out;
    auto* analyze_cmd = app.add_subcommand("analyze", "Run one study (or all) through the full pipeline");
    analyze_cmd->add_option("study", study, "cliques, louvain, nsc, subset_ari, robustness or all")
        ->required()
        ->check(CLI::IsMember({"cliques", "louvain", "nsc", "subset_ari", "robustness", "all"}));
    analyze_cmd->add_option("--config", config_path, "key = value configuration file");
    analyze_cmd->add_option("--seed", seed, "Master seed");
    analyze_cmd->add_option("--input", input, "Price table (overrides the config)");
    analyze_cmd->add_option("--sectors", sectors, "Sector table (overrides the config)");
    analyze_cmd->add_option("--out", out, "Output directory (overrides the config)");

    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "Run every study listed in a configuration file");
    run_cmd->add_option("--config", run_config, "key = value configuration file")->required();

    SynthParams synth;
    std::string synth_out = "synth";
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic sector-structured market");
    synth_cmd->add_option("--n", synth.stocks, "Stocks");
    synth_cmd->add_option("--sectors", synth.sectors, "Sectors");
    synth_cmd->add_option("--days", synth.days, "Trading days");
    synth_cmd->add_option("--intra", synth.intra, "Sector factor loading");
    synth_cmd->add_option("--inter", synth.inter, "Market factor loading");
    synth_cmd->add_option("--seed", synth.seed, "Seed");
    synth_cmd->add_option("--out", synth_out, "Output directory (prices.csv, sectors.csv)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build_cmd) return run_build(build);
        if (*synth_cmd) {
            const SyntheticMarket market = synth_market(synth);
            const std::filesystem::path dir = synth_out;
            write_price_table(dir / "prices.csv", market.prices);
            write_sector_table(dir / "sectors.csv", market.sectors);
            std::cout << "wrote " << (dir / "prices.csv").string() << " and " << (dir / "sectors.csv").string()
                      << '\n';
            return 0;
        }
        ExperimentConfig cfg;
        if (*run_cmd) {
            cfg = load_config(run_config);
        } else {
            if (!config_path.empty()) cfg = load_config(config_path);
            if (seed) cfg.seed = *seed;
            if (!input.empty()) cfg.input = input;
            if (!sectors.empty()) cfg.sectors = sectors;
            if (!out.empty()) cfg.out = out;
            if (study != "all") cfg.studies = {study};
        }
        const PipelineResult result = run_pipeline(cfg);
        print_summary(result, cfg.out);
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
