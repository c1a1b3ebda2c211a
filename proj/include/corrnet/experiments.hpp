/**
 * @file experiments.hpp
 * @brief Seeded end-to-end studies comparing PD and PMFG networks.
 *
 * Every study is a pure function of its inputs and the master seed. Each
 * sample draws its own seed from (master, experiment, parameter, index), so
 * adding samples never changes existing ones and results do not depend on
 * execution order.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "corrnet/config.hpp"
#include "corrnet/filters.hpp"
#include "corrnet/graph.hpp"
#include "corrnet/infotheory.hpp"
#include "corrnet/metrics.hpp"
#include "corrnet/ingest.hpp"
#include "corrnet/report.hpp"

namespace corrnet {

/// SplitMix64-mixed hash of (master, experiment name, parameter, sample index).
std::uint64_t derive_seed(std::uint64_t master, std::string_view experiment, double parameter, std::size_t sample);

/// `size` distinct indices from [0, n), ascending.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t size, std::uint64_t seed);

/// Copy of `network` without round_half_up(fraction * |E|) uniformly chosen edges.
Network remove_random_edges(const Network& network, double fraction, std::uint64_t seed);

struct NetworkPair {
    PdNetwork pd;
    Network pmfg;
};

NetworkPair build_networks(const SimilarityMatrix& sim, std::size_t pd_edge_count);

/// Clique homogeneity of both networks: maximal cliques (size >= 3),
/// all 3-cliques and all 4-cliques. Empty clique lists give total = 0.
struct CliqueComparison {
    Homogeneity pd_maximal, pmfg_maximal;
    Homogeneity pd_triangles, pmfg_triangles;
    Homogeneity pd_four, pmfg_four;
};

CliqueComparison compare_cliques(const Network& pd, const Network& pmfg, std::span<const std::string> vertex_sectors);

/// Full-data clique comparison with counts, as metric records.
ExperimentReport clique_study(const NetworkPair& networks, const SectorTable& sectors);

/// Clique homogeneity on random stock subsets for every proportion r.
ExperimentReport subset_homogeneity(const SimilarityMatrix& sim, const SectorTable& sectors,
                                    const ExperimentConfig& cfg);

/// Louvain over many random vertex orders on both networks and the complete
/// graph; ARI against sectors (when given) and against the complete graph.
ExperimentReport louvain_ari_study(const NetworkPair& networks, const SimilarityMatrix& sim,
                                   const SectorTable* sectors, const ExperimentConfig& cfg);

/// NSC for every k in the configured range on the similarity matrix and on
/// both binary adjacency matrices, with ARI between them (and vs sectors).
ExperimentReport nsc_ari_sweep(const SimilarityMatrix& sim, const NetworkPair& networks,
                               const SectorTable* sectors, const ExperimentConfig& cfg);

/// NSC agreement with the complete graph on random stock subsets.
ExperimentReport subset_ari_study(const SimilarityMatrix& sim, const ExperimentConfig& cfg);

/// NSC agreement with the complete graph after random edge removal.
ExperimentReport edge_removal_robustness(const NetworkPair& networks, const SimilarityMatrix& sim,
                                         const ExperimentConfig& cfg);

/// Seed used for every NSC run at a given k, so unperturbed and perturbed
/// runs share k-means initialisation.
std::uint64_t nsc_seed(std::uint64_t master, std::size_t k);

struct SyntheticMarket {
    PriceMatrix prices;
    SectorTable sectors;
};

struct SynthParams {
    std::size_t stocks = 60;
    std::size_t sectors = 6;
    std::size_t days = 1000;
    double intra = 1.0;   ///< loading on the stock's sector factor
    double inter = 0.2;   ///< loading on the market factor
    double volatility = 0.01;
    std::uint64_t seed = 0;
};

/// Factor-model prices: r_it = vol * (intra * F_sector(t) + inter * F_market(t) + e_it),
/// all terms standard normal; P_i0 = 100. Sectors are contiguous blocks.
SyntheticMarket synth_market(const SynthParams& params);

struct PipelineResult {
    SimilarityMatrix similarity;
    NetworkPair networks;
    std::vector<ExperimentReport> reports;
};

/// Ingest, similarity, both filters and every enabled study, written under
/// cfg.out: similarity.csv, network_{pd,pmfg}.csv, vertices.csv,
/// partitions/, reports/, figures/.
PipelineResult run_pipeline(const ExperimentConfig& cfg);

}  // namespace corrnet
