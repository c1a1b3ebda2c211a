/**
 * @file filters.hpp
 * @brief Sparse networks extracted from a similarity matrix.
 *
 * Both builders walk the pairs in descending similarity. PMFG keeps an edge
 * when the graph stays planar. PD keeps it when both endpoints are still
 * under their degree budgets. Those budgets are proportional to each stock's
 * total similarity and are made integral by cascade rounding.
 *
 * Ties are resolved on the descending-weight relabelling: stocks are ranked by
 * stock weight (ties by original index), and equal similarities are taken in
 * lexicographic (rank_i, rank_j) order.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "corrnet/graph.hpp"
#include "corrnet/infotheory.hpp"

namespace corrnet {

/// SW_i = sum over j != i of s_ij.
struct StockWeights {
    std::vector<double> w;
};

struct DegreeBudget {
    std::vector<double> real_budgets;     ///< d'_i, indexed by stock
    std::vector<std::size_t> int_budgets; ///< d_i, indexed by stock
    std::vector<std::size_t> order;       ///< stocks by descending weight
};

StockWeights stock_weights(const SimilarityMatrix& sim);

/// Stocks sorted by descending weight, ties by ascending index.
std::vector<std::size_t> descending_weight_order(const StockWeights& weights);

/// d'_i = SW_i / sum(SW) * 2M. Throws if every weight is zero.
std::vector<double> proportional_degrees(const StockWeights& weights, std::size_t edge_count);

/// Round half up: floor(x + 0.5), with a 1e-9 allowance for accumulated error.
long long round_half_up(double x);

/// d_k = round(sum_{j<=k} d'_j) - sum_{j<k} d_j over budgets already in
/// processing order. Totals are preserved: sum d = round(sum d').
std::vector<std::size_t> cascade_round(std::span<const double> ordered_budgets);

/// Integer budgets for an M-edge PD network. Budgets above n-1 are clipped
/// and the surplus re-spread over the remaining stocks, in proportion to
/// their weights, by another cascade-rounding pass.
DegreeBudget degree_budget(const StockWeights& weights, std::size_t vertex_count, std::size_t edge_count);

struct PdNetwork {
    Network network;
    DegreeBudget budget;
    std::size_t target_edges = 0;

    /// Edges requested but not placed because degree caps blocked them.
    std::size_t shortfall() const { return target_edges - network.edge_count(); }
    /// Per-stock unused budget (d_i - realised degree).
    std::vector<std::size_t> unmet_budget() const;
};

/// Default edge count for comparisons with PMFG.
constexpr std::size_t planar_edge_count(std::size_t n) { return n >= 3 ? 3 * n - 6 : 0; }

/// Proportional-degree network with M edges requested.
PdNetwork build_pd(const SimilarityMatrix& sim, std::size_t edge_count);

/// Planar maximally filtered graph: 3n - 6 edges.
Network build_pmfg(const SimilarityMatrix& sim);

struct RankedPair {
    std::size_t i;
    std::size_t j;
    double similarity;
};

/// All unordered pairs in the shared descending order used by both builders.
std::vector<RankedPair> ranked_pairs(const SimilarityMatrix& sim, std::span<const std::size_t> order);

}  // namespace corrnet
