#include "corrnet/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrnet/error.hpp"

namespace corrnet {

StockWeights stock_weights(const SimilarityMatrix& sim) {
    StockWeights out;
    out.w.assign(sim.size(), 0.0);
    for (std::size_t i = 0; i < sim.size(); ++i) {
        for (std::size_t j = 0; j < sim.size(); ++j) {
            if (j != i) out.w[i] += sim(i, j);
        }
    }
    return out;
}

std::vector<std::size_t> descending_weight_order(const StockWeights& weights) {
    std::vector<std::size_t> order(weights.w.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights.w[a] > weights.w[b]; });
    return order;
}

std::vector<double> proportional_degrees(const StockWeights& weights, std::size_t edge_count) {
    if (edge_count < 1) throw ValidationError("edge count must be at least 1");
    const double total = std::accumulate(weights.w.begin(), weights.w.end(), 0.0);
    if (!(total > 0.0)) throw ValidationError("degenerate similarity matrix: all stock weights are zero");
    std::vector<double> out;
    out.reserve(weights.w.size());
    const double degree_sum = 2.0 * static_cast<double>(edge_count);
    for (double w : weights.w) out.push_back(w / total * degree_sum);
    return out;
}

long long round_half_up(double x) { return static_cast<long long>(std::floor(x + 0.5 + 1e-9)); }

std::vector<std::size_t> cascade_round(std::span<const double> ordered_budgets) {
    std::vector<std::size_t> out;
    out.reserve(ordered_budgets.size());
    double cumulative = 0.0;
    long long assigned = 0;
    for (double d : ordered_budgets) {
        cumulative += d;
        const long long next = round_half_up(cumulative) - assigned;
        if (next < 0) throw ValidationError("cascade rounding produced a negative degree");
        out.push_back(static_cast<std::size_t>(next));
        assigned += next;
    }
    return out;
}

DegreeBudget degree_budget(const StockWeights& weights, std::size_t vertex_count, std::size_t edge_count) {
    const std::size_t n = vertex_count;
    if (weights.w.size() != n) throw ValidationError("stock weights do not match vertex count");
    if (edge_count > n * (n - 1) / 2) throw ValidationError("edge count exceeds a complete graph");

    DegreeBudget budget;
    budget.order = descending_weight_order(weights);
    budget.real_budgets = proportional_degrees(weights, edge_count);
    budget.int_budgets.assign(n, 0);

    const std::size_t cap = n - 1;
    std::vector<bool> clipped(n, false);
    double remaining_total = 2.0 * static_cast<double>(edge_count);
    for (;;) {
        std::vector<std::size_t> free_order;
        double free_weight = 0.0;
        for (std::size_t v : budget.order) {
            if (!clipped[v]) {
                free_order.push_back(v);
                free_weight += weights.w[v];
            }
        }
        std::vector<double> ordered;
        ordered.reserve(free_order.size());
        for (std::size_t v : free_order) {
            const double share = free_weight > 0.0 ? weights.w[v] / free_weight : 0.0;
            budget.real_budgets[v] = share * remaining_total;
            ordered.push_back(budget.real_budgets[v]);
        }
        const auto rounded = cascade_round(ordered);
        bool any_over = false;
        for (std::size_t k = 0; k < free_order.size(); ++k) {
            budget.int_budgets[free_order[k]] = rounded[k];
            if (rounded[k] > cap) any_over = true;
        }
        if (!any_over) break;
        for (std::size_t k = 0; k < free_order.size(); ++k) {
            const std::size_t v = free_order[k];
            if (rounded[k] > cap) {
                clipped[v] = true;
                budget.int_budgets[v] = cap;
                budget.real_budgets[v] = static_cast<double>(cap);
                remaining_total -= static_cast<double>(cap);
            }
        }
    }
    return budget;
}

std::vector<std::size_t> PdNetwork::unmet_budget() const {
    std::vector<std::size_t> out(network.vertex_count());
    for (std::size_t v = 0; v < out.size(); ++v) out[v] = budget.int_budgets[v] - network.degree(v);
    return out;
}

std::vector<RankedPair> ranked_pairs(const SimilarityMatrix& sim, std::span<const std::size_t> order) {
    const std::size_t n = sim.size();
    std::vector<RankedPair> pairs;
    pairs.reserve(n * (n - 1) / 2);
    // Enumerating by rank makes (rank_i, rank_j) the tie order under a stable sort.
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            pairs.push_back({order[a], order[b], sim(order[a], order[b])});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const RankedPair& x, const RankedPair& y) { return x.similarity > y.similarity; });
    return pairs;
}

PdNetwork build_pd(const SimilarityMatrix& sim, std::size_t edge_count) {
    const std::size_t n = sim.size();
    if (n < 3) throw ValidationError("PD network needs at least 3 stocks");
    const StockWeights weights = stock_weights(sim);

    PdNetwork out;
    out.budget = degree_budget(weights, n, edge_count);
    out.target_edges = edge_count;
    out.network = Network(sim.stocks);
    auto& net = out.network;
    const auto& cap = out.budget.int_budgets;
    for (const auto& p : ranked_pairs(sim, out.budget.order)) {
        if (net.edge_count() == edge_count) break;
        if (net.degree(p.i) < cap[p.i] && net.degree(p.j) < cap[p.j] && !net.has_edge(p.i, p.j)) {
            net.add_edge(p.i, p.j, p.similarity);
        }
    }
    return out;
}

Network build_pmfg(const SimilarityMatrix& sim) {
    const std::size_t n = sim.size();
    if (n < 3) throw ValidationError("PMFG needs at least 3 stocks");
    const auto order = descending_weight_order(stock_weights(sim));
    const std::size_t target = planar_edge_count(n);

    Network net(sim.stocks);
    std::vector<std::vector<std::size_t>> adjacency(n);
    // Component roots: an edge between two components cannot break
    // planarity, so only edges inside a component need the full test.
    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), std::size_t{0});
    const auto find = [&root](std::size_t v) {
        while (root[v] != v) v = root[v] = root[root[v]];
        return v;
    };
    for (const auto& p : ranked_pairs(sim, order)) {
        if (net.edge_count() == target) break;
        adjacency[p.i].push_back(p.j);
        adjacency[p.j].push_back(p.i);
        const std::size_t ri = find(p.i), rj = find(p.j);
        if (ri != rj || is_planar(adjacency)) {
            root[ri] = rj;
            net.add_edge(p.i, p.j, p.similarity);
        } else {
            adjacency[p.i].pop_back();
            adjacency[p.j].pop_back();
        }
    }
    return net;
}

}  // namespace corrnet
