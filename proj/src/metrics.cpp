#include "corrnet/metrics.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <unordered_map>

#include "corrnet/error.hpp"

namespace corrnet {

namespace {

std::uint64_t pairs(std::uint64_t x) { return x < 2 ? 0 : x * (x - 1) / 2; }

}  // namespace

ContingencyTable ContingencyTable::build(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) throw ValidationError("partitions cover different element counts");
    ContingencyTable t;
    t.counts.assign(a.cluster_count(), std::vector<std::uint64_t>(b.cluster_count(), 0));
    t.row_sums.assign(a.cluster_count(), 0);
    t.col_sums.assign(b.cluster_count(), 0);
    for (std::size_t v = 0; v < a.size(); ++v) {
        ++t.counts[a[v]][b[v]];
        ++t.row_sums[a[v]];
        ++t.col_sums[b[v]];
    }
    t.total = a.size();
    return t;
}

double ari(const Partition& a, const Partition& b) {
    const auto table = ContingencyTable::build(a, b);
    std::uint64_t index = 0, sum_a = 0, sum_b = 0;
    for (const auto& row : table.counts) {
        for (std::uint64_t c : row) index += pairs(c);
    }
    for (std::uint64_t x : table.row_sums) sum_a += pairs(x);
    for (std::uint64_t x : table.col_sums) sum_b += pairs(x);
    const std::uint64_t all = pairs(table.total);

    const double expected =
        all == 0 ? 0.0 : static_cast<double>(sum_a) * static_cast<double>(sum_b) / static_cast<double>(all);
    const double max_index = 0.5 * (static_cast<double>(sum_a) + static_cast<double>(sum_b));
    const double denom = max_index - expected;
    if (all == 0 || denom == 0.0) {
        if (a == b) return 1.0;
        std::cerr << "warning: ARI denominator is zero for differing partitions; reporting 0\n";
        return 0.0;
    }
    return (static_cast<double>(index) - expected) / denom;
}

double ari(std::span<const std::string> stocks_a, const Partition& a, std::span<const std::string> stocks_b,
           const Partition& b) {
    if (stocks_a.size() != a.size() || stocks_b.size() != b.size()) {
        throw ValidationError("partition size does not match its stock list");
    }
    if (stocks_a.size() != stocks_b.size()) throw ValidationError("partitions cover different stock sets");
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t v = 0; v < stocks_b.size(); ++v) position.emplace(stocks_b[v], v);
    std::vector<std::size_t> aligned(stocks_a.size());
    for (std::size_t v = 0; v < stocks_a.size(); ++v) {
        auto it = position.find(stocks_a[v]);
        if (it == position.end()) throw ValidationError("partitions cover different stock sets: " + stocks_a[v]);
        aligned[v] = b[it->second];
    }
    return ari(a, Partition(aligned));
}

Homogeneity clique_homogeneity(std::span<const Clique> cliques, std::span<const std::string> vertex_sectors) {
    if (cliques.empty()) throw ValidationError("no cliques");
    Homogeneity h;
    h.total = cliques.size();
    for (const auto& clique : cliques) {
        const auto& first = vertex_sectors[clique.members.front()];
        const bool same = std::all_of(clique.members.begin(), clique.members.end(),
                                      [&](std::size_t v) { return vertex_sectors[v] == first; });
        if (same) ++h.homogeneous;
    }
    return h;
}

Homogeneity clique_homogeneity(std::span<const Clique> cliques, const Network& network, const SectorTable& sectors) {
    const auto labels = sectors.sectors_for(network.stocks());
    return clique_homogeneity(cliques, labels);
}

std::vector<std::pair<std::string, std::size_t>> sector_composition(std::span<const std::string> cluster_stocks,
                                                                    const SectorTable& sectors) {
    std::map<std::string, std::size_t> counts;
    for (const auto& s : cluster_stocks) ++counts[sectors.sector_of(s)];
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
    return out;
}

DominantSector dominant_sector(std::span<const std::string> cluster_stocks, const SectorTable& sectors) {
    if (cluster_stocks.empty()) throw ValidationError("dominant sector of an empty cluster");
    const auto composition = sector_composition(cluster_stocks, sectors);
    return {composition.front().first, composition.front().second, cluster_stocks.size()};
}

}  // namespace corrnet
