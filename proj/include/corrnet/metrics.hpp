#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corrnet/clustering.hpp"
#include "corrnet/graph.hpp"
#include "corrnet/ingest.hpp"

namespace corrnet {

struct ContingencyTable {
    std::vector<std::vector<std::uint64_t>> counts;  ///< n_ij, rows = clusters of A
    std::vector<std::uint64_t> row_sums;             ///< a_i
    std::vector<std::uint64_t> col_sums;             ///< b_j
    std::uint64_t total = 0;

    static ContingencyTable build(const Partition& a, const Partition& b);
};

/// Hubert-Arabie adjusted Rand index of two partitions of the same vertices.
/// When the chance-corrected denominator vanishes (both partitions trivial)
/// the result is 1 for identical partitions and 0 otherwise.
double ari(const Partition& a, const Partition& b);

/// ARI of partitions over named stocks; aligns by name and throws
/// ValidationError if the two stock sets differ.
double ari(std::span<const std::string> stocks_a, const Partition& a,
           std::span<const std::string> stocks_b, const Partition& b);

struct Homogeneity {
    std::size_t homogeneous = 0;
    std::size_t total = 0;
    double ratio() const { return total == 0 ? 0.0 : static_cast<double>(homogeneous) / static_cast<double>(total); }
};

/// Fraction of cliques whose members all share one sector. `vertex_sectors`
/// is indexed by vertex. Throws on an empty clique list.
Homogeneity clique_homogeneity(std::span<const Clique> cliques, std::span<const std::string> vertex_sectors);
Homogeneity clique_homogeneity(std::span<const Clique> cliques, const Network& network, const SectorTable& sectors);

struct DominantSector {
    std::string sector;
    std::size_t count = 0;
    std::size_t size = 0;
    double share() const { return size == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(size); }
};

/// Modal sector of a cluster; ties go to the alphabetically first name.
DominantSector dominant_sector(std::span<const std::string> cluster_stocks, const SectorTable& sectors);

/// Sector -> member count, largest first (ties alphabetical).
std::vector<std::pair<std::string, std::size_t>> sector_composition(std::span<const std::string> cluster_stocks,
                                                                    const SectorTable& sectors);

}  // namespace corrnet
