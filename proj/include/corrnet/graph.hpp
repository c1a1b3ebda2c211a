#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace corrnet {

struct Edge {
    std::size_t u = 0;  ///< smaller endpoint
    std::size_t v = 0;  ///< larger endpoint
    double weight = 0.0;

    bool operator==(const Edge&) const = default;
};

/// Simple undirected weighted graph over labelled stocks.
class Network {
public:
    Network() = default;
    explicit Network(std::vector<std::string> stocks);

    std::size_t vertex_count() const noexcept { return stocks_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    const std::vector<std::string>& stocks() const noexcept { return stocks_; }

    /// Optional per-vertex sector labels (empty when unknown).
    const std::vector<std::string>& sectors() const noexcept { return sectors_; }
    void set_sectors(std::vector<std::string> sectors);

    /// Adds {u, v}; throws on self-loops, duplicates, or weights outside [0, 1].
    void add_edge(std::size_t u, std::size_t v, double weight);
    void remove_edge(std::size_t u, std::size_t v);
    bool has_edge(std::size_t u, std::size_t v) const;
    double weight(std::size_t u, std::size_t v) const;
    std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
    std::vector<std::size_t> degrees() const;

    /// Neighbours of v in ascending order.
    const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }
    const std::vector<std::vector<std::size_t>>& adjacency() const noexcept { return adjacency_; }

    /// All edges sorted by (u, v).
    std::vector<Edge> edges() const;

    /// Weighted adjacency matrix (zero where no edge).
    Eigen::MatrixXd weight_matrix() const;
    /// 0/1 adjacency matrix.
    Eigen::MatrixXd binary_adjacency() const;

    bool operator==(const Network&) const = default;

private:
    std::vector<std::string> stocks_;
    std::vector<std::string> sectors_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::vector<double>> weights_;  // parallel to adjacency_
    std::size_t edge_count_ = 0;
};

/// Left-right planarity test on an adjacency list (no embedding is built).
bool is_planar(const std::vector<std::vector<std::size_t>>& adjacency);
bool is_planar(const Network& network);

struct Clique {
    std::vector<std::size_t> members;  ///< ascending vertex indices
    bool maximal = false;

    bool operator==(const Clique&) const = default;
    auto operator<=>(const Clique& other) const { return members <=> other.members; }
};

/// All maximal cliques with at least min_size members, sorted lexicographically.
std::vector<Clique> maximal_cliques(const Network& network, std::size_t min_size = 1);

/// Every complete vertex subset of exactly `size` vertices, lexicographic order.
std::vector<Clique> enumerate_m_cliques(const Network& network, std::size_t size);

/// True if every pair of members is adjacent.
bool is_clique(const Network& network, std::span<const std::size_t> members);

/// Edge list `u,v,weight` and vertex table `index,stock,sector`.
void write_edge_list(const std::filesystem::path& path, const Network& network);
void write_vertex_table(const std::filesystem::path& path, const Network& network);
Network load_network(const std::filesystem::path& edge_path, const std::filesystem::path& vertex_path);

}  // namespace corrnet
