#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace corrnet {

/// Hard assignment of every vertex to one cluster; ids are 0..k-1 numbered
/// by first appearance.
class Partition {
public:
    Partition() = default;
    /// Canonicalises arbitrary labels.
    explicit Partition(std::span<const std::size_t> labels);

    static Partition singletons(std::size_t n);
    static Partition single_cluster(std::size_t n);
    /// Groups equal strings (e.g. sector names) into clusters.
    static Partition from_names(std::span<const std::string> names);

    std::size_t size() const noexcept { return assignment_.size(); }
    std::size_t cluster_count() const noexcept { return k_; }
    std::size_t operator[](std::size_t v) const { return assignment_[v]; }
    const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
    /// Members of each cluster in ascending vertex order.
    std::vector<std::vector<std::size_t>> clusters() const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::size_t> assignment_;
    std::size_t k_ = 0;
};

/// Q = 1/(2S) sum_ij [w_ij - k_i k_j / (2S)] delta(c_i, c_j), where 2S is the
/// sum of all matrix entries and k_i the row sums. Self-loops (diagonal) count.
double modularity(const Eigen::MatrixXd& weights, const Partition& partition);

/// Uniformly shuffled vertex order.
std::vector<std::size_t> random_order(std::size_t n, std::uint64_t seed);

/// Louvain modularity maximisation visiting vertices in `order`.
///
/// Local moves take a vertex to the neighbouring community with the largest
/// modularity gain, staying put unless the gain beats the current community
/// (equal gains go to the lowest community id). Communities are then
/// collapsed into weighted super-vertices with self-loops and the process
/// repeats. The outer loop restarts local moves on the original graph from
/// the coarse result, so at termination no single-vertex move raises Q.
Partition louvain(const Eigen::MatrixXd& weights, std::span<const std::size_t> order);
Partition louvain(const Eigen::MatrixXd& weights, std::uint64_t seed);

/// Generalised eigenpairs of L v = lambda D v (L = D - W), ascending.
/// Zero-degree vertices are excluded; `vertices` lists the ones kept, and
/// row r of `vectors` belongs to vertices[r].
struct EigenSpectrum {
    std::size_t vertex_count = 0;
    std::vector<std::size_t> vertices;
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

EigenSpectrum generalized_spectrum(const Eigen::MatrixXd& weights);

struct KMeansOptions {
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
    double tolerance = 1e-8;
};

struct KMeansResult {
    std::vector<std::size_t> labels;
    double inertia = 0.0;
};

/// Lloyd iterations from k-means++ seeding, best of `restarts` by inertia.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Normalised spectral clustering: k-means on the rows of the k smallest
/// generalised eigenvectors. Zero-degree vertices come back as singletons,
/// and k then applies to the remaining vertices (clamped to their count).
Partition nsc(const EigenSpectrum& spectrum, std::size_t k, std::uint64_t seed);
Partition nsc(const Eigen::MatrixXd& weights, std::size_t k, std::uint64_t seed);

/// argmax over k in [k_min, k_max] of lambda_{k+1} - lambda_k (1-based),
/// smallest k on ties (gaps within 1e-12 count as equal).
std::size_t eigengap_k(std::span<const double> ascending_values, std::size_t k_min, std::size_t k_max);
std::size_t eigengap_k(const EigenSpectrum& spectrum, std::size_t k_min, std::size_t k_max);

struct Eigengap {
    std::size_t k;
    double gap;
};

/// Gaps for k in [k_min, k_max], largest first (ties by smaller k).
std::vector<Eigengap> ranked_eigengaps(std::span<const double> ascending_values, std::size_t k_min,
                                       std::size_t k_max);

/// `stock,cluster` CSV.
void write_partition_csv(const std::filesystem::path& path, std::span<const std::string> stocks,
                         const Partition& partition);

/// Throws ValidationError unless square, symmetric and non-negative.
void validate_weights(const Eigen::MatrixXd& weights);

}  // namespace corrnet
