#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "corrnet/ingest.hpp"

namespace corrnet {

/// Symmetric NMI matrix with zero diagonal; the weighted complete graph of stocks.
struct SimilarityMatrix {
    std::vector<std::string> stocks;
    Eigen::MatrixXd values;

    std::size_t size() const noexcept { return stocks.size(); }
    double operator()(std::size_t i, std::size_t j) const { return values(i, j); }

    /// Sub-matrix over the given stock indices, in the given order.
    SimilarityMatrix restrict(std::span<const std::size_t> indices) const;
    /// Throws ValidationError unless symmetric, zero-diagonal, entries in [0, 1].
    void validate() const;
};

/// Shannon entropy in bits; 0 log 0 = 0.
double entropy(const Distribution& d);
double joint_entropy(const JointDistribution& d);

/// I = hx + hy - hxy. Negatives down to -1e-9 are floating-point noise and
/// clamp to zero; anything lower throws.
double mutual_information(double hx, double hy, double hxy);

/// 2 I / (hx + hy). Defined as 0 (with a warning) when both entropies vanish.
double nmi(double mutual_info, double hx, double hy);

/// Pairwise NMI over all stocks with a shared bin count q.
SimilarityMatrix similarity_matrix(const ReturnMatrix& returns, std::size_t q,
                                   Binning binning = Binning::Quantile);

/// n x n CSV, header `stock,S1,...,Sn`, each row labelled; 17 significant digits.
void write_similarity_csv(const std::filesystem::path& path, const SimilarityMatrix& sim);
SimilarityMatrix load_similarity_csv(const std::filesystem::path& path);

}  // namespace corrnet
