#include "corrnet/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "corrnet/error.hpp"
#include "csv.hpp"

namespace corrnet {

namespace {

double plogp_sum(std::span<const double> p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

}  // namespace

double entropy(const Distribution& d) { return plogp_sum(d.p); }

double joint_entropy(const JointDistribution& d) { return plogp_sum(d.p); }

double mutual_information(double hx, double hy, double hxy) {
    const double mi = hx + hy - hxy;
    if (mi < -1e-9) throw ValidationError("inconsistent entropies: mutual information < 0");
    return mi < 0.0 ? 0.0 : mi;
}

double nmi(double mutual_info, double hx, double hy) {
    const double denom = hx + hy;
    if (denom <= 0.0) {
        std::cerr << "warning: NMI of two constant series defined as 0\n";
        return 0.0;
    }
    return 2.0 * mutual_info / denom;
}

SimilarityMatrix SimilarityMatrix::restrict(std::span<const std::size_t> indices) const {
    SimilarityMatrix out;
    out.stocks.reserve(indices.size());
    out.values.resize(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t a = 0; a < indices.size(); ++a) {
        out.stocks.push_back(stocks.at(indices[a]));
        for (std::size_t b = 0; b < indices.size(); ++b) {
            out.values(a, b) = values(indices[a], indices[b]);
        }
    }
    return out;
}

void SimilarityMatrix::validate() const {
    const auto n = static_cast<Eigen::Index>(stocks.size());
    if (values.rows() != n || values.cols() != n) throw ValidationError("similarity matrix shape mismatch");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (values(i, i) != 0.0) throw ValidationError("similarity matrix diagonal must be zero");
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double s = values(i, j);
            if (s != values(j, i)) throw ValidationError("similarity matrix is not symmetric");
            if (!(s >= 0.0 && s <= 1.0 + 1e-9)) throw ValidationError("similarity outside [0, 1]");
        }
    }
}

SimilarityMatrix similarity_matrix(const ReturnMatrix& returns, std::size_t q, Binning binning) {
    const std::size_t n = returns.stock_count();
    std::vector<BinAssignment> bins;
    std::vector<double> h;
    bins.reserve(n);
    h.reserve(n);
    for (const auto& series : returns.returns) {
        bins.push_back(bin_series(series, q, binning));
        h.push_back(entropy(marginal_distribution(bins.back())));
    }

    SimilarityMatrix sim;
    sim.stocks = returns.stocks;
    sim.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double hxy = joint_entropy(joint_histogram(bins[i], bins[j]));
            const double value = nmi(mutual_information(h[i], h[j], hxy), h[i], h[j]);
            sim.values(i, j) = value;
            sim.values(j, i) = value;
        }
    }
    return sim;
}

void write_similarity_csv(const std::filesystem::path& path, const SimilarityMatrix& sim) {
    auto out = csv::open_output(path);
    out << "stock";
    for (const auto& s : sim.stocks) out << ',' << csv::escape(s);
    out << '\n';
    for (std::size_t i = 0; i < sim.size(); ++i) {
        out << csv::escape(sim.stocks[i]);
        for (std::size_t j = 0; j < sim.size(); ++j) out << ',' << csv::format(sim(i, j));
        out << '\n';
    }
}

SimilarityMatrix load_similarity_csv(const std::filesystem::path& path) {
    csv::Reader reader(path);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw ParseError(reader.source(), 1, "empty file");
    SimilarityMatrix sim;
    sim.stocks.assign(fields.begin() + 1, fields.end());
    const auto n = static_cast<Eigen::Index>(sim.stocks.size());
    sim.values = Eigen::MatrixXd::Zero(n, n);
    Eigen::Index row = 0;
    while (reader.next(fields)) {
        if (row >= n) throw ParseError(reader.source(), reader.line(), "too many rows");
        if (static_cast<Eigen::Index>(fields.size()) != n + 1) {
            throw ParseError(reader.source(), reader.line(), "row length does not match header");
        }
        if (fields[0] != sim.stocks[static_cast<std::size_t>(row)]) {
            throw ParseError(reader.source(), reader.line(), "row label does not match header order");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            auto v = csv::parse_cell(fields[static_cast<std::size_t>(j) + 1], reader.source(), reader.line());
            if (!v) throw ParseError(reader.source(), reader.line(), "blank similarity cell");
            sim.values(row, j) = *v;
        }
        ++row;
    }
    if (row != n) throw ParseError(reader.source(), reader.line(), "too few rows");
    sim.validate();
    return sim;
}

}  // namespace corrnet
