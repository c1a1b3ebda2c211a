#include "corrnet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "corrnet/error.hpp"
#include "csv.hpp"

namespace corrnet {

Partition::Partition(std::span<const std::size_t> labels) {
    assignment_.reserve(labels.size());
    std::vector<std::pair<std::size_t, std::size_t>> seen;  // raw label -> canonical id
    for (std::size_t label : labels) {
        auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& p) { return p.first == label; });
        if (it == seen.end()) {
            seen.emplace_back(label, seen.size());
            assignment_.push_back(seen.size() - 1);
        } else {
            assignment_.push_back(it->second);
        }
    }
    k_ = seen.size();
}

Partition Partition::singletons(std::size_t n) {
    std::vector<std::size_t> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return Partition(labels);
}

Partition Partition::single_cluster(std::size_t n) {
    std::vector<std::size_t> labels(n, 0);
    return Partition(labels);
}

Partition Partition::from_names(std::span<const std::string> names) {
    std::vector<std::size_t> labels;
    std::vector<std::string> distinct;
    for (const auto& name : names) {
        auto it = std::find(distinct.begin(), distinct.end(), name);
        labels.push_back(static_cast<std::size_t>(it - distinct.begin()));
        if (it == distinct.end()) distinct.push_back(name);
    }
    return Partition(labels);
}

std::vector<std::vector<std::size_t>> Partition::clusters() const {
    std::vector<std::vector<std::size_t>> out(k_);
    for (std::size_t v = 0; v < assignment_.size(); ++v) out[assignment_[v]].push_back(v);
    return out;
}

void validate_weights(const Eigen::MatrixXd& weights) {
    if (weights.rows() != weights.cols()) throw ValidationError("weight matrix must be square");
    for (Eigen::Index i = 0; i < weights.rows(); ++i) {
        for (Eigen::Index j = 0; j < weights.cols(); ++j) {
            const double w = weights(i, j);
            if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("weights must be finite and non-negative");
            if (w != weights(j, i)) throw ValidationError("weight matrix must be symmetric");
        }
    }
}

double modularity(const Eigen::MatrixXd& weights, const Partition& partition) {
    const std::size_t n = partition.size();
    if (static_cast<std::size_t>(weights.rows()) != n) throw ValidationError("partition size mismatch");
    const double two_s = weights.sum();
    if (!(two_s > 0.0)) throw ValidationError("modularity undefined: total weight is zero");
    const std::size_t k = partition.cluster_count();
    std::vector<double> inside(k, 0.0), total(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = partition[i];
        total[c] += weights.row(static_cast<Eigen::Index>(i)).sum();
        for (std::size_t j = 0; j < n; ++j) {
            if (partition[j] == c) inside[c] += weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < k; ++c) q += inside[c] / two_s - (total[c] / two_s) * (total[c] / two_s);
    return q;
}

std::vector<std::size_t> random_order(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

namespace {

// One level of the Louvain hierarchy: dense weights plus neighbour lists.
struct Level {
    Eigen::MatrixXd w;
    std::vector<std::vector<std::size_t>> neighbors;
    std::vector<double> strength;
    double total = 0.0;  // sum of all entries (2m)

    explicit Level(Eigen::MatrixXd weights) : w(std::move(weights)) {
        const auto n = static_cast<std::size_t>(w.rows());
        neighbors.resize(n);
        strength.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            strength[i] = w.row(static_cast<Eigen::Index>(i)).sum();
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) {
                    neighbors[i].push_back(j);
                }
            }
        }
        total = w.sum();
    }
    std::size_t size() const { return strength.size(); }
};

// Relabels community ids to 0..c-1 by first appearance in vertex order.
std::size_t compress(std::vector<std::size_t>& community) {
    Partition p(community);
    community = p.assignment();
    return p.cluster_count();
}

// Local-moving phase. Returns true if any vertex changed community.
bool local_moves(const Level& g, std::vector<std::size_t>& community, std::span<const std::size_t> order) {
    const std::size_t n = g.size();
    // Minimum modularity gain 1e-12, expressed in gain units (dQ = 2 gain / total).
    const double eps = 1e-12 * g.total / 2.0;
    std::vector<double> tot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) tot[community[i]] += g.strength[i];

    std::vector<double> links(n, 0.0);
    std::vector<std::size_t> touched;
    bool moved_any = false;
    for (;;) {
        bool moved = false;
        for (std::size_t i : order) {
            const std::size_t old_c = community[i];
            touched.clear();
            for (std::size_t j : g.neighbors[i]) {
                const std::size_t c = community[j];
                if (links[c] == 0.0) touched.push_back(c);
                links[c] += g.w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
            tot[old_c] -= g.strength[i];
            const double ki = g.strength[i];
            auto gain = [&](std::size_t c) { return links[c] - tot[c] * ki / g.total; };

            // Largest gain wins; gains within eps of it are ties, broken by lowest id.
            // The current community is kept unless the winner beats it by eps.
            std::sort(touched.begin(), touched.end());
            double top = gain(old_c);
            for (std::size_t c : touched) top = std::max(top, gain(c));
            std::size_t best = old_c;
            if (top > gain(old_c) + eps) {
                for (std::size_t c : touched) {
                    if (c != old_c && gain(c) >= top - eps) {
                        best = c;
                        break;
                    }
                }
            }
            tot[best] += ki;
            community[i] = best;
            if (best != old_c) moved = true;
            for (std::size_t c : touched) links[c] = 0.0;
            links[old_c] = 0.0;
        }
        if (!moved) break;
        moved_any = true;
    }
    return moved_any;
}

Eigen::MatrixXd aggregate(const Eigen::MatrixXd& w, const std::vector<std::size_t>& community, std::size_t k) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    const auto n = static_cast<std::size_t>(w.rows());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(static_cast<Eigen::Index>(community[i]), static_cast<Eigen::Index>(community[j])) +=
                w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

// Coarse vertices ordered by the first appearance of any member in `order`.
std::vector<std::size_t> induced_order(std::span<const std::size_t> order,
                                       const std::vector<std::size_t>& community, std::size_t k) {
    std::vector<std::size_t> out;
    std::vector<bool> seen(k, false);
    for (std::size_t v : order) {
        const std::size_t c = community[v];
        if (!seen[c]) {
            seen[c] = true;
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace

Partition louvain(const Eigen::MatrixXd& weights, std::span<const std::size_t> order) {
    validate_weights(weights);
    const auto n = static_cast<std::size_t>(weights.rows());
    if (order.size() != n) throw ValidationError("vertex order must cover every vertex");
    {
        std::vector<bool> seen(n, false);
        for (std::size_t v : order) {
            if (v >= n || seen[v]) throw ValidationError("vertex order must be a permutation");
            seen[v] = true;
        }
    }
    if (!(weights.sum() > 0.0)) throw ValidationError("louvain: total weight is zero");

    const Level base(weights);
    std::vector<std::size_t> community(n);
    std::iota(community.begin(), community.end(), 0);

    for (;;) {
        bool changed = local_moves(base, community, order);
        std::size_t k = compress(community);

        Level coarse(aggregate(base.w, community, k));
        std::vector<std::size_t> coarse_order = induced_order(order, community, k);
        for (;;) {
            std::vector<std::size_t> merged(k);
            std::iota(merged.begin(), merged.end(), 0);
            if (!local_moves(coarse, merged, coarse_order)) break;
            changed = true;
            const std::size_t k2 = compress(merged);
            for (auto& c : community) c = merged[c];
            coarse = Level(aggregate(coarse.w, merged, k2));
            coarse_order = induced_order(order, community, k2);
            k = k2;
        }
        if (!changed) break;
    }
    return Partition(community);
}

Partition louvain(const Eigen::MatrixXd& weights, std::uint64_t seed) {
    const auto order = random_order(static_cast<std::size_t>(weights.rows()), seed);
    return louvain(weights, order);
}

EigenSpectrum generalized_spectrum(const Eigen::MatrixXd& weights) {
    validate_weights(weights);
    EigenSpectrum out;
    out.vertex_count = static_cast<std::size_t>(weights.rows());
    const Eigen::VectorXd degree = weights.rowwise().sum();
    for (std::size_t v = 0; v < out.vertex_count; ++v) {
        if (degree(static_cast<Eigen::Index>(v)) > 0.0) out.vertices.push_back(v);
    }
    const auto m = static_cast<Eigen::Index>(out.vertices.size());
    if (m == 0) {
        out.values.resize(0);
        out.vectors.resize(0, 0);
        return out;
    }
    Eigen::VectorXd inv_sqrt(m);
    for (Eigen::Index a = 0; a < m; ++a) {
        inv_sqrt(a) = 1.0 / std::sqrt(degree(static_cast<Eigen::Index>(out.vertices[static_cast<std::size_t>(a)])));
    }
    // L_sym = I - D^{-1/2} W D^{-1/2}; its eigenvectors u give v = D^{-1/2} u.
    Eigen::MatrixXd lsym(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const auto va = static_cast<Eigen::Index>(out.vertices[static_cast<std::size_t>(a)]);
        for (Eigen::Index b = 0; b < m; ++b) {
            const auto vb = static_cast<Eigen::Index>(out.vertices[static_cast<std::size_t>(b)]);
            lsym(a, b) = (a == b ? 1.0 : 0.0) - inv_sqrt(a) * weights(va, vb) * inv_sqrt(b);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lsym);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
    out.values = solver.eigenvalues();
    out.vectors = inv_sqrt.asDiagonal() * solver.eigenvectors();
    return out;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto dim = points.cols();
    if (k == 0 || k > n) throw ValidationError("k-means: k must be in [1, n]");
    std::mt19937_64 rng(seed);

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::size_t restart = 0; restart < std::max<std::size_t>(options.restarts, 1); ++restart) {
        // k-means++ seeding.
        Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), dim);
        std::vector<double> d2(n, std::numeric_limits<double>::infinity());
        std::vector<bool> chosen(n, false);
        std::size_t next = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        for (std::size_t c = 0; c < k; ++c) {
            chosen[next] = true;
            centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(next));
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = (points.row(static_cast<Eigen::Index>(i)) - centers.row(static_cast<Eigen::Index>(c))).squaredNorm();
                d2[i] = std::min(d2[i], d);
                sum += d2[i];
            }
            if (c + 1 == k) break;
            if (sum > 0.0) {
                double target = std::uniform_real_distribution<double>(0.0, sum)(rng);
                next = n - 1;
                for (std::size_t i = 0; i < n; ++i) {
                    target -= d2[i];
                    if (target < 0.0 && d2[i] > 0.0) {
                        next = i;
                        break;
                    }
                }
            } else {
                // Every point coincides with a centre: take the first unused one.
                next = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
            }
        }

        std::vector<std::size_t> labels(n, 0);
        double inertia = 0.0;
        for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
            inertia = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < k; ++c) {
                    const double d = (points.row(static_cast<Eigen::Index>(i)) - centers.row(static_cast<Eigen::Index>(c))).squaredNorm();
                    if (d < best_d) {
                        best_d = d;
                        labels[i] = c;
                    }
                }
                inertia += best_d;
            }
            Eigen::MatrixXd updated = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), dim);
            std::vector<std::size_t> count(k, 0);
            for (std::size_t i = 0; i < n; ++i) {
                updated.row(static_cast<Eigen::Index>(labels[i])) += points.row(static_cast<Eigen::Index>(i));
                ++count[labels[i]];
            }
            for (std::size_t c = 0; c < k; ++c) {
                if (count[c] == 0) {
                    updated.row(static_cast<Eigen::Index>(c)) = centers.row(static_cast<Eigen::Index>(c));
                } else {
                    updated.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(count[c]);
                }
            }
            const double shift = (updated - centers).squaredNorm();
            centers = std::move(updated);
            if (shift <= options.tolerance) break;
        }
        // Final assignment against the converged centres.
        inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = (points.row(static_cast<Eigen::Index>(i)) - centers.row(static_cast<Eigen::Index>(c))).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    labels[i] = c;
                }
            }
            inertia += best_d;
        }
        if (inertia < best.inertia) {
            best.inertia = inertia;
            best.labels = labels;
        }
    }
    return best;
}

Partition nsc(const EigenSpectrum& spectrum, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("nsc: k must be at least 2");
    if (k > spectrum.vertex_count) throw ValidationError("nsc: k exceeds the number of vertices");
    const std::size_t active = spectrum.vertices.size();
    std::vector<std::size_t> labels(spectrum.vertex_count);
    std::size_t next_label = 0;
    if (active > 0) {
        const std::size_t kk = std::min(k, active);
        const Eigen::MatrixXd rows = spectrum.vectors.leftCols(static_cast<Eigen::Index>(kk));
        const auto result = kmeans(rows, kk, seed);
        for (std::size_t r = 0; r < active; ++r) labels[spectrum.vertices[r]] = result.labels[r];
        next_label = kk;
    }
    std::vector<bool> is_active(spectrum.vertex_count, false);
    for (std::size_t v : spectrum.vertices) is_active[v] = true;
    for (std::size_t v = 0; v < spectrum.vertex_count; ++v) {
        if (!is_active[v]) labels[v] = next_label++;
    }
    return Partition(labels);
}

Partition nsc(const Eigen::MatrixXd& weights, std::size_t k, std::uint64_t seed) {
    return nsc(generalized_spectrum(weights), k, seed);
}

std::vector<Eigengap> ranked_eigengaps(std::span<const double> values, std::size_t k_min, std::size_t k_max) {
    const std::size_t n = values.size();
    if (k_min < 1 || k_max + 1 > n || k_min > k_max) throw ValidationError("eigengap: empty k range");
    std::vector<Eigengap> gaps;
    for (std::size_t k = k_min; k <= k_max; ++k) gaps.push_back({k, values[k] - values[k - 1]});
    std::stable_sort(gaps.begin(), gaps.end(),
                     [](const Eigengap& a, const Eigengap& b) { return a.gap > b.gap + 1e-12; });
    return gaps;
}

std::size_t eigengap_k(std::span<const double> values, std::size_t k_min, std::size_t k_max) {
    if (k_min < 2) throw ValidationError("eigengap: k_min must be at least 2");
    const std::size_t n = values.size();
    if (k_max + 1 > n || k_min > k_max) throw ValidationError("eigengap: empty k range");
    std::size_t best = k_min;
    double best_gap = values[k_min] - values[k_min - 1];
    for (std::size_t k = k_min + 1; k <= k_max; ++k) {
        const double gap = values[k] - values[k - 1];
        if (gap > best_gap + 1e-12) {
            best = k;
            best_gap = gap;
        }
    }
    return best;
}

std::size_t eigengap_k(const EigenSpectrum& spectrum, std::size_t k_min, std::size_t k_max) {
    return eigengap_k(std::span<const double>(spectrum.values.data(), static_cast<std::size_t>(spectrum.values.size())),
                      k_min, k_max);
}

void write_partition_csv(const std::filesystem::path& path, std::span<const std::string> stocks,
                         const Partition& partition) {
    if (stocks.size() != partition.size()) throw ValidationError("partition size does not match stock list");
    auto out = csv::open_output(path);
    out << "stock,cluster\n";
    for (std::size_t v = 0; v < stocks.size(); ++v) out << csv::escape(stocks[v]) << ',' << partition[v] << '\n';
}

}  // namespace corrnet
