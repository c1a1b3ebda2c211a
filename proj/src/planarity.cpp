// Left-right planarity test (de Fraysseix-Rosenstiehl criterion in Brandes'
// formulation). Only the testing phase runs; no embedding is built. The
// `ref` links are still maintained because interval trimming walks them.
#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "corrnet/graph.hpp"

namespace corrnet {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Interval {
    std::size_t low = kNone;
    std::size_t high = kNone;

    bool empty() const { return low == kNone && high == kNone; }
};

struct ConflictPair {
    Interval left;
    Interval right;

    void swap() { std::swap(left, right); }
};

class LrPlanarity {
public:
    explicit LrPlanarity(const std::vector<std::vector<std::size_t>>& adjacency) : n_(adjacency.size()) {
        // Undirected edge list without loops or duplicates, tolerant of
        // asymmetric input: {v, w} counts once whether listed at v, w or both.
        std::vector<std::size_t> degree(n_, 0);
        for (std::size_t v = 0; v < n_; ++v) {
            for (std::size_t w : adjacency[v]) {
                if (v != w) {
                    ++degree[v];
                    ++degree[w];
                }
            }
        }
        std::vector<std::size_t> start(n_ + 1, 0);
        for (std::size_t v = 0; v < n_; ++v) start[v + 1] = start[v] + degree[v];
        std::vector<std::size_t> all(start[n_]);
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (std::size_t v = 0; v < n_; ++v) {
            for (std::size_t w : adjacency[v]) {
                if (v != w) {
                    all[fill[v]++] = w;
                    all[fill[w]++] = v;
                }
            }
        }
        std::vector<std::size_t> stamp(n_, kNone);
        for (std::size_t v = 0; v < n_; ++v) {
            for (std::size_t k = start[v]; k < start[v + 1]; ++k) {
                const std::size_t w = all[k];
                if (w > v && stamp[w] != v) {
                    stamp[w] = v;
                    ends_.emplace_back(v, w);
                }
            }
        }
        edge_count_ = ends_.size();
    }

    bool run() {
        if (n_ > 2 && edge_count_ > 3 * n_ - 6) return false;
        const std::size_t m = edge_count_;

        // Incidence lists in one flat array.
        offset_.assign(n_ + 1, 0);
        for (const auto& [v, w] : ends_) {
            ++offset_[v + 1];
            ++offset_[w + 1];
        }
        for (std::size_t v = 0; v < n_; ++v) offset_[v + 1] += offset_[v];
        incident_.resize(2 * m);
        std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);
        for (std::size_t id = 0; id < m; ++id) {
            const auto [v, w] = ends_[id];
            incident_[fill[v]++] = {w, id};
            incident_[fill[w]++] = {v, id};
        }

        height_.assign(n_, kNone);
        parent_edge_.assign(n_, kNone);
        out_.resize(2 * m);
        out_count_.assign(n_, 0);
        oriented_.assign(m, 0);
        target_.assign(m, kNone);
        source_.assign(m, kNone);
        lowpt_.assign(m, 0);
        lowpt2_.assign(m, 0);
        nesting_.assign(m, 0);
        ref_.assign(m, kNone);
        lowpt_edge_.assign(m, kNone);
        stack_bottom_.assign(m, 0);

        std::vector<std::size_t> roots;
        for (std::size_t v = 0; v < n_; ++v) {
            if (height_[v] == kNone) {
                height_[v] = 0;
                roots.push_back(v);
                orient(v);
            }
        }
        // Stable insertion sort of each out-list by nesting depth.
        for (std::size_t v = 0; v < n_; ++v) {
            std::size_t* list = out_.data() + offset_[v];
            for (std::size_t a = 1; a < out_count_[v]; ++a) {
                const std::size_t id = list[a];
                std::size_t b = a;
                for (; b > 0 && nesting_[list[b - 1]] > nesting_[id]; --b) list[b] = list[b - 1];
                list[b] = id;
            }
        }
        for (std::size_t root : roots) {
            if (!test(root)) return false;
        }
        return true;
    }

private:
    struct Incidence {
        std::size_t to;
        std::size_t edge;
    };

    void orient(std::size_t v) {
        const std::size_t e = parent_edge_[v];
        for (std::size_t k = offset_[v]; k < offset_[v + 1]; ++k) {
            const auto [w, id] = incident_[k];
            if (oriented_[id]) continue;
            oriented_[id] = 1;
            source_[id] = v;
            target_[id] = w;
            out_[offset_[v] + out_count_[v]++] = id;
            lowpt_[id] = height_[v];
            lowpt2_[id] = height_[v];
            if (height_[w] == kNone) {
                parent_edge_[w] = id;
                height_[w] = height_[v] + 1;
                orient(w);
            } else {
                lowpt_[id] = height_[w];
            }
            nesting_[id] = 2 * lowpt_[id] + (lowpt2_[id] < height_[v] ? 1 : 0);
            if (e != kNone) {
                if (lowpt_[id] < lowpt_[e]) {
                    lowpt2_[e] = std::min(lowpt_[e], lowpt2_[id]);
                    lowpt_[e] = lowpt_[id];
                } else if (lowpt_[id] > lowpt_[e]) {
                    lowpt2_[e] = std::min(lowpt2_[e], lowpt_[id]);
                } else {
                    lowpt2_[e] = std::min(lowpt2_[e], lowpt2_[id]);
                }
            }
        }
    }

    bool conflicting(const Interval& interval, std::size_t edge) const {
        return !interval.empty() && lowpt_[interval.high] > lowpt_[edge];
    }

    std::size_t lowest(const ConflictPair& p) const {
        if (p.left.empty()) return lowpt_[p.right.low];
        if (p.right.empty()) return lowpt_[p.left.low];
        return std::min(lowpt_[p.left.low], lowpt_[p.right.low]);
    }

    bool test(std::size_t v) {
        const std::size_t e = parent_edge_[v];
        for (std::size_t k = 0; k < out_count_[v]; ++k) {
            const std::size_t ei = out_[offset_[v] + k];
            const std::size_t w = target_[ei];
            stack_bottom_[ei] = stack_.size();
            if (ei == parent_edge_[w]) {
                if (!test(w)) return false;
            } else {
                lowpt_edge_[ei] = ei;
                stack_.push_back({Interval{}, Interval{ei, ei}});
            }
            if (lowpt_[ei] < height_[v]) {
                if (k == 0) {
                    lowpt_edge_[e] = lowpt_edge_[ei];
                } else if (!add_constraints(ei, e)) {
                    return false;
                }
            }
        }
        if (e != kNone) remove_back_edges(e);
        return true;
    }

    bool add_constraints(std::size_t ei, std::size_t e) {
        ConflictPair p;
        // Merge return edges of ei into p.right.
        do {
            ConflictPair q = stack_.back();
            stack_.pop_back();
            if (!q.left.empty()) q.swap();
            if (!q.left.empty()) return false;
            if (lowpt_[q.right.low] > lowpt_[e]) {
                if (p.right.empty()) {
                    p.right = q.right;
                } else {
                    ref_[p.right.low] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                ref_[q.right.low] = lowpt_edge_[e];
            }
        } while (stack_.size() != stack_bottom_[ei]);

        // Merge conflicting return edges of earlier siblings into p.left.
        while (!stack_.empty() &&
               (conflicting(stack_.back().left, ei) || conflicting(stack_.back().right, ei))) {
            ConflictPair q = stack_.back();
            stack_.pop_back();
            if (conflicting(q.right, ei)) q.swap();
            if (conflicting(q.right, ei)) return false;
            ref_[p.right.low] = q.right.high;
            if (q.right.low != kNone) p.right.low = q.right.low;
            if (p.left.empty()) {
                p.left = q.left;
            } else {
                ref_[p.left.low] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if (!(p.left.empty() && p.right.empty())) stack_.push_back(p);
        return true;
    }

    void remove_back_edges(std::size_t e) {
        const std::size_t u = source_[e];
        while (!stack_.empty() && lowest(stack_.back()) == height_[u]) stack_.pop_back();
        if (!stack_.empty()) {
            ConflictPair p = stack_.back();
            stack_.pop_back();
            while (p.left.high != kNone && target_[p.left.high] == u) p.left.high = ref_[p.left.high];
            if (p.left.high == kNone && p.left.low != kNone) {
                ref_[p.left.low] = p.right.low;
                p.left.low = kNone;
            }
            while (p.right.high != kNone && target_[p.right.high] == u) p.right.high = ref_[p.right.high];
            if (p.right.high == kNone && p.right.low != kNone) {
                ref_[p.right.low] = p.left.low;
                p.right.low = kNone;
            }
            stack_.push_back(p);
        }
        if (lowpt_[e] < height_[u] && !stack_.empty()) {
            const std::size_t hl = stack_.back().left.high;
            const std::size_t hr = stack_.back().right.high;
            ref_[e] = (hl != kNone && (hr == kNone || lowpt_[hl] > lowpt_[hr])) ? hl : hr;
        }
    }

    std::size_t n_;
    std::size_t edge_count_ = 0;
    std::vector<std::pair<std::size_t, std::size_t>> ends_;
    std::vector<std::size_t> offset_;
    std::vector<Incidence> incident_;
    std::vector<std::size_t> height_, parent_edge_;
    std::vector<std::size_t> out_, out_count_;
    std::vector<char> oriented_;
    std::vector<std::size_t> source_, target_, lowpt_, lowpt2_, nesting_, ref_, lowpt_edge_, stack_bottom_;
    std::vector<ConflictPair> stack_;
};

}  // namespace

bool is_planar(const std::vector<std::vector<std::size_t>>& adjacency) {
    return LrPlanarity(adjacency).run();
}

}  // namespace corrnet
