#include "corrnet/graph.hpp"

#include <algorithm>
#include <iterator>
#include <map>

#include "corrnet/error.hpp"
#include "csv.hpp"

namespace corrnet {

Network::Network(std::vector<std::string> stocks)
    : stocks_(std::move(stocks)), adjacency_(stocks_.size()), weights_(stocks_.size()) {}

void Network::set_sectors(std::vector<std::string> sectors) {
    if (!sectors.empty() && sectors.size() != stocks_.size()) {
        throw ValidationError("sector labels do not match vertex count");
    }
    sectors_ = std::move(sectors);
}

void Network::add_edge(std::size_t u, std::size_t v, double weight) {
    if (u >= vertex_count() || v >= vertex_count()) throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loops are not allowed");
    if (!(weight >= 0.0 && weight <= 1.0 + 1e-9)) throw ValidationError("edge weight outside [0, 1]");
    auto& au = adjacency_[u];
    auto pos = std::lower_bound(au.begin(), au.end(), v);
    if (pos != au.end() && *pos == v) throw ValidationError("duplicate edge");
    weights_[u].insert(weights_[u].begin() + (pos - au.begin()), weight);
    au.insert(pos, v);
    auto& av = adjacency_[v];
    auto pos_v = std::lower_bound(av.begin(), av.end(), u);
    weights_[v].insert(weights_[v].begin() + (pos_v - av.begin()), weight);
    av.insert(pos_v, u);
    ++edge_count_;
}

void Network::remove_edge(std::size_t u, std::size_t v) {
    auto erase_one = [this](std::size_t a, std::size_t b) {
        auto& adj = adjacency_.at(a);
        auto pos = std::lower_bound(adj.begin(), adj.end(), b);
        if (pos == adj.end() || *pos != b) throw ValidationError("edge not present");
        weights_[a].erase(weights_[a].begin() + (pos - adj.begin()));
        adj.erase(pos);
    };
    erase_one(u, v);
    erase_one(v, u);
    --edge_count_;
}

bool Network::has_edge(std::size_t u, std::size_t v) const {
    const auto& adj = adjacency_.at(u);
    return std::binary_search(adj.begin(), adj.end(), v);
}

double Network::weight(std::size_t u, std::size_t v) const {
    const auto& adj = adjacency_.at(u);
    auto pos = std::lower_bound(adj.begin(), adj.end(), v);
    if (pos == adj.end() || *pos != v) return 0.0;
    return weights_[u][static_cast<std::size_t>(pos - adj.begin())];
}

std::vector<std::size_t> Network::degrees() const {
    std::vector<std::size_t> out;
    out.reserve(vertex_count());
    for (const auto& adj : adjacency_) out.push_back(adj.size());
    return out;
}

std::vector<Edge> Network::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t u = 0; u < vertex_count(); ++u) {
        for (std::size_t k = 0; k < adjacency_[u].size(); ++k) {
            const std::size_t v = adjacency_[u][k];
            if (u < v) out.push_back({u, v, weights_[u][k]});
        }
    }
    return out;
}

Eigen::MatrixXd Network::weight_matrix() const {
    const auto n = static_cast<Eigen::Index>(vertex_count());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : edges()) {
        w(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = e.weight;
        w(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = e.weight;
    }
    return w;
}

Eigen::MatrixXd Network::binary_adjacency() const {
    const auto n = static_cast<Eigen::Index>(vertex_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : edges()) {
        a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = 1.0;
        a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = 1.0;
    }
    return a;
}

bool is_planar(const Network& network) { return is_planar(network.adjacency()); }

bool is_clique(const Network& network, std::span<const std::size_t> members) {
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            if (!network.has_edge(members[a], members[b])) return false;
        }
    }
    return true;
}

namespace {

using VertexSet = std::vector<std::size_t>;  // sorted

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Bron-Kerbosch with Tomita pivoting: the pivot maximises |P ∩ N(u)| over P ∪ X.
void bron_kerbosch(const Network& g, VertexSet& r, VertexSet p, VertexSet x, std::size_t min_size,
                   std::vector<Clique>& out) {
    if (p.empty()) {
        if (x.empty() && r.size() >= min_size) {
            VertexSet members = r;
            std::sort(members.begin(), members.end());
            out.push_back({std::move(members), true});
        }
        return;
    }
    std::size_t pivot = p.front();
    std::size_t best = 0;
    bool first = true;
    for (const auto* set : {&p, &x}) {
        for (std::size_t u : *set) {
            const std::size_t score = intersect(p, g.neighbors(u)).size();
            if (first || score > best) {
                pivot = u;
                best = score;
                first = false;
            }
        }
    }
    VertexSet candidates;
    std::set_difference(p.begin(), p.end(), g.neighbors(pivot).begin(), g.neighbors(pivot).end(),
                        std::back_inserter(candidates));
    for (std::size_t v : candidates) {
        r.push_back(v);
        bron_kerbosch(g, r, intersect(p, g.neighbors(v)), intersect(x, g.neighbors(v)), min_size, out);
        r.pop_back();
        p.erase(std::lower_bound(p.begin(), p.end(), v));
        x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
}

bool extends(const Network& g, const VertexSet& members) {
    VertexSet common = g.neighbors(members.front());
    for (std::size_t k = 1; k < members.size() && !common.empty(); ++k) {
        common = intersect(common, g.neighbors(members[k]));
    }
    return !common.empty();
}

void grow(const Network& g, VertexSet& current, const VertexSet& candidates, std::size_t size,
          std::vector<Clique>& out) {
    if (current.size() == size) {
        out.push_back({current, !extends(g, current)});
        return;
    }
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const std::size_t v = candidates[k];
        if (current.size() + (candidates.size() - k) < size) break;
        VertexSet next;
        for (std::size_t j = k + 1; j < candidates.size(); ++j) {
            if (g.has_edge(v, candidates[j])) next.push_back(candidates[j]);
        }
        current.push_back(v);
        grow(g, current, next, size, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<Clique> maximal_cliques(const Network& network, std::size_t min_size) {
    std::vector<Clique> out;
    VertexSet r, p(network.vertex_count()), x;
    for (std::size_t v = 0; v < p.size(); ++v) p[v] = v;
    bron_kerbosch(network, r, std::move(p), std::move(x), std::max<std::size_t>(min_size, 1), out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Clique> enumerate_m_cliques(const Network& network, std::size_t size) {
    if (size < 2) throw ValidationError("clique size must be at least 2");
    std::vector<Clique> out;
    VertexSet current;
    for (std::size_t v = 0; v < network.vertex_count(); ++v) {
        VertexSet later;
        for (std::size_t u : network.neighbors(v)) {
            if (u > v) later.push_back(u);
        }
        current.push_back(v);
        grow(network, current, later, size, out);
        current.pop_back();
    }
    return out;
}

void write_edge_list(const std::filesystem::path& path, const Network& network) {
    auto out = csv::open_output(path);
    out << "u,v,weight\n";
    for (const auto& e : network.edges()) out << e.u << ',' << e.v << ',' << csv::format(e.weight) << '\n';
}

void write_vertex_table(const std::filesystem::path& path, const Network& network) {
    auto out = csv::open_output(path);
    out << "index,stock,sector\n";
    for (std::size_t v = 0; v < network.vertex_count(); ++v) {
        out << v << ',' << csv::escape(network.stocks()[v]) << ','
            << (network.sectors().empty() ? std::string{} : csv::escape(network.sectors()[v])) << '\n';
    }
}

Network load_network(const std::filesystem::path& edge_path, const std::filesystem::path& vertex_path) {
    std::vector<std::string> fields;
    std::vector<std::string> stocks, sectors;
    {
        csv::Reader reader(vertex_path);
        if (!reader.next(fields)) throw ParseError(reader.source(), 1, "empty file");
        while (reader.next(fields)) {
            if (fields.size() != 3) throw ParseError(reader.source(), reader.line(), "expected index,stock,sector");
            if (fields[0] != std::to_string(stocks.size())) {
                throw ParseError(reader.source(), reader.line(), "vertex indices must be 0..n-1 in order");
            }
            stocks.push_back(fields[1]);
            sectors.push_back(fields[2]);
        }
    }
    Network net(stocks);
    if (std::all_of(sectors.begin(), sectors.end(), [](const auto& s) { return !s.empty(); })) {
        net.set_sectors(std::move(sectors));
    }
    csv::Reader reader(edge_path);
    if (!reader.next(fields)) throw ParseError(reader.source(), 1, "empty file");
    while (reader.next(fields)) {
        if (fields.size() != 3) throw ParseError(reader.source(), reader.line(), "expected u,v,weight");
        const auto u = csv::parse_cell(fields[0], reader.source(), reader.line());
        const auto v = csv::parse_cell(fields[1], reader.source(), reader.line());
        const auto w = csv::parse_cell(fields[2], reader.source(), reader.line());
        if (!u || !v || !w || *u < 0 || *v < 0) throw ParseError(reader.source(), reader.line(), "bad edge row");
        try {
            net.add_edge(static_cast<std::size_t>(*u), static_cast<std::size_t>(*v), *w);
        } catch (const ValidationError& e) {
            throw ParseError(reader.source(), reader.line(), e.what());
        }
    }
    return net;
}

}  // namespace corrnet
