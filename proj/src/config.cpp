#include "corrnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "corrnet/error.hpp"
#include "corrnet/filters.hpp"
#include "csv.hpp"

namespace corrnet {

namespace {

const std::vector<std::string> kStudies{"cliques", "louvain", "nsc", "subset_ari", "robustness"};

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError("config: " + key + " expects a non-negative integer, got '" + text + "'");
    }
    return value;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto& item : csv::split(text)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

double parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    auto number = [&](std::string_view s) {
        s = csv::trim(s);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
            throw ValidationError("config: not a number or fraction: '" + text + "'");
        }
        return v;
    };
    if (slash == std::string::npos) return number(text);
    const double den = number(std::string_view(text).substr(slash + 1));
    if (den == 0.0) throw ValidationError("config: zero denominator in '" + text + "'");
    return number(std::string_view(text).substr(0, slash)) / den;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "input") cfg.input = value;
    else if (key == "sectors") cfg.sectors = value;
    else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = parse_price_format(value);
    else if (key == "q") cfg.q = parse_unsigned(key, value);
    else if (key == "binning") cfg.binning = parse_binning(value);
    else if (key == "edges") cfg.edges = value;
    else if (key == "samples") cfg.samples = parse_unsigned(key, value);
    else if (key == "louvain_orders") cfg.louvain_orders = parse_unsigned(key, value);
    else if (key == "removal_samples") cfg.removal_samples = parse_unsigned(key, value);
    else if (key == "k_min") cfg.k_min = parse_unsigned(key, value);
    else if (key == "k_max") cfg.k_max = parse_unsigned(key, value);
    else if (key == "eigengap_k_max") cfg.eigengap_k_max = parse_unsigned(key, value);
    else if (key == "seed") cfg.seed = parse_unsigned(key, value);
    else if (key == "studies") cfg.studies = split_list(value);
    else if (key == "proportions" || key == "removal_fractions") {
        std::vector<double> values;
        for (const auto& item : split_list(value)) values.push_back(parse_fraction(item));
        (key == "proportions" ? cfg.proportions : cfg.removal_fractions) = std::move(values);
    } else {
        throw ValidationError("config: unknown key '" + key + "'");
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    ExperimentConfig cfg;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto text = csv::trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ParseError(path.string(), line, "expected key = value");
        std::string key(csv::trim(text.substr(0, eq)));
        std::string value(csv::trim(text.substr(eq + 1)));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        try {
            apply_setting(cfg, key, value);
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ParseError(path.string(), line, e.what());
        }
    }
    // Data files named in a config are relative to the config itself.
    const auto base = path.parent_path();
    if (!cfg.input.empty() && cfg.input.is_relative()) cfg.input = base / cfg.input;
    if (!cfg.sectors.empty() && cfg.sectors.is_relative()) cfg.sectors = base / cfg.sectors;
    return cfg;
}

void ExperimentConfig::validate() const {
    if (q < 2) throw ValidationError("config: q must be at least 2");
    if (samples < 1 || louvain_orders < 1 || removal_samples < 1) {
        throw ValidationError("config: sample counts must be at least 1");
    }
    for (double r : proportions) {
        if (!(r > 0.0 && r <= 1.0)) throw ValidationError("config: proportions must lie in (0, 1]");
    }
    for (double f : removal_fractions) {
        if (!(f >= 0.0 && f < 1.0)) throw ValidationError("config: removal fractions must lie in [0, 1)");
    }
    if (k_min < 2 || k_min > k_max) throw ValidationError("config: need 2 <= k_min <= k_max");
    for (const auto& s : studies) {
        if (std::find(kStudies.begin(), kStudies.end(), s) == kStudies.end()) {
            throw ValidationError("config: unknown study '" + s + "'");
        }
    }
    if (edges != "3n-6") parse_unsigned("edges", edges);
}

bool ExperimentConfig::study_enabled(const std::string& name) const {
    return std::find(studies.begin(), studies.end(), name) != studies.end();
}

std::size_t ExperimentConfig::edge_count(std::size_t n) const {
    if (edges == "3n-6") return planar_edge_count(n);
    return parse_unsigned("edges", edges);
}

}  // namespace corrnet
