#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "corrnet/ingest.hpp"

namespace corrnet {

/// Parameters shared by every study. Loaded from `key = value` files
/// (`#` starts a comment; lists are comma separated; fractions like 2/3 are accepted).
struct ExperimentConfig {
    std::filesystem::path input;
    std::filesystem::path sectors;
    std::filesystem::path out = "out";
    PriceFormat format = PriceFormat::Wide;

    std::size_t q = 20;
    Binning binning = Binning::Quantile;
    /// "3n-6" or a fixed edge count for the PD network.
    std::string edges = "3n-6";

    std::vector<double> proportions{4.0 / 5.0, 3.0 / 4.0, 2.0 / 3.0, 1.0 / 2.0};
    std::size_t samples = 10;
    std::size_t louvain_orders = 100;
    std::vector<double> removal_fractions{0.2, 0.3, 0.4};
    std::size_t removal_samples = 100;
    std::size_t k_min = 4;
    std::size_t k_max = 12;
    /// Upper end of the eigengap scan; 0 means n - 1.
    std::size_t eigengap_k_max = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> studies{"cliques", "louvain", "nsc", "subset_ari", "robustness"};

    /// Throws ValidationError on out-of-range values or unknown studies.
    void validate() const;
    bool study_enabled(const std::string& name) const;
    /// PD edge count M for an n-stock market.
    std::size_t edge_count(std::size_t n) const;
};

/// Applies one `key = value` setting; throws ValidationError for unknown keys.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses "0.5", "2/3" or "1".
double parse_fraction(const std::string& text);

}  // namespace corrnet
