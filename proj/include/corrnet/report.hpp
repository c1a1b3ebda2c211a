#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "corrnet/clustering.hpp"

namespace corrnet {

/// One metric with the counts it was derived from (e.g. 47 of 87 cliques).
struct MetricRecord {
    std::string metric;
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    nlohmann::json params = nlohmann::json::object();

    nlohmann::json to_json() const;
};

/// Result of one sampled run. Values keep their insertion order.
struct RunRecord {
    std::string group;
    std::size_t sample = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> values;

    void set(const std::string& metric, double value) { values.emplace_back(metric, value); }
    const double* find(const std::string& metric) const;
};

struct Aggregate {
    std::string group;
    std::string metric;
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< population variance
};

/// Plot-ready (x, y) points.
struct Series {
    std::string name;
    std::string x_label = "x";
    std::string y_label = "y";
    std::vector<std::pair<double, double>> points;
};

/// A value published for a dataset that is not available here. Reported
/// alongside results for orientation; never asserted.
struct ReferenceValue {
    std::string quantity;
    double value = 0.0;
    std::string note;
};

struct NamedPartition {
    std::string name;
    std::vector<std::string> stocks;
    Partition partition;
};

struct ExperimentReport {
    std::string name;
    nlohmann::json params = nlohmann::json::object();
    std::vector<RunRecord> records;
    std::vector<Aggregate> aggregates;
    std::vector<Series> figures;
    std::vector<ReferenceValue> reference;
    std::vector<MetricRecord> metrics;
    std::vector<NamedPartition> partitions;
    nlohmann::json extra = nlohmann::json::object();

    /// Rebuilds `aggregates` from `records`: groups and metrics in first-seen
    /// order, sums taken in record order.
    void aggregate();
    const Aggregate* find_aggregate(const std::string& group, const std::string& metric) const;
    Series& series(const std::string& name, const std::string& x_label, const std::string& y_label);

    nlohmann::json to_json() const;
};

/// Sequential sum / count.
double mean_of(std::span<const double> values);
/// Two-pass population variance.
double variance_of(std::span<const double> values);

/// Writes `<dir>/<prefix><series>.csv` with an `x,y` header for every figure series.
void write_figures(const std::filesystem::path& dir, const ExperimentReport& report);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace corrnet
