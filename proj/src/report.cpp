#include "corrnet/report.hpp"

#include <algorithm>
#include <fstream>

#include "corrnet/error.hpp"
#include "csv.hpp"

namespace corrnet {

nlohmann::json MetricRecord::to_json() const {
    return {{"metric", metric}, {"value", value}, {"numerator", numerator}, {"denominator", denominator},
            {"params", params}};
}

const double* RunRecord::find(const std::string& metric) const {
    for (const auto& [name, value] : values) {
        if (name == metric) return &value;
    }
    return nullptr;
}

double mean_of(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double variance_of(std::span<const double> values) {
    if (values.empty()) return 0.0;
    const double mean = mean_of(values);
    double sum = 0.0;
    for (double v : values) sum += (v - mean) * (v - mean);
    return sum / static_cast<double>(values.size());
}

void ExperimentReport::aggregate() {
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& r : records) {
        for (const auto& [metric, value] : r.values) {
            std::pair<std::string, std::string> key{r.group, metric};
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(std::move(key));
        }
    }
    aggregates.clear();
    for (const auto& [group, metric] : keys) {
        std::vector<double> values;
        for (const auto& r : records) {
            if (r.group != group) continue;
            if (const double* v = r.find(metric)) values.push_back(*v);
        }
        aggregates.push_back({group, metric, values.size(), mean_of(values), variance_of(values)});
    }
}

const Aggregate* ExperimentReport::find_aggregate(const std::string& group, const std::string& metric) const {
    for (const auto& a : aggregates) {
        if (a.group == group && a.metric == metric) return &a;
    }
    return nullptr;
}

Series& ExperimentReport::series(const std::string& series_name, const std::string& x_label,
                                 const std::string& y_label) {
    for (auto& s : figures) {
        if (s.name == series_name) return s;
    }
    figures.push_back({series_name, x_label, y_label, {}});
    return figures.back();
}

nlohmann::json ExperimentReport::to_json() const {
    using nlohmann::json;
    json out = json::object();
    out["experiment"] = name;
    out["params"] = params;
    json recs = json::array();
    for (const auto& r : records) {
        json values = json::object();
        for (const auto& [metric, value] : r.values) values[metric] = value;
        recs.push_back({{"group", r.group}, {"sample", r.sample}, {"seed", r.seed}, {"values", values}});
    }
    out["records"] = recs;
    json aggs = json::array();
    for (const auto& a : aggregates) {
        aggs.push_back({{"group", a.group}, {"metric", a.metric}, {"count", a.count}, {"mean", a.mean},
                        {"variance", a.variance}});
    }
    out["aggregates"] = aggs;
    json metric_list = json::array();
    for (const auto& m : metrics) metric_list.push_back(m.to_json());
    out["metrics"] = metric_list;
    json refs = json::array();
    for (const auto& r : reference) refs.push_back({{"quantity", r.quantity}, {"value", r.value}, {"note", r.note}});
    out["reference"] = refs;
    json figs = json::array();
    for (const auto& s : figures) figs.push_back({{"series", s.name}, {"x", s.x_label}, {"y", s.y_label}, {"points", s.points.size()}});
    out["figures"] = figs;
    out["extra"] = extra;
    return out;
}

void write_figures(const std::filesystem::path& dir, const ExperimentReport& report) {
    for (const auto& s : report.figures) {
        auto out = csv::open_output(dir / (report.name + "_" + s.name + ".csv"));
        out << "x,y\n";
        for (const auto& [x, y] : s.points) out << csv::format(x) << ',' << csv::format(y) << '\n';
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
    auto out = csv::open_output(path);
    out << value.dump(2) << '\n';
}

}  // namespace corrnet
