#include "corrnet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "corrnet/error.hpp"
#include "csv.hpp"

namespace corrnet {

PriceMatrix::PriceMatrix(std::vector<std::string> stocks, std::vector<std::string> days,
                         std::vector<std::vector<double>> prices)
    : stocks_(std::move(stocks)), days_(std::move(days)), prices_(std::move(prices)) {
    if (stocks_.size() < 2) throw ValidationError("insufficient data: need at least 2 stocks");
    if (days_.size() < 3) throw ValidationError("insufficient data: need at least 3 trading days");
    if (prices_.size() != stocks_.size()) throw ValidationError("price rows do not match stock list");
    for (std::size_t i = 0; i < stocks_.size(); ++i) {
        if (prices_[i].size() != days_.size()) {
            throw ValidationError("stock " + stocks_[i] + " has a missing trading day");
        }
        for (std::size_t t = 0; t < days_.size(); ++t) {
            const double p = prices_[i][t];
            if (!std::isfinite(p) || p <= 0.0) {
                throw ValidationError("non-positive price for stock " + stocks_[i] + " on day " +
                                      days_[t]);
            }
        }
    }
}

PriceFormat parse_price_format(const std::string& name) {
    if (name == "wide") return PriceFormat::Wide;
    if (name == "long") return PriceFormat::Long;
    throw ValidationError("unknown price format '" + name + "' (expected wide|long)");
}

Binning parse_binning(const std::string& name) {
    if (name == "quantile") return Binning::Quantile;
    if (name == "width") return Binning::Width;
    throw ValidationError("unknown binning '" + name + "' (expected quantile|width)");
}

std::string to_string(Binning binning) {
    return binning == Binning::Quantile ? "quantile" : "width";
}

namespace {

// Cells indexed [stock][day]; nullopt marks a gap.
using Grid = std::vector<std::vector<std::optional<double>>>;

void check_positive(const Grid& grid, const std::vector<std::string>& stocks,
                    const std::vector<std::string>& days) {
    for (std::size_t i = 0; i < stocks.size(); ++i) {
        for (std::size_t t = 0; t < days.size(); ++t) {
            const auto& cell = grid[i][t];
            if (cell && (!std::isfinite(*cell) || *cell <= 0.0)) {
                throw ValidationError("non-positive price for stock " + stocks[i] + " on day " +
                                      days[t]);
            }
        }
    }
}

LoadedPrices finish(Grid grid, std::vector<std::string> stocks, std::vector<std::string> days) {
    check_positive(grid, stocks, days);
    LoadedPrices out;
    std::vector<std::string> kept;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < stocks.size(); ++i) {
        const bool complete = std::all_of(grid[i].begin(), grid[i].end(),
                                          [](const auto& c) { return c.has_value(); });
        if (!complete) {
            out.dropped.push_back(stocks[i]);
            continue;
        }
        std::vector<double> row;
        row.reserve(days.size());
        for (const auto& c : grid[i]) row.push_back(*c);
        kept.push_back(stocks[i]);
        rows.push_back(std::move(row));
    }
    for (const auto& s : out.dropped) {
        std::cerr << "warning: dropping stock " << s << " (missing trading days)\n";
    }
    if (kept.size() < 2) {
        throw ValidationError("insufficient data: fewer than 2 stocks traded on every day");
    }
    out.prices = PriceMatrix(std::move(kept), std::move(days), std::move(rows));
    return out;
}

LoadedPrices load_wide(const std::filesystem::path& path) {
    csv::Reader reader(path);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw ParseError(reader.source(), 1, "empty file");
    if (fields.size() < 2) throw ParseError(reader.source(), reader.line(), "header needs day plus stock columns");
    std::vector<std::string> stocks(fields.begin() + 1, fields.end());
    {
        auto sorted = stocks;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ParseError(reader.source(), reader.line(), "duplicate stock column");
        }
    }
    std::vector<std::string> days;
    Grid grid(stocks.size());
    while (reader.next(fields)) {
        if (fields.size() > stocks.size() + 1) {
            throw ParseError(reader.source(), reader.line(), "too many columns");
        }
        if (fields[0].empty()) throw ParseError(reader.source(), reader.line(), "missing day label");
        days.push_back(fields[0]);
        for (std::size_t i = 0; i < stocks.size(); ++i) {
            const std::string_view cell = i + 1 < fields.size() ? std::string_view(fields[i + 1]) : "";
            grid[i].push_back(csv::parse_cell(cell, reader.source(), reader.line()));
        }
    }
    return finish(std::move(grid), std::move(stocks), std::move(days));
}

LoadedPrices load_long(const std::filesystem::path& path) {
    csv::Reader reader(path);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw ParseError(reader.source(), 1, "empty file");
    if (fields.size() != 3) throw ParseError(reader.source(), reader.line(), "header must be day,stock,close");

    std::vector<std::string> days, stocks;
    std::unordered_map<std::string, std::size_t> day_index, stock_index;
    struct Cell { std::size_t day, stock; double price; std::size_t line; };
    std::vector<Cell> cells;
    while (reader.next(fields)) {
        if (fields.size() != 3) throw ParseError(reader.source(), reader.line(), "expected 3 columns");
        if (fields[0].empty() || fields[1].empty()) {
            throw ParseError(reader.source(), reader.line(), "missing day or stock");
        }
        auto price = csv::parse_cell(fields[2], reader.source(), reader.line());
        auto [d, new_day] = day_index.try_emplace(fields[0], days.size());
        if (new_day) days.push_back(fields[0]);
        auto [s, new_stock] = stock_index.try_emplace(fields[1], stocks.size());
        if (new_stock) stocks.push_back(fields[1]);
        if (price) cells.push_back({d->second, s->second, *price, reader.line()});
    }
    Grid grid(stocks.size(), std::vector<std::optional<double>>(days.size()));
    for (const auto& c : cells) {
        if (grid[c.stock][c.day]) throw ParseError(reader.source(), c.line, "duplicate day/stock row");
        grid[c.stock][c.day] = c.price;
    }
    return finish(std::move(grid), std::move(stocks), std::move(days));
}

}  // namespace

LoadedPrices load_price_table(const std::filesystem::path& path, PriceFormat format) {
    return format == PriceFormat::Wide ? load_wide(path) : load_long(path);
}

SectorTable::SectorTable(std::map<std::string, std::string> sectors) : sectors_(std::move(sectors)) {}

const std::string& SectorTable::sector_of(const std::string& stock) const {
    auto it = sectors_.find(stock);
    if (it == sectors_.end()) throw ValidationError("no sector for stock " + stock);
    return it->second;
}

std::vector<std::string> SectorTable::sectors_for(std::span<const std::string> stocks) const {
    std::vector<std::string> out;
    out.reserve(stocks.size());
    for (const auto& s : stocks) out.push_back(sector_of(s));
    return out;
}

SectorTable load_sector_table(const std::filesystem::path& path) {
    csv::Reader reader(path);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw ParseError(reader.source(), 1, "empty file");
    if (fields.size() != 2) throw ParseError(reader.source(), reader.line(), "header must be stock,sector");
    std::map<std::string, std::string> table;
    while (reader.next(fields)) {
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            throw ParseError(reader.source(), reader.line(), "expected stock,sector");
        }
        if (!table.emplace(fields[0], fields[1]).second) {
            throw ParseError(reader.source(), reader.line(), "stock listed twice: " + fields[0]);
        }
    }
    return SectorTable(std::move(table));
}

void write_price_table(const std::filesystem::path& path, const PriceMatrix& prices) {
    auto out = csv::open_output(path);
    out << "day";
    for (const auto& s : prices.stocks()) out << ',' << csv::escape(s);
    out << '\n';
    for (std::size_t t = 0; t < prices.day_count(); ++t) {
        out << csv::escape(prices.days()[t]);
        for (std::size_t i = 0; i < prices.stock_count(); ++i) out << ',' << csv::format(prices.at(i, t));
        out << '\n';
    }
}

void write_sector_table(const std::filesystem::path& path, const SectorTable& sectors) {
    auto out = csv::open_output(path);
    out << "stock,sector\n";
    for (const auto& [stock, sector] : sectors.entries()) {
        out << csv::escape(stock) << ',' << csv::escape(sector) << '\n';
    }
}

ReturnMatrix log_returns(const PriceMatrix& prices) {
    ReturnMatrix out;
    out.stocks = prices.stocks();
    out.returns.resize(prices.stock_count());
    for (std::size_t i = 0; i < prices.stock_count(); ++i) {
        const auto p = prices.series(i);
        auto& r = out.returns[i];
        r.reserve(p.size() - 1);
        for (std::size_t t = 1; t < p.size(); ++t) r.push_back(std::log(p[t] / p[t - 1]));
    }
    return out;
}

BinAssignment bin_series(std::span<const double> series, std::size_t q, Binning binning) {
    if (q < 2) throw ValidationError("bin count q must be at least 2");
    const std::size_t len = series.size();
    if (len < q) throw ValidationError("too few observations for q bins");

    BinAssignment out;
    out.q = q;
    out.labels.assign(len, 0);
    out.counts.assign(q, 0);

    if (binning == Binning::Quantile) {
        std::vector<std::size_t> order(len);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return series[a] < series[b]; });
        const std::size_t base = len / q;
        const std::size_t extra = len % q;
        std::size_t pos = 0;
        for (std::size_t bin = 0; bin < q; ++bin) {
            const std::size_t size = base + (bin < extra ? 1 : 0);
            for (std::size_t k = 0; k < size; ++k) out.labels[order[pos++]] = bin;
            out.counts[bin] = size;
        }
        return out;
    }

    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    const double span = *hi - *lo;
    for (std::size_t t = 0; t < len; ++t) {
        std::size_t bin = 0;
        if (span > 0.0) {
            const double x = (series[t] - *lo) / span * static_cast<double>(q);
            bin = std::min(q - 1, static_cast<std::size_t>(x));
        }
        out.labels[t] = bin;
        ++out.counts[bin];
    }
    return out;
}

Distribution marginal_distribution(const BinAssignment& bins) {
    const std::size_t total = std::accumulate(bins.counts.begin(), bins.counts.end(), std::size_t{0});
    Distribution d;
    d.p.reserve(bins.counts.size());
    for (std::size_t c : bins.counts) {
        d.p.push_back(total == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(total));
    }
    return d;
}

JointDistribution joint_histogram(const BinAssignment& a, const BinAssignment& b) {
    if (a.q != b.q) throw ValidationError("joint histogram: bin counts differ");
    if (a.labels.size() != b.labels.size()) throw ValidationError("joint histogram: series lengths differ");
    const std::size_t q = a.q;
    std::vector<std::size_t> counts(q * q, 0);
    for (std::size_t t = 0; t < a.labels.size(); ++t) ++counts[a.labels[t] * q + b.labels[t]];
    JointDistribution out;
    out.q = q;
    out.p.resize(q * q);
    const double total = static_cast<double>(a.labels.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        out.p[k] = total == 0.0 ? 0.0 : static_cast<double>(counts[k]) / total;
    }
    return out;
}

}  // namespace corrnet
