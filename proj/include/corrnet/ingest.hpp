/**
 * @file ingest.hpp
 * @brief Price/sector loading, log-returns and binned probability estimates.
 *
 * Returns are discretised per stock into q bins; marginal and joint
 * frequencies over those bins feed the entropy estimates in infotheory.hpp.
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace corrnet {

/// Closing prices, one row per stock and one column per trading day.
class PriceMatrix {
public:
    PriceMatrix() = default;
    /// Validates: n >= 2, m >= 3, rectangular, every price finite and > 0.
    PriceMatrix(std::vector<std::string> stocks, std::vector<std::string> days,
                std::vector<std::vector<double>> prices);

    std::size_t stock_count() const noexcept { return stocks_.size(); }
    std::size_t day_count() const noexcept { return days_.size(); }
    const std::vector<std::string>& stocks() const noexcept { return stocks_; }
    const std::vector<std::string>& days() const noexcept { return days_; }
    std::span<const double> series(std::size_t stock) const { return prices_.at(stock); }
    double at(std::size_t stock, std::size_t day) const { return prices_.at(stock).at(day); }

    bool operator==(const PriceMatrix&) const = default;

private:
    std::vector<std::string> stocks_;
    std::vector<std::string> days_;
    std::vector<std::vector<double>> prices_;
};

/// Log-returns; each row has exactly day_count - 1 entries.
struct ReturnMatrix {
    std::vector<std::string> stocks;
    std::vector<std::vector<double>> returns;

    std::size_t stock_count() const noexcept { return stocks.size(); }
    std::size_t length() const noexcept { return returns.empty() ? 0 : returns.front().size(); }
};

enum class PriceFormat { Wide, Long };
enum class Binning { Quantile, Width };

PriceFormat parse_price_format(const std::string& name);
Binning parse_binning(const std::string& name);
std::string to_string(Binning binning);

struct LoadedPrices {
    PriceMatrix prices;
    /// Stocks removed because at least one day had no price.
    std::vector<std::string> dropped;
};

/// Reads a wide (`day,S1,S2,...`) or long (`day,stock,close`) CSV.
/// Stocks with a gap are dropped and listed in `dropped`; a warning goes to stderr.
LoadedPrices load_price_table(const std::filesystem::path& path, PriceFormat format);

/// Stock -> economic sector benchmark.
class SectorTable {
public:
    SectorTable() = default;
    explicit SectorTable(std::map<std::string, std::string> sectors);

    /// Throws ValidationError if the stock has no sector.
    const std::string& sector_of(const std::string& stock) const;
    bool contains(const std::string& stock) const { return sectors_.count(stock) != 0; }
    std::size_t size() const noexcept { return sectors_.size(); }
    bool empty() const noexcept { return sectors_.empty(); }
    const std::map<std::string, std::string>& entries() const noexcept { return sectors_; }

    /// Sector of each listed stock, in order. Throws if any is missing.
    std::vector<std::string> sectors_for(std::span<const std::string> stocks) const;

private:
    std::map<std::string, std::string> sectors_;
};

/// Reads a `stock,sector` CSV.
SectorTable load_sector_table(const std::filesystem::path& path);

void write_price_table(const std::filesystem::path& path, const PriceMatrix& prices);
void write_sector_table(const std::filesystem::path& path, const SectorTable& sectors);

/// R_it = ln(P_it / P_i,t-1) for t = 1..m-1.
ReturnMatrix log_returns(const PriceMatrix& prices);

struct BinAssignment {
    std::size_t q = 0;
    std::vector<std::size_t> labels;  ///< bin of each observation, in time order
    std::vector<std::size_t> counts;  ///< frequency of each bin
};

/// Equal-frequency bins: sort ascending (stable in time), cut into q groups
/// whose sizes differ by at most one, larger groups first.
BinAssignment bin_series(std::span<const double> series, std::size_t q,
                         Binning binning = Binning::Quantile);

struct Distribution {
    std::vector<double> p;
};

/// q x q joint probabilities, row-major (p[a * q + b]).
struct JointDistribution {
    std::size_t q = 0;
    std::vector<double> p;

    double operator()(std::size_t a, std::size_t b) const { return p[a * q + b]; }
};

Distribution marginal_distribution(const BinAssignment& bins);
JointDistribution joint_histogram(const BinAssignment& a, const BinAssignment& b);

}  // namespace corrnet
