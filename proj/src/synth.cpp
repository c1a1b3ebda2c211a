#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "corrnet/error.hpp"
#include "corrnet/experiments.hpp"

namespace corrnet {

SyntheticMarket synth_market(const SynthParams& params) {
    if (params.sectors < 2 || params.stocks < params.sectors) {
        throw ValidationError("synth: need stocks >= sectors >= 2");
    }
    // intra = 0 is allowed as the no-sector-structure baseline.
    if (params.inter < 0.0 || !(params.intra > params.inter || params.intra == 0.0)) {
        throw ValidationError("synth: need intra > inter >= 0");
    }
    if (params.days < 3) throw ValidationError("synth: need at least 3 days");

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const std::size_t n = params.stocks;
    const std::size_t m = params.days;
    std::vector<std::string> stocks, days;
    std::map<std::string, std::string> sector_of;
    std::vector<std::size_t> block(n);
    char name[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(name, sizeof name, "S%03zu", i + 1);
        stocks.emplace_back(name);
        block[i] = i * params.sectors / n;
        std::snprintf(name, sizeof name, "Sector%02zu", block[i] + 1);
        sector_of.emplace(stocks.back(), name);
    }
    for (std::size_t t = 0; t < m; ++t) {
        std::snprintf(name, sizeof name, "D%05zu", t + 1);
        days.emplace_back(name);
    }

    std::vector<std::vector<double>> prices(n, std::vector<double>(m, 100.0));
    std::vector<double> factor(params.sectors);
    for (std::size_t t = 1; t < m; ++t) {
        const double market = normal(rng);
        for (auto& f : factor) f = normal(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double r =
                params.volatility * (params.intra * factor[block[i]] + params.inter * market + normal(rng));
            prices[i][t] = prices[i][t - 1] * std::exp(r);
        }
    }
    return {PriceMatrix(std::move(stocks), std::move(days), std::move(prices)), SectorTable(std::move(sector_of))};
}

}  // namespace corrnet
