#pragma once

#include <array>
#include <cstddef>

namespace pshave {

enum class PriceBand { kPeak, kNormal, kValley };

/// Jiangsu industrial bands: peak 8-12 and 17-21, normal 12-17 and 21-24,
/// valley 0-8.
constexpr std::array<PriceBand, 24> jiangsu_hour_bands() {
    std::array<PriceBand, 24> bands{};
    for (std::size_t h = 0; h < 24; ++h) {
        if (h < 8) {
            bands[h] = PriceBand::kValley;
        } else if (h < 12 || (h >= 17 && h < 21)) {
            bands[h] = PriceBand::kPeak;
        } else {
            bands[h] = PriceBand::kNormal;
        }
    }
    return bands;
}

/// Time-of-use tariff. Energy prices in $/kWh, peak capacity price in $/kW per
/// month, O&M cost in $/kWh of energy charged or discharged.
struct Tariff {
    double peak = 0.153;
    double normal = 0.092;
    double valley = 0.05;
    std::array<PriceBand, 24> hour_band = jiangsu_hour_bands();
    double peak_capacity_price = 10.0;
    double om_cost = 0.017;
    double days_per_month = 30.0;

    double band_price(PriceBand band) const;
    /// Price of the band covering the given hour of day (wraps modulo 24).
    double price_at_hour(double hour) const;
    /// Peak capacity price prorated to one day, in $/kW.
    double daily_capacity_price() const { return peak_capacity_price / days_per_month; }

    static Tariff jiangsu() { return Tariff{}; }
};

/// Throws pshave::Error(kValidation) on negative prices, peak <= valley or a
/// non-positive days-per-month divisor.
void validate(const Tariff& tariff);

}  // namespace pshave
