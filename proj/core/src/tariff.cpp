#include "pshave/tariff.hpp"

#include <cmath>

#include "pshave/error.hpp"

namespace pshave {

double Tariff::band_price(PriceBand band) const {
    switch (band) {
        case PriceBand::kPeak: return peak;
        case PriceBand::kNormal: return normal;
        case PriceBand::kValley: return valley;
    }
    return normal;
}

double Tariff::price_at_hour(double hour) const {
    double h = std::fmod(hour, 24.0);
    if (h < 0.0) h += 24.0;
    const auto idx = static_cast<std::size_t>(std::floor(h + 1e-9)) % 24;
    return band_price(hour_band[idx]);
}

void validate(const Tariff& tariff) {
    if (tariff.peak < 0.0 || tariff.normal < 0.0 || tariff.valley < 0.0 ||
        tariff.peak_capacity_price < 0.0 || tariff.om_cost < 0.0) {
        throw Error(ErrorCode::kValidation, "tariff prices must be non-negative");
    }
    if (!(tariff.peak > tariff.valley)) {
        throw Error(ErrorCode::kValidation, "tariff peak price must exceed the valley price");
    }
    if (!(tariff.days_per_month > 0.0)) {
        throw Error(ErrorCode::kValidation, "tariff days_per_month must be positive");
    }
}

}  // namespace pshave
