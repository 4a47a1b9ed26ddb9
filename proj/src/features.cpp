#include "daen/features.hpp"

#include "daen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <string>

namespace daen {

void NormParams::validate() const {
    if (!std::isfinite(l_min) || !std::isfinite(l_max))
        throw DataError("normalization range is not finite");
    if (!(l_max > l_min))
        throw DataError("degenerate normalization range: l_min = " + std::to_string(l_min) +
                        ", l_max = " + std::to_string(l_max));
}

NormParams NormParams::from_loads(std::span<const double> loads) {
    if (loads.empty()) throw DataError("cannot derive normalization range from no loads");
    const auto [lo, hi] = std::minmax_element(loads.begin(), loads.end());
    NormParams np{*lo, *hi};
    np.validate();
    return np;
}

namespace {

std::mutex warn_mutex;

void warn_clamped(double load, const NormParams& np) {
    const std::lock_guard lock(warn_mutex);
    std::cerr << "warning: load " << load << " MW outside training range [" << np.l_min << ", "
              << np.l_max << "], clamped\n";
}

}  // namespace

double normalize_load(double load, const NormParams& np) {
    np.validate();
    const double v = (load - np.l_min) / (np.l_max - np.l_min);
    if (v < 0.0 || v > 1.0) {
        warn_clamped(load, np);
        return std::clamp(v, 0.0, 1.0);
    }
    return v;
}

double denormalize_load(double normalized, const NormParams& np) {
    np.validate();
    return np.l_min + normalized * (np.l_max - np.l_min);
}

TemperatureMemberships temperature_memberships(double t) {
    if (!std::isfinite(t)) throw std::domain_error("temperature must be finite");
    TemperatureMemberships p;

    if (t <= -5.0)
        p.low = 1.0;
    else if (t <= 10.0)
        p.low = (10.0 - t) / 15.0;

    if (t > 0.0 && t <= 10.0)
        p.medium = t / 10.0;
    else if (t > 10.0 && t < 20.0)
        p.medium = (20.0 - t) / 10.0;

    // The closed middle branch owns t = 15 (value 0.25), so the high
    // membership jumps there.
    if (t >= 30.0)
        p.high = 1.0;
    else if (t >= 15.0)
        p.high = (t - 10.0) / 20.0;
    return p;
}

double fuzzify_temperature(double t, TemperatureMode mode) {
    const auto p = temperature_memberships(t);
    const double total = p.low + p.medium + p.high;
    if (!(total > 0.0))
        throw std::logic_error("temperature memberships vanish at t = " + std::to_string(t));
    if (mode == TemperatureMode::argmax) {
        if (p.low >= p.medium && p.low >= p.high) return 0.0;
        if (p.medium >= p.high) return 0.25;
        return 0.5;
    }
    return (0.25 * p.medium + 0.5 * p.high) / total;
}

std::array<double, 7> encode_day_type(DayType d) noexcept {
    std::array<double, 7> slots{};
    slots[6 - static_cast<std::size_t>(d)] = 0.5;
    return slots;
}

FeatureVector assemble_features(const DailyRecord& rec, const NormParams& np,
                                TemperatureMode mode) {
    if (rec.loads.size() != kHalfHoursPerDay)
        throw DataError("incomplete record for " + format_date(rec.date) + ": " +
                        std::to_string(rec.loads.size()) + " of 48 half-hour loads");
    for (std::size_t i = 0; i < rec.loads.size(); ++i) {
        if (!std::isfinite(rec.loads[i]))
            throw DataError("incomplete record for " + format_date(rec.date) +
                            ": missing half-hour reading " + std::to_string(i + 1));
    }

    FeatureVector f(kFeatureCount, 0.0);
    for (std::size_t i = 0; i < kHalfHoursPerDay; ++i) f[i] = normalize_load(rec.loads[i], np);
    f[kTemperatureSlot] = fuzzify_temperature(rec.avg_temp, mode);
    const auto day = encode_day_type(rec.day_type);
    std::copy(day.begin(), day.end(), f.begin() + kDayTypeSlot);
    f[kHolidaySlot] = encode_holiday(rec.holiday);
    return f;
}

}  // namespace daen
