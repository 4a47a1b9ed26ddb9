#pragma once

#include "daen/numkit.hpp"
#include "daen/records.hpp"

#include <array>
#include <cstddef>
#include <span>

namespace daen {

// Model input layout: slots 0..47 normalized half-hour loads, 48 fuzzy
// temperature, 49..55 weekday one-hot, 56 holiday.
inline constexpr std::size_t kFeatureCount = 57;
inline constexpr std::size_t kTemperatureSlot = 48;
inline constexpr std::size_t kDayTypeSlot = 49;
inline constexpr std::size_t kHolidaySlot = 56;

using FeatureVector = Vector;

// Min/max load of the training days, used for min-max scaling.
struct NormParams {
    double l_min = 0.0;
    double l_max = 1.0;

    // Throws DataError when the range is degenerate or non-finite.
    void validate() const;
    static NormParams from_loads(std::span<const double> loads);

    friend bool operator==(const NormParams&, const NormParams&) = default;
};

// (l - l_min) / (l_max - l_min), clamped to [0,1] with a warning on stderr
// when l lies outside the training range.
double normalize_load(double load, const NormParams& np);
double denormalize_load(double normalized, const NormParams& np);

enum class TemperatureMode {
    weighted,  // membership-weighted mean of {0, 0.25, 0.5}
    argmax,    // level of the strongest membership, ties to the lower level
};

struct TemperatureMemberships {
    double low = 0.0;
    double medium = 0.0;
    double high = 0.0;
};

TemperatureMemberships temperature_memberships(double celsius);
double fuzzify_temperature(double celsius, TemperatureMode mode = TemperatureMode::weighted);

// Weighted one-hot: Monday sets the last slot, Sunday the first, weight 0.5.
std::array<double, 7> encode_day_type(DayType d) noexcept;

inline double encode_holiday(bool holiday) noexcept { return holiday ? 0.5 : 0.0; }
inline bool decode_holiday(double slot) noexcept { return slot >= 0.25; }

// Builds the 57-slot input for one historical day. Throws DataError naming
// the date when the record does not hold 48 finite loads.
FeatureVector assemble_features(const DailyRecord& rec, const NormParams& np,
                                TemperatureMode mode = TemperatureMode::weighted);

}  // namespace daen
