#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace daen {

using Date = std::chrono::year_month_day;

inline constexpr std::size_t kHalfHoursPerDay = 48;
inline constexpr std::size_t kHoursPerDay = 24;

enum class DayType { monday, tuesday, wednesday, thursday, friday, saturday, sunday };

DayType day_type_of(const Date& date);
std::string_view to_string(DayType d) noexcept;

// Strict YYYY-MM-DD; throws std::invalid_argument otherwise.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);
Date add_days(const Date& date, long days);
// b - a in whole days.
long days_between(const Date& a, const Date& b);

// One calendar day: 48 half-hourly loads (00:30 ... 24:00) in MW, the daily
// mean temperature in degrees C, its weekday and a holiday flag.
struct DailyRecord {
    Date date;
    std::vector<double> loads;
    double avg_temp = 0.0;
    DayType day_type = DayType::monday;
    bool holiday = false;

    // Load at hour h in 1..24, i.e. the half-hour slot ending at h:00.
    double hourly_load(std::size_t hour) const;
};

// Inclusive calendar range.
struct DateRange {
    Date first;
    Date last;

    bool contains(const Date& d) const;
    bool overlaps(const DateRange& other) const;
};

}  // namespace daen
