#include "daen/records.hpp"

#include "daen/errors.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace daen {

DayType day_type_of(const Date& date) {
    const std::chrono::weekday wd{std::chrono::sys_days{date}};
    // iso_encoding: Monday = 1 ... Sunday = 7
    return static_cast<DayType>(wd.iso_encoding() - 1);
}

std::string_view to_string(DayType d) noexcept {
    switch (d) {
        case DayType::monday: return "Monday";
        case DayType::tuesday: return "Tuesday";
        case DayType::wednesday: return "Wednesday";
        case DayType::thursday: return "Thursday";
        case DayType::friday: return "Friday";
        case DayType::saturday: return "Saturday";
        case DayType::sunday: return "Sunday";
    }
    return "?";
}

namespace {

int parse_fixed(std::string_view s, std::string_view whole) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("invalid date '" + std::string(whole) + "'");
    return value;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw std::invalid_argument("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    const int y = parse_fixed(text.substr(0, 4), text);
    const int m = parse_fixed(text.substr(5, 2), text);
    const int d = parse_fixed(text.substr(8, 2), text);
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

Date add_days(const Date& date, long days) {
    return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

long days_between(const Date& a, const Date& b) {
    return static_cast<long>((std::chrono::sys_days{b} - std::chrono::sys_days{a}).count());
}

double DailyRecord::hourly_load(std::size_t hour) const {
    if (hour < 1 || hour > kHoursPerDay)
        throw ContractViolation("hour must be in 1..24, got " + std::to_string(hour));
    if (loads.size() != kHalfHoursPerDay)
        throw DataError("record " + format_date(date) + " has " + std::to_string(loads.size()) +
                        " half-hour loads, expected 48");
    // slot 0 is 00:30, slot 1 is 01:00, ..., slot 47 is 24:00
    return loads[2 * hour - 1];
}

bool DateRange::contains(const Date& d) const {
    return std::chrono::sys_days{first} <= std::chrono::sys_days{d} &&
           std::chrono::sys_days{d} <= std::chrono::sys_days{last};
}

bool DateRange::overlaps(const DateRange& other) const {
    return contains(other.first) || contains(other.last) || other.contains(first);
}

}  // namespace daen
