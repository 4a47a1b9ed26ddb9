#include "daen/dataset.hpp"

#include "daen/errors.hpp"
#include "daen/numkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace daen {

std::string load_column_name(std::size_t slot) {
    const std::size_t minutes = (slot + 1) * 30;
    char buf[24];
    std::snprintf(buf, sizeof buf, "l%02zu%02zu", minutes / 60, minutes % 60);
    return buf;
}

namespace {

using DateKey = std::chrono::sys_days;

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Line-oriented reader that knows its file name and line number.
class CsvFile {
public:
    explicit CsvFile(const std::filesystem::path& path) : path_(path), in_(path) {
        if (!in_) throw DataError("cannot open " + path.string());
    }

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw DataError(path_.string() + ":" + std::to_string(line_no_) + ": " + what);
    }

    Date date(std::string_view text) const {
        try {
            return parse_date(text);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    double number(std::string_view text, std::string_view column) const {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
            fail("column " + std::string(column) + ": invalid number '" + std::string(text) + "'");
        return v;
    }

    void expect_header(std::string_view expected) {
        std::string line;
        if (!next(line)) {
            empty_ = true;
            return;
        }
        if (line != expected) fail("unexpected header '" + line + "', expected '" + std::string(expected) + "'");
    }

    bool empty() const { return empty_; }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::size_t line_no_ = 0;
    bool empty_ = false;
};

std::string loads_header() {
    std::string h = "date";
    for (std::size_t s = 0; s < kHalfHoursPerDay; ++s) h += "," + load_column_name(s);
    return h;
}

}  // namespace

std::vector<DailyRecord> load_records(const std::filesystem::path& loads_path,
                                      const std::filesystem::path& temps_path,
                                      const std::filesystem::path& holidays_path) {
    // Open all three first so a missing covariate file is reported even
    // when the loads file is empty.
    CsvFile loads(loads_path);
    CsvFile temps(temps_path);
    CsvFile holidays(holidays_path);

    std::map<DateKey, double> temperature;
    temps.expect_header("date,avg_temp_c");
    for (std::string line; temps.next(line);) {
        const auto cols = split_commas(line);
        if (cols.size() != 2) temps.fail("expected 2 columns, found " + std::to_string(cols.size()));
        const Date d = temps.date(cols[0]);
        if (!temperature.emplace(DateKey{d}, temps.number(cols[1], "avg_temp_c")).second)
            temps.fail("duplicate date " + format_date(d));
    }

    std::set<DateKey> holiday_dates;
    holidays.expect_header("date");
    for (std::string line; holidays.next(line);) {
        const auto cols = split_commas(line);
        if (cols.size() != 1) holidays.fail("expected 1 column, found " + std::to_string(cols.size()));
        const Date d = holidays.date(cols[0]);
        if (!holiday_dates.insert(DateKey{d}).second)
            holidays.fail("duplicate date " + format_date(d));
    }

    std::map<DateKey, DailyRecord> by_date;
    loads.expect_header(loads_header());
    for (std::string line; loads.next(line);) {
        const auto cols = split_commas(line);
        if (cols.size() != kHalfHoursPerDay + 1)
            loads.fail("expected 49 columns, found " + std::to_string(cols.size()));
        DailyRecord rec;
        rec.date = loads.date(cols[0]);
        rec.loads.resize(kHalfHoursPerDay);
        for (std::size_t s = 0; s < kHalfHoursPerDay; ++s) {
            const std::string name = load_column_name(s);
            rec.loads[s] = loads.number(cols[s + 1], name);
            if (!(rec.loads[s] > 0.0)) loads.fail("column " + name + ": load must be positive");
        }
        const auto t = temperature.find(DateKey{rec.date});
        if (t == temperature.end())
            loads.fail("missing covariate: no temperature for " + format_date(rec.date) + " in " +
                       temps_path.string());
        rec.avg_temp = t->second;
        rec.day_type = day_type_of(rec.date);
        rec.holiday = holiday_dates.contains(DateKey{rec.date});
        const Date d = rec.date;
        if (!by_date.emplace(DateKey{d}, std::move(rec)).second)
            loads.fail("duplicate date " + format_date(d));
    }

    std::vector<DailyRecord> out;
    out.reserve(by_date.size());
    for (auto& [_, rec] : by_date) out.push_back(std::move(rec));
    return out;
}

void write_loads_csv(std::ostream& out, const std::vector<DailyRecord>& records) {
    out << loads_header() << '\n';
    char buf[32];
    for (const auto& r : records) {
        out << format_date(r.date);
        for (double l : r.loads) {
            std::snprintf(buf, sizeof buf, ",%.3f", l);
            out << buf;
        }
        out << '\n';
    }
}

void write_temps_csv(std::ostream& out, const std::vector<DailyRecord>& records) {
    out << "date,avg_temp_c\n";
    char buf[32];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, ",%.2f", r.avg_temp);
        out << format_date(r.date) << buf << '\n';
    }
}

void write_holidays_csv(std::ostream& out, const std::vector<DailyRecord>& records) {
    out << "date\n";
    for (const auto& r : records)
        if (r.holiday) out << format_date(r.date) << '\n';
}

void SplitConfig::validate() const {
    auto check_order = [](const DateRange& r, const char* name) {
        if (DateKey{r.last} < DateKey{r.first})
            throw ConfigError(std::string(name) + " range ends before it starts");
    };
    check_order(pretrain, "pretrain");
    check_order(finetune, "finetune");
    check_order(test, "test");
    if (test.overlaps(finetune))
        throw ConfigError("test range " + format_date(test.first) + ".." + format_date(test.last) +
                          " overlaps the fine-tuning targets");
    if (test.overlaps(pretrain))
        throw ConfigError("test range " + format_date(test.first) + ".." + format_date(test.last) +
                          " overlaps the pretraining range");
    if (lags.empty()) throw ConfigError("lag set is empty");
    for (unsigned k : lags)
        if (k == 0) throw ConfigError("lags must be >= 1");
}

SplitConfig default_split(const std::vector<DailyRecord>& records) {
    if (records.size() < 32)
        throw InsufficientHistory("default split needs at least 32 days of records, have " +
                                  std::to_string(records.size()));
    const Date last = records.back().date;
    SplitConfig cfg;
    cfg.test = {last, last};
    cfg.finetune = {add_days(last, -23), add_days(last, -1)};
    cfg.pretrain = {records.front().date, add_days(last, -31)};
    return cfg;
}

SampleSet split(const std::vector<DailyRecord>& records, const SplitConfig& cfg) {
    cfg.validate();
    std::map<DateKey, const DailyRecord*> by_date;
    for (const auto& r : records) by_date[DateKey{r.date}] = &r;

    auto lookup = [&](const Date& d) -> const DailyRecord* {
        const auto it = by_date.find(DateKey{d});
        return it == by_date.end() ? nullptr : it->second;
    };

    // Fine-tuning pairs: (target day, lag) combinations whose input day exists
    // and is not a forecast day.
    struct PairIndex {
        const DailyRecord* input;
        const DailyRecord* target;
        unsigned lag;
    };
    std::vector<PairIndex> finetune_index;
    std::vector<const DailyRecord*> pretrain_days;
    std::vector<double> training_loads;
    std::set<DateKey> training_days;

    auto add_training_day = [&](const DailyRecord* r) {
        if (training_days.insert(DateKey{r->date}).second)
            training_loads.insert(training_loads.end(), r->loads.begin(), r->loads.end());
    };

    for (const auto& r : records) {
        if (cfg.pretrain.contains(r.date)) {
            pretrain_days.push_back(&r);
            add_training_day(&r);
        }
    }
    for (const auto& r : records) {
        if (!cfg.finetune.contains(r.date)) continue;
        for (unsigned k : cfg.lags) {
            const Date input_date = add_days(r.date, -static_cast<long>(k));
            const DailyRecord* in = lookup(input_date);
            if (in == nullptr || cfg.test.contains(input_date)) continue;
            finetune_index.push_back({in, &r, k});
            add_training_day(in);
            add_training_day(&r);
        }
    }
    if (pretrain_days.empty()) throw InsufficientHistory("no records fall in the pretraining range");
    if (finetune_index.empty())
        throw InsufficientHistory("no fine-tuning pairs can be formed from the records");

    SampleSet set;
    set.temperature_mode = cfg.temperature_mode;
    set.norm = NormParams::from_loads(training_loads);

    std::map<DateKey, FeatureVector> feature_cache;
    auto features = [&](const DailyRecord& r) -> const FeatureVector& {
        auto it = feature_cache.find(DateKey{r.date});
        if (it == feature_cache.end())
            it = feature_cache
                     .emplace(DateKey{r.date}, assemble_features(r, set.norm, cfg.temperature_mode))
                     .first;
        return it->second;
    };

    set.pretrain.reserve(pretrain_days.size());
    for (const auto* r : pretrain_days) set.pretrain.push_back(features(*r));

    for (const auto& p : finetune_index) {
        const FeatureVector& f = features(*p.input);
        for (std::size_t h = 1; h <= kHoursPerDay; ++h) {
            set.finetune[h - 1].push_back({p.input->date, p.target->date, p.lag, f,
                                           normalize_load(p.target->hourly_load(h), set.norm)});
        }
    }

    for (const auto& r : records) {
        if (!cfg.test.contains(r.date)) continue;
        for (unsigned k : cfg.lags) {
            const DailyRecord* in = lookup(add_days(r.date, -static_cast<long>(k)));
            if (in == nullptr) continue;
            const FeatureVector& f = features(*in);
            for (std::size_t h = 1; h <= kHoursPerDay; ++h)
                set.test[h - 1].push_back({in->date, r.date, k, f, r.hourly_load(h)});
        }
    }
    return set;
}

std::string SyntheticProcess::describe() const {
    std::ostringstream os;
    os << "load(d, s) = (" << base_mw << " * (1 + " << daily_amplitude
       << " * cos(2*pi*(t_s - 18)/24)) + " << cold_coupling_mw << " * max(0, " << comfort_c
       << " - T_d)) * w_d + N(0, (" << noise_fraction << " * " << base_mw << ")^2)"
       << "; t_s = 0.5*(s+1) hours; w_d = " << weekend_factor << " on weekends, "
       << holiday_factor << " on holidays, else 1; T_d = " << temp_mean_c << " - "
       << temp_amplitude_c << " * cos(2*pi*(doy - 15)/365) + N(0, " << temp_noise_c
       << "^2); holidays on fixed dates 01-01, 01-06, 05-01, 05-08, 07-05, 08-29, 09-01, "
          "09-15, 11-01, 12-24, 12-25, 12-26; start " << format_date(start);
    return os.str();
}

namespace {

bool is_fixed_holiday(const Date& d) {
    static constexpr std::pair<unsigned, unsigned> kDates[] = {
        {1, 1}, {1, 6}, {5, 1}, {5, 8}, {7, 5}, {8, 29}, {9, 1}, {9, 15}, {11, 1},
        {12, 24}, {12, 25}, {12, 26}};
    const unsigned m = static_cast<unsigned>(d.month());
    const unsigned day = static_cast<unsigned>(d.day());
    return std::any_of(std::begin(kDates), std::end(kDates),
                       [&](const auto& md) { return md.first == m && md.second == day; });
}

}  // namespace

SyntheticData synthesize(std::size_t days, std::uint64_t seed, const SyntheticProcess& process) {
    if (days < 30) throw ConfigError("synthesize needs at least 30 days, got " + std::to_string(days));
    SeededRng rng(seed);
    SyntheticData data;
    data.process = process;
    data.records.reserve(days);
    constexpr double two_pi = 2.0 * std::numbers::pi;

    for (std::size_t i = 0; i < days; ++i) {
        DailyRecord rec;
        rec.date = add_days(process.start, static_cast<long>(i));
        rec.day_type = day_type_of(rec.date);
        rec.holiday = is_fixed_holiday(rec.date);

        const Date jan1{rec.date.year(), std::chrono::January, std::chrono::day{1}};
        const double doy = static_cast<double>(days_between(jan1, rec.date));
        rec.avg_temp = process.temp_mean_c -
                       process.temp_amplitude_c * std::cos(two_pi * (doy - 15.0) / 365.0) +
                       process.temp_noise_c * rng.normal();
        // Stored temperatures are rounded like the CSV so that a written and
        // re-read dataset is identical.
        rec.avg_temp = std::round(rec.avg_temp * 100.0) / 100.0;

        const bool weekend = rec.day_type == DayType::saturday || rec.day_type == DayType::sunday;
        const double w = rec.holiday ? process.holiday_factor
                                     : (weekend ? process.weekend_factor : 1.0);
        const double cold = process.cold_coupling_mw * std::max(0.0, process.comfort_c - rec.avg_temp);

        rec.loads.resize(kHalfHoursPerDay);
        for (std::size_t s = 0; s < kHalfHoursPerDay; ++s) {
            const double t = 0.5 * static_cast<double>(s + 1);
            const double shape = 1.0 + process.daily_amplitude * std::cos(two_pi * (t - 18.0) / 24.0);
            const double load = (process.base_mw * shape + cold) * w +
                                process.noise_fraction * process.base_mw * rng.normal();
            rec.loads[s] = std::round(std::max(load, 1.0) * 1000.0) / 1000.0;
        }
        data.records.push_back(std::move(rec));
    }
    return data;
}

}  // namespace daen
