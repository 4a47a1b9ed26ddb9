#pragma once

#include "daen/features.hpp"
#include "daen/records.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace daen {

// CSV column name of half-hour slot i (0 -> "l0030", 47 -> "l2400").
std::string load_column_name(std::size_t slot);

// Reads loads.csv / temps.csv / holidays.csv and joins them by date.
// Records come back sorted by date. Throws DataError carrying the file
// name and line number for malformed rows, duplicate dates, loads without a
// temperature, or unreadable files.
std::vector<DailyRecord> load_records(const std::filesystem::path& loads_path,
                                      const std::filesystem::path& temps_path,
                                      const std::filesystem::path& holidays_path);

void write_loads_csv(std::ostream& out, const std::vector<DailyRecord>& records);
void write_temps_csv(std::ostream& out, const std::vector<DailyRecord>& records);
void write_holidays_csv(std::ostream& out, const std::vector<DailyRecord>& records);

struct SplitConfig {
    DateRange pretrain;
    DateRange finetune;  // target days of the fine-tuning pairs
    DateRange test;      // forecast days
    std::vector<unsigned> lags{1, 2, 3, 4, 5, 6, 7};
    TemperatureMode temperature_mode = TemperatureMode::weighted;

    void validate() const;
};

// Pretraining ends 31 days before the final record, the 23 days before the
// final record are fine-tuning targets, and the final day is the test day.
// On a calendar year this is Jan 1 - Nov 30 / Dec 8 - Dec 30 / Dec 31.
SplitConfig default_split(const std::vector<DailyRecord>& records);

struct SamplePair {
    Date input_date;
    Date target_date;
    unsigned lag = 0;
    FeatureVector features;
    double target = 0.0;  // normalized for fine-tuning pairs, MW for test pairs
};

struct SampleSet {
    std::vector<FeatureVector> pretrain;
    std::array<std::vector<SamplePair>, kHoursPerDay> finetune;  // index hour-1
    std::array<std::vector<SamplePair>, kHoursPerDay> test;
    NormParams norm;
    TemperatureMode temperature_mode = TemperatureMode::weighted;
};

// Builds the pretraining features and, for every hour, the (lagged day,
// target day) pairs. Input days always precede their target, test days are
// never used as fine-tuning inputs, and the normalization range covers only
// pretraining and fine-tuning days.
SampleSet split(const std::vector<DailyRecord>& records, const SplitConfig& cfg);

struct SyntheticProcess {
    Date start{std::chrono::year{1997}, std::chrono::January, std::chrono::day{1}};
    double base_mw = 700.0;
    double daily_amplitude = 0.25;  // fraction of base, peak at 18:00
    double weekend_factor = 0.90;
    double holiday_factor = 0.90;
    double cold_coupling_mw = 6.0;  // MW per degree below the comfort point
    double comfort_c = 15.0;
    double noise_fraction = 0.01;   // sigma as a fraction of base
    double temp_mean_c = 10.0;
    double temp_amplitude_c = 12.0;  // coldest mid-January
    double temp_noise_c = 2.0;

    std::string describe() const;
};

struct SyntheticData {
    std::vector<DailyRecord> records;
    SyntheticProcess process;
};

// Seeded synthetic load history; requires days >= 30.
SyntheticData synthesize(std::size_t days, std::uint64_t seed,
                         const SyntheticProcess& process = {});

}  // namespace daen
