#pragma once

#include "daen/baselines.hpp"
#include "daen/dataset.hpp"
#include "daen/forecaster.hpp"
#include "daen/training.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace daen::cli {

// Flat `key = value` text with `#` comments.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, const std::string& source_name);

struct RunConfig {
    std::filesystem::path loads_path;
    std::filesystem::path temps_path;
    std::filesystem::path holidays_path;

    // Unset ranges fall back to default_split() on the loaded records.
    std::optional<DateRange> pretrain_range;
    std::optional<DateRange> finetune_range;
    std::optional<DateRange> test_range;
    std::vector<unsigned> lags{1, 2, 3, 4, 5, 6, 7};
    TemperatureMode temperature_mode = TemperatureMode::weighted;

    StackSpec stack{{57, 24, 12}};
    TrainConfig train;
    EnsembleConfig ensemble;
    std::size_t workers = 1;
    std::filesystem::path out_dir = "out";
    BaselineSettings baselines;

    SplitConfig split_for(const std::vector<DailyRecord>& records) const;
};

// Relative data paths resolve against `base_dir` (the config file's folder).
RunConfig run_config_from(const KeyValues& kv, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Canonical `key = value` dump, also stored inside checkpoints.
std::string describe(const RunConfig& cfg);

}  // namespace daen::cli
