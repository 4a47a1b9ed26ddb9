#pragma once

#include "daen/features.hpp"
#include "daen/forecaster.hpp"
#include "daen/training.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace daen::cli {

inline constexpr int kCheckpointFormatVersion = 1;

// One hourly model with everything needed to forecast with it.
struct Checkpoint {
    int format_version = kCheckpointFormatVersion;
    std::size_t hour = 0;
    DaenModel model;
    NormParams norm;
    TemperatureMode temperature_mode = TemperatureMode::weighted;
    std::string config_snapshot;
    std::uint64_t base_seed = 0;
};

std::string checkpoint_to_json(const Checkpoint& cp);
// Throws ConfigError for unknown versions and DataError for malformed or
// inconsistent content.
Checkpoint checkpoint_from_json(const std::string& text, const std::string& source_name);

std::filesystem::path checkpoint_path(const std::filesystem::path& out_dir, std::size_t hour);
std::filesystem::path log_path(const std::filesystem::path& out_dir, std::size_t hour);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Reads all 24 hourly checkpoints; they must agree on scaling and features.
ModelBank load_bank(const std::filesystem::path& out_dir);

}  // namespace daen::cli
