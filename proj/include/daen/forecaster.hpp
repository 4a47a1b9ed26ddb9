#pragma once

#include "daen/dataset.hpp"
#include "daen/features.hpp"
#include "daen/training.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace daen {

// Exponential lag ensemble: F = sum_{k=1..n} exp(-alpha k) F_k.
struct EnsembleConfig {
    std::size_t n = 7;
    double alpha = 0.69;
    bool normalize_weights = false;

    void validate() const;
};

// exp(-alpha k) for k = 1..n, divided by their sum when normalize_weights.
Vector ensemble_weights(const EnsembleConfig& ec);
// Weighted combination of per-lag forecasts F_1..F_n (MW).
double combine_lag_forecasts(std::span<const double> per_lag, const EnsembleConfig& ec);

// One model per forecast hour, all sharing a stack spec and load scaling.
struct ModelBank {
    std::vector<DaenModel> models;  // index hour-1
    NormParams norm;
    TemperatureMode temperature_mode = TemperatureMode::weighted;
    TrainConfig config;

    const DaenModel& model(std::size_t hour) const;
    void validate() const;
};

// Raised when an hourly training job fails; names the hour.
class HourTrainingFailure : public std::runtime_error {
public:
    HourTrainingFailure(std::size_t hour, const std::string& what);
    std::size_t hour() const noexcept { return hour_; }

private:
    std::size_t hour_;
};

struct BankTrainingResult {
    ModelBank bank;
    std::vector<TrainLog> logs;  // index hour-1
};

// Seed used for the model of `hour` (1..24).
inline std::uint64_t hour_seed(std::uint64_t base_seed, std::size_t hour) noexcept {
    return base_seed + hour;
}

// Runs the 24 independent pretrain + fine-tune jobs on `workers` threads.
// Every job draws from its own hour_seed stream, so the result does not
// depend on the worker count or on scheduling.
BankTrainingResult train_bank(const SampleSet& samples, const StackSpec& spec,
                              const TrainConfig& cfg, std::size_t workers);

// Runs `job(hour)` for hour = 1..24 over a pool of `workers` threads. The
// first failure (lowest hour) is rethrown as HourTrainingFailure after all
// workers have finished.
void for_each_hour(std::size_t workers, const std::function<void(std::size_t)>& job);

// Maps (hour, features of a lagged day) to a normalized load.
using HourlyPredictor = std::function<double(std::size_t hour, const FeatureVector&)>;

// lag_features[k-1] holds the features of the day k days before the target.
double forecast_hour(const ModelBank& bank, std::size_t hour,
                     std::span<const FeatureVector> lag_features, const EnsembleConfig& ec);
double forecast_hour(const HourlyPredictor& predictor, const NormParams& norm, std::size_t hour,
                     std::span<const FeatureVector> lag_features, const EnsembleConfig& ec);

// Features of the n days preceding `date`; InsufficientHistory when any of
// them is missing from `history`.
std::vector<FeatureVector> lag_features_for(const std::vector<DailyRecord>& history,
                                            const Date& date, const NormParams& norm,
                                            TemperatureMode mode, const EnsembleConfig& ec);

std::array<double, kHoursPerDay> forecast_day(const ModelBank& bank,
                                              const std::vector<DailyRecord>& history,
                                              const Date& date, const EnsembleConfig& ec);
std::array<double, kHoursPerDay> forecast_day(const HourlyPredictor& predictor,
                                              const NormParams& norm, TemperatureMode mode,
                                              const std::vector<DailyRecord>& history,
                                              const Date& date, const EnsembleConfig& ec);

// Converts the per-hour fine-tuning pairs into a training matrix.
LabelledSet labelled_set(const std::vector<SamplePair>& pairs);

}  // namespace daen
