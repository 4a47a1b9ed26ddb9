#include "daen/forecaster.hpp"

#include "daen/errors.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

namespace daen {

void EnsembleConfig::validate() const {
    if (n < 1) throw ConfigError("ensemble lag count must be >= 1");
    if (!(alpha >= 0.0)) throw ConfigError("ensemble alpha must be >= 0");
}

Vector ensemble_weights(const EnsembleConfig& ec) {
    ec.validate();
    Vector w(ec.n);
    for (std::size_t k = 1; k <= ec.n; ++k) w[k - 1] = std::exp(-ec.alpha * static_cast<double>(k));
    if (ec.normalize_weights) {
        double total = 0.0;
        for (double x : w) total += x;
        for (double& x : w) x /= total;
    }
    return w;
}

double combine_lag_forecasts(std::span<const double> per_lag, const EnsembleConfig& ec) {
    if (per_lag.size() != ec.n)
        throw ContractViolation("ensemble expects " + std::to_string(ec.n) + " lag forecasts, got " +
                                std::to_string(per_lag.size()));
    const Vector w = ensemble_weights(ec);
    double f = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) f += w[k] * per_lag[k];
    return f;
}

const DaenModel& ModelBank::model(std::size_t hour) const {
    if (hour < 1 || hour > models.size())
        throw ContractViolation("hour must be in 1.." + std::to_string(models.size()) + ", got " +
                                std::to_string(hour));
    return models[hour - 1];
}

void ModelBank::validate() const {
    if (models.size() != kHoursPerDay)
        throw ContractViolation("model bank holds " + std::to_string(models.size()) +
                                " models, expected 24");
    for (const auto& m : models) {
        m.validate();
        if (!(m.spec == models.front().spec))
            throw ContractViolation("models in a bank must share one stack spec");
    }
    norm.validate();
}

HourTrainingFailure::HourTrainingFailure(std::size_t hour, const std::string& what)
    : std::runtime_error("hour " + std::to_string(hour) + ": " + what), hour_(hour) {}

void for_each_hour(std::size_t workers, const std::function<void(std::size_t)>& job) {
    const std::size_t pool = std::max<std::size_t>(1, std::min(workers, kHoursPerDay));
    std::atomic<std::size_t> next{1};
    std::array<std::exception_ptr, kHoursPerDay> failures{};

    auto worker = [&] {
        for (std::size_t h = next++; h <= kHoursPerDay; h = next++) {
            try {
                job(h);
            } catch (...) {
                failures[h - 1] = std::current_exception();
            }
        }
    };

    if (pool == 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(pool);
        for (std::size_t i = 0; i < pool; ++i) threads.emplace_back(worker);
    }

    for (std::size_t h = 1; h <= kHoursPerDay; ++h) {
        if (!failures[h - 1]) continue;
        try {
            std::rethrow_exception(failures[h - 1]);
        } catch (const std::exception& e) {
            throw HourTrainingFailure(h, e.what());
        } catch (...) {
            throw HourTrainingFailure(h, "unknown error");
        }
    }
}

LabelledSet labelled_set(const std::vector<SamplePair>& pairs) {
    if (pairs.empty()) return {};
    const std::size_t cols = pairs.front().features.size();
    std::vector<double> data;
    data.reserve(pairs.size() * cols);
    LabelledSet set;
    set.targets.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (p.features.size() != cols) throw ContractViolation("ragged feature vectors");
        data.insert(data.end(), p.features.begin(), p.features.end());
        set.targets.push_back(p.target);
    }
    set.inputs = Matrix(pairs.size(), cols, std::move(data));
    return set;
}

BankTrainingResult train_bank(const SampleSet& samples, const StackSpec& spec,
                              const TrainConfig& cfg, std::size_t workers) {
    spec.validate();
    cfg.validate();
    for (std::size_t h = 1; h <= kHoursPerDay; ++h) {
        if (samples.finetune[h - 1].empty())
            throw InsufficientHistory("no fine-tuning pairs for hour " + std::to_string(h));
    }
    const Matrix pretrain_data = stack_rows(samples.pretrain);

    BankTrainingResult result;
    result.bank.models.resize(kHoursPerDay);
    result.bank.norm = samples.norm;
    result.bank.temperature_mode = samples.temperature_mode;
    result.bank.config = cfg;
    result.logs.resize(kHoursPerDay);

    // Each job writes only its own slot.
    for_each_hour(workers, [&](std::size_t hour) {
        SeededRng rng(hour_seed(cfg.base_seed, hour));
        PretrainResult pre = pretrain_stack(spec, pretrain_data, cfg, rng);
        DaenModel model = assemble_model(spec, std::move(pre.encoders), rng);
        FinetuneResult fine = finetune(std::move(model), labelled_set(samples.finetune[hour - 1]), cfg);

        TrainLog log = std::move(pre.log);
        log.insert(log.end(), fine.log.begin(), fine.log.end());
        result.bank.models[hour - 1] = std::move(fine.model);
        result.logs[hour - 1] = std::move(log);
    });
    return result;
}

double forecast_hour(const HourlyPredictor& predictor, const NormParams& norm, std::size_t hour,
                     std::span<const FeatureVector> lag_features, const EnsembleConfig& ec) {
    ec.validate();
    if (hour < 1 || hour > kHoursPerDay)
        throw ContractViolation("hour must be in 1..24, got " + std::to_string(hour));
    if (lag_features.size() < ec.n)
        throw InsufficientHistory("forecast needs " + std::to_string(ec.n) + " lag days, got " +
                                  std::to_string(lag_features.size()));
    if (lag_features.size() > ec.n)
        throw ContractViolation("forecast expects exactly " + std::to_string(ec.n) +
                                " lag feature vectors, got " + std::to_string(lag_features.size()));
    Vector per_lag(ec.n);
    for (std::size_t k = 0; k < ec.n; ++k)
        per_lag[k] = denormalize_load(predictor(hour, lag_features[k]), norm);
    return combine_lag_forecasts(per_lag, ec);
}

double forecast_hour(const ModelBank& bank, std::size_t hour,
                     std::span<const FeatureVector> lag_features, const EnsembleConfig& ec) {
    const HourlyPredictor p = [&bank](std::size_t h, const FeatureVector& x) {
        return predict(bank.model(h), x);
    };
    return forecast_hour(p, bank.norm, hour, lag_features, ec);
}

std::vector<FeatureVector> lag_features_for(const std::vector<DailyRecord>& history,
                                            const Date& date, const NormParams& norm,
                                            TemperatureMode mode, const EnsembleConfig& ec) {
    ec.validate();
    std::map<std::chrono::sys_days, const DailyRecord*> by_date;
    for (const auto& r : history) by_date[std::chrono::sys_days{r.date}] = &r;

    std::vector<FeatureVector> lags;
    lags.reserve(ec.n);
    for (std::size_t k = 1; k <= ec.n; ++k) {
        const Date d = add_days(date, -static_cast<long>(k));
        const auto it = by_date.find(std::chrono::sys_days{d});
        if (it == by_date.end())
            throw InsufficientHistory("forecast for " + format_date(date) + " needs " +
                                      std::to_string(ec.n) + " days of history; " +
                                      format_date(d) + " is missing");
        lags.push_back(assemble_features(*it->second, norm, mode));
    }
    return lags;
}

std::array<double, kHoursPerDay> forecast_day(const HourlyPredictor& predictor,
                                              const NormParams& norm, TemperatureMode mode,
                                              const std::vector<DailyRecord>& history,
                                              const Date& date, const EnsembleConfig& ec) {
    const auto lags = lag_features_for(history, date, norm, mode, ec);
    std::array<double, kHoursPerDay> out{};
    for (std::size_t h = 1; h <= kHoursPerDay; ++h)
        out[h - 1] = forecast_hour(predictor, norm, h, lags, ec);
    return out;
}

std::array<double, kHoursPerDay> forecast_day(const ModelBank& bank,
                                              const std::vector<DailyRecord>& history,
                                              const Date& date, const EnsembleConfig& ec) {
    const HourlyPredictor p = [&bank](std::size_t h, const FeatureVector& x) {
        return predict(bank.model(h), x);
    };
    return forecast_day(p, bank.norm, bank.temperature_mode, history, date, ec);
}

}  // namespace daen
