#include "doctest.h"

#include "daen/dataset.hpp"
#include "daen/errors.hpp"
#include "daen/forecaster.hpp"

#include <atomic>
#include <cmath>

#include "support.hpp"

using namespace daen;

namespace {

double weight_sum(double alpha, int n) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += std::exp(-alpha * k);
    return s;
}

SampleSet small_samples() {
    const auto data = synthesize(40, 5);
    return split(data.records, default_split(data.records));
}

TrainConfig quick_config() {
    TrainConfig cfg;
    cfg.pretrain_iters = 15;
    cfg.finetune_iters = 10;
    return cfg;
}

}  // namespace

TEST_CASE("ensemble of lag forecasts") {
    CHECK(combine_lag_forecasts(Vector{123.0}, {1, 0.0}) == 123.0);
    CHECK(combine_lag_forecasts(Vector{100.0}, {1, 0.69}) == doctest::Approx(50.158).epsilon(1e-4));
    CHECK(combine_lag_forecasts(Vector{100.0}, {1, 0.69}) ==
          doctest::Approx(100.0 * std::exp(-0.69)).epsilon(1e-15));
    const Vector hundreds(7, 100.0);
    const double f = combine_lag_forecasts(hundreds, {});
    CHECK(std::abs(f - 100.0 * weight_sum(0.69, 7)) < 1e-9);
    CHECK(f == doctest::Approx(99.83).epsilon(1e-4));
    CHECK(combine_lag_forecasts(hundreds, {7, 0.69, true}) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK_THROWS_AS(combine_lag_forecasts(Vector{1.0, 2.0}, {}), ContractViolation);
}

TEST_CASE("ensemble weights decrease with lag and scale linearly") {
    for (double alpha : {0.1, 0.69, 2.0}) {
        const Vector w = ensemble_weights({7, alpha});
        for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k] < w[k - 1]);
    }
    SeededRng rng(3);
    const Vector f = fixture::random_vector(7, rng, 500, 900);
    Vector scaled = f;
    for (double& v : scaled) v *= 3.5;
    CHECK(combine_lag_forecasts(scaled, {}) == doctest::Approx(3.5 * combine_lag_forecasts(f, {})).epsilon(1e-14));
    CHECK_THROWS_AS((EnsembleConfig{0, 0.69}.validate()), ConfigError);
    CHECK_THROWS_AS((EnsembleConfig{7, -1.0}.validate()), ConfigError);
}

TEST_CASE("hour pool runs every hour once and reports the lowest failure") {
    std::array<std::atomic<int>, 24> hits{};
    for_each_hour(4, [&](std::size_t h) { hits[h - 1]++; });
    for (auto& h : hits) CHECK(h.load() == 1);

    try {
        for_each_hour(3, [](std::size_t h) {
            if (h == 7 || h == 19) throw std::runtime_error("boom " + std::to_string(h));
        });
        FAIL("expected a failure");
    } catch (const HourTrainingFailure& e) {
        CHECK(e.hour() == 7);
        CHECK(std::string(e.what()).find("boom 7") != std::string::npos);
    }
}

TEST_CASE("bank training is independent of the worker count") {
    const SampleSet samples = small_samples();
    const StackSpec spec{{57, 6, 3}};
    const TrainConfig cfg = quick_config();
    const auto one = train_bank(samples, spec, cfg, 1);
    const auto eight = train_bank(samples, spec, cfg, 8);
    REQUIRE(one.bank.models.size() == 24);
    CHECK(one.bank.models == eight.bank.models);
    CHECK(one.bank.norm == samples.norm);
    for (std::size_t h = 0; h < 24; ++h) {
        CHECK(one.logs[h].size() == cfg.pretrain_iters * 2 + cfg.finetune_iters);
        CHECK(one.logs[h].size() == eight.logs[h].size());
    }
    CHECK_FALSE(one.bank.models[0] == one.bank.models[1]);
}

TEST_CASE("hourly model seeds follow the base seed") {
    CHECK(hour_seed(42, 1) == 43);
    CHECK(hour_seed(42, 24) == 66);
}

TEST_CASE("forecast from a constant history stays near the constant") {
    std::vector<DailyRecord> history;
    const Date start = parse_date("1997-01-01");
    for (int i = 0; i < 10; ++i) {
        const Date d = add_days(start, i);
        history.push_back({d, std::vector<double>(48, 700.0), 10.0, day_type_of(d), false});
    }
    const NormParams np{600.0, 800.0};
    // Every hourly model maps any input to the normalized constant.
    const HourlyPredictor constant = [](std::size_t, const FeatureVector&) { return 0.5; };
    const auto f = forecast_day(constant, np, TemperatureMode::weighted, history,
                                parse_date("1997-01-11"), {1, 0.0});
    CHECK(f.size() == 24);
    for (double v : f) CHECK(v == doctest::Approx(700.0).epsilon(1e-12));

    const auto again = forecast_day(constant, np, TemperatureMode::weighted, history,
                                    parse_date("1997-01-11"), {1, 0.0});
    CHECK(f == again);
}

TEST_CASE("forecast needs n days of history") {
    std::vector<DailyRecord> history;
    const Date start = parse_date("1997-01-01");
    for (int i = 0; i < 5; ++i) {
        const Date d = add_days(start, i);
        history.push_back({d, std::vector<double>(48, 700.0), 10.0, day_type_of(d), false});
    }
    const HourlyPredictor p = [](std::size_t, const FeatureVector&) { return 0.5; };
    CHECK_THROWS_AS(forecast_day(p, {600, 800}, TemperatureMode::weighted, history,
                                 parse_date("1997-01-06"), {}),
                    InsufficientHistory);
    CHECK_NOTHROW(forecast_day(p, {600, 800}, TemperatureMode::weighted, history,
                               parse_date("1997-01-06"), {5, 0.69}));
    const std::vector<FeatureVector> three(3, FeatureVector(57, 0.1));
    CHECK_THROWS_AS(forecast_hour(p, {600, 800}, 1, three, {}), InsufficientHistory);
    CHECK_THROWS_AS(forecast_hour(p, {600, 800}, 1, three, {2, 0.69}), ContractViolation);
}

TEST_CASE("forecast_hour denormalizes before weighting") {
    const NormParams np{600.0, 800.0};
    const HourlyPredictor by_lag = [](std::size_t, const FeatureVector& x) { return x[0]; };
    std::vector<FeatureVector> lags;
    Vector expected_mw;
    for (int k = 1; k <= 7; ++k) {
        lags.push_back(FeatureVector(57, 0.1 * k));
        expected_mw.push_back(600.0 + 200.0 * 0.1 * k);
    }
    const double got = forecast_hour(by_lag, np, 3, lags, {});
    double want = 0.0;
    for (int k = 1; k <= 7; ++k) want += std::exp(-0.69 * k) * expected_mw[static_cast<std::size_t>(k - 1)];
    CHECK(got == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("bank forecasts are deterministic and finite") {
    const auto data = synthesize(40, 5);
    const SampleSet samples = split(data.records, default_split(data.records));
    const auto trained = train_bank(samples, StackSpec{{57, 6, 3}}, quick_config(), 2);
    const Date day = data.records.back().date;
    const auto a = forecast_day(trained.bank, data.records, day, {});
    const auto b = forecast_day(trained.bank, data.records, day, {});
    CHECK(a == b);
    for (double v : a) CHECK(std::isfinite(v));
}

TEST_CASE("bank training needs pairs for every hour") {
    SampleSet empty = small_samples();
    empty.finetune[5].clear();
    CHECK_THROWS_AS(train_bank(empty, StackSpec{{57, 4}}, quick_config(), 1), InsufficientHistory);
}
