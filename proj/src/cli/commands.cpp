#include "daen/cli/commands.hpp"

#include "daen/baselines.hpp"
#include "daen/cli/checkpoint.hpp"
#include "daen/cli/config.hpp"
#include "daen/dataset.hpp"
#include "daen/errors.hpp"
#include "daen/forecaster.hpp"
#include "daen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

namespace daen::cli {

namespace fs = std::filesystem;

namespace {

using DayForecast = std::array<double, kHoursPerDay>;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    std::size_t workers = 0;
    std::optional<std::uint64_t> seed;
};

RunConfig resolve_config(const GlobalOptions& g) {
    RunConfig cfg = g.config_path.empty() ? run_config_from({}, fs::current_path())
                                          : load_run_config(g.config_path);
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (g.workers > 0) cfg.workers = g.workers;
    if (g.seed) cfg.train.base_seed = *g.seed;
    return cfg;
}

std::vector<DailyRecord> load_data(const RunConfig& cfg) {
    auto records = load_records(cfg.loads_path, cfg.temps_path, cfg.holidays_path);
    if (records.empty()) throw DataError(cfg.loads_path.string() + ": no load rows");
    return records;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    writer(out);
    out.flush();
    if (!out) throw ConfigError("failed writing " + path.string());
}

Date require_date(const std::string& text) {
    try {
        return parse_date(text);
    } catch (const std::invalid_argument&) {
        throw ConfigError("--date expects YYYY-MM-DD, got '" + text + "'");
    }
}

const DailyRecord& record_for(const std::vector<DailyRecord>& records, const Date& date) {
    const auto it = std::find_if(records.begin(), records.end(),
                                 [&](const DailyRecord& r) { return r.date == date; });
    if (it == records.end())
        throw InsufficientHistory("no actual loads for " + format_date(date) + " in the data");
    return *it;
}

DayForecast actuals_for(const std::vector<DailyRecord>& records, const Date& date) {
    const DailyRecord& rec = record_for(records, date);
    DayForecast out{};
    for (std::size_t h = 1; h <= kHoursPerDay; ++h) out[h - 1] = rec.hourly_load(h);
    return out;
}

// Reads a two-column `hour,<value_column>` file with hours 1..24 in order.
DayForecast read_hourly_csv(const fs::path& path, const std::string& value_column) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "hour," + value_column)
        throw DataError(path.string() + ":1: expected header 'hour," + value_column + "'");
    DayForecast out{};
    std::size_t n = 0;
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError(where + "expected two columns");
        std::size_t used = 0;
        double value = 0.0;
        long hour = 0;
        try {
            hour = std::stol(line.substr(0, comma));
            value = std::stod(line.substr(comma + 1), &used);
        } catch (const std::exception&) {
            throw DataError(where + "unparsable row '" + line + "'");
        }
        if (used != line.size() - comma - 1 || !std::isfinite(value))
            throw DataError(where + "unparsable value in '" + line + "'");
        if (n >= kHoursPerDay || hour != static_cast<long>(n + 1))
            throw DataError(where + "expected hour " + std::to_string(n + 1));
        out[n++] = value;
    }
    if (n != kHoursPerDay)
        throw DataError(path.string() + ": expected 24 hourly rows, found " + std::to_string(n));
    return out;
}

fs::path forecast_file(const fs::path& out_dir, const Date& date) {
    return out_dir / ("forecast_" + format_date(date) + ".csv");
}

std::vector<double> cdf_grid(const EvalResult& r) {
    const double upper = std::max(5.0, std::ceil(r.max_re / 0.25) * 0.25);
    return threshold_grid(upper, 0.25);
}

void print_summary(std::ostream& out, const std::string& label, const EvalResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%sMaxRe: %.2f%%\n%sMinRe: %.2f%%\n%sMae: %.2f%%\n",
                  label.c_str(), r.max_re, label.c_str(), r.min_re, label.c_str(), r.mae);
    out << buf;
}

BankTrainingResult train_from(const RunConfig& cfg, const SampleSet& samples) {
    return train_bank(samples, cfg.stack, cfg.train, cfg.workers);
}

// All writes happen here, after the worker pool has joined.
void write_bank(const RunConfig& cfg, const BankTrainingResult& trained) {
    const std::string snapshot = describe(cfg);
    for (std::size_t h = 1; h <= kHoursPerDay; ++h) {
        Checkpoint cp;
        cp.hour = h;
        cp.model = trained.bank.models[h - 1];
        cp.norm = trained.bank.norm;
        cp.temperature_mode = trained.bank.temperature_mode;
        cp.config_snapshot = snapshot;
        cp.base_seed = cfg.train.base_seed;
        write_file(checkpoint_path(cfg.out_dir, h), [&](std::ostream& o) { o << checkpoint_to_json(cp); });
        write_file(log_path(cfg.out_dir, h),
                   [&](std::ostream& o) { write_log_csv(o, trained.logs[h - 1]); });
    }
}

bool bank_exists(const fs::path& out_dir) {
    for (std::size_t h = 1; h <= kHoursPerDay; ++h)
        if (!fs::exists(checkpoint_path(out_dir, h))) return false;
    return true;
}

int cmd_gen_data(const GlobalOptions& g, std::size_t days, std::ostream& out) {
    RunConfig cfg = resolve_config(g);
    if (days < 30) throw ConfigError("gen-data needs --days >= 30, got " + std::to_string(days));
    fs::path loads = cfg.loads_path, temps = cfg.temps_path, holidays = cfg.holidays_path;
    if (!g.out_dir.empty()) {
        loads = fs::path(g.out_dir) / "loads.csv";
        temps = fs::path(g.out_dir) / "temps.csv";
        holidays = fs::path(g.out_dir) / "holidays.csv";
    }
    const SyntheticData data = synthesize(days, cfg.train.base_seed);
    write_file(loads, [&](std::ostream& o) { write_loads_csv(o, data.records); });
    write_file(temps, [&](std::ostream& o) { write_temps_csv(o, data.records); });
    write_file(holidays, [&](std::ostream& o) { write_holidays_csv(o, data.records); });
    out << "wrote " << days << " days to " << loads.string() << ", " << temps.string() << ", "
        << holidays.string() << '\n';
    return kExitOk;
}

int cmd_train(const GlobalOptions& g, std::ostream& out) {
    const RunConfig cfg = resolve_config(g);
    const auto records = load_data(cfg);
    const SampleSet samples = split(records, cfg.split_for(records));
    const BankTrainingResult trained = train_from(cfg, samples);
    write_bank(cfg, trained);
    out << "trained 24 hourly models; checkpoints in " << (cfg.out_dir / "checkpoints").string()
        << ", loss logs in " << (cfg.out_dir / "logs").string() << '\n';
    return kExitOk;
}

int cmd_forecast(const GlobalOptions& g, const std::string& date_text, std::ostream& out) {
    const RunConfig cfg = resolve_config(g);
    const Date date = require_date(date_text);
    const ModelBank bank = load_bank(cfg.out_dir);
    const auto records = load_data(cfg);
    const DayForecast f = forecast_day(bank, records, date, cfg.ensemble);
    const fs::path path = forecast_file(cfg.out_dir, date);
    write_file(path, [&](std::ostream& o) { write_forecast_csv(o, f); });
    out << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_evaluate(const GlobalOptions& g, const std::string& date_text,
                 const std::string& forecast_csv, const std::string& actual_csv,
                 std::ostream& out) {
    const RunConfig cfg = resolve_config(g);
    if (date_text.empty() && (forecast_csv.empty() || actual_csv.empty()))
        throw ConfigError("evaluate needs --date unless both --forecast-csv and --actual-csv are given");
    std::optional<Date> date;
    if (!date_text.empty()) date = require_date(date_text);

    std::optional<std::vector<DailyRecord>> records;
    auto history = [&]() -> const std::vector<DailyRecord>& {
        if (!records) records = load_data(cfg);
        return *records;
    };

    const DayForecast actual =
        actual_csv.empty() ? actuals_for(history(), *date) : read_hourly_csv(actual_csv, "actual_mw");

    DayForecast forecast{};
    if (!forecast_csv.empty()) {
        forecast = read_hourly_csv(forecast_csv, "forecast_mw");
    } else if (fs::exists(forecast_file(cfg.out_dir, *date))) {
        forecast = read_hourly_csv(forecast_file(cfg.out_dir, *date), "forecast_mw");
    } else {
        forecast = forecast_day(load_bank(cfg.out_dir), history(), *date, cfg.ensemble);
    }

    const EvalResult r = evaluate(actual, forecast);
    write_file(cfg.out_dir / "eval.csv", [&](std::ostream& o) { write_eval_csv(o, r); });
    const auto grid = cdf_grid(r);
    write_file(cfg.out_dir / "cdf.csv",
               [&](std::ostream& o) { write_cdf_csv(o, error_cdf(r.errors, grid)); });
    print_summary(out, "", r);
    return kExitOk;
}

int cmd_compare(const GlobalOptions& g, const std::string& date_text, std::ostream& out) {
    const RunConfig cfg = resolve_config(g);
    const auto records = load_data(cfg);
    const SplitConfig sc = cfg.split_for(records);
    const Date date = date_text.empty() ? sc.test.first : require_date(date_text);
    const DayForecast actual = actuals_for(records, date);
    const SampleSet samples = split(records, sc);

    ModelBank bank;
    if (bank_exists(cfg.out_dir)) {
        bank = load_bank(cfg.out_dir);
        out << "loaded DAEN checkpoints from " << (cfg.out_dir / "checkpoints").string() << '\n';
    } else {
        BankTrainingResult trained = train_from(cfg, samples);
        write_bank(cfg, trained);
        bank = std::move(trained.bank);
        out << "trained DAEN bank\n";
    }
    const BaselineBanks baselines =
        train_baselines(samples, cfg.baselines, cfg.train.base_seed, cfg.workers);

    struct Method {
        std::string name;
        std::string file_tag;
        DayForecast forecast;
    };
    std::vector<Method> methods;
    methods.push_back({"DAENs", "daens", forecast_day(bank, records, date, cfg.ensemble)});
    if (cfg.baselines.bpnn) {
        const HourlyPredictor p = [&](std::size_t h, const FeatureVector& x) {
            return baseline_predict(baselines.bpnn[h - 1], x);
        };
        methods.push_back({"BPNNs", "bpnns",
                           forecast_day(p, samples.norm, samples.temperature_mode, records, date,
                                        cfg.ensemble)});
    }
    if (cfg.baselines.elm) {
        const HourlyPredictor p = [&](std::size_t h, const FeatureVector& x) {
            return baseline_predict(baselines.elm[h - 1], x);
        };
        methods.push_back({"ELM", "elm",
                           forecast_day(p, samples.norm, samples.temperature_mode, records, date,
                                        cfg.ensemble)});
    }

    std::vector<MethodResult> results;
    for (const auto& m : methods) {
        const EvalResult r = evaluate(actual, m.forecast);
        write_file(cfg.out_dir / ("forecast_" + m.file_tag + ".csv"),
                   [&](std::ostream& o) { write_forecast_csv(o, m.forecast); });
        write_file(cfg.out_dir / ("eval_" + m.file_tag + ".csv"),
                   [&](std::ostream& o) { write_eval_csv(o, r); });
        const auto grid = cdf_grid(r);
        write_file(cfg.out_dir / ("cdf_" + m.file_tag + ".csv"),
                   [&](std::ostream& o) { write_cdf_csv(o, error_cdf(r.errors, grid)); });
        results.push_back({m.name, r});
    }
    const ComparisonReport report = comparison_report(results);
    write_file(cfg.out_dir / "report.csv", [&](std::ostream& o) { write_report_csv(o, report); });

    out << "test day " << format_date(date) << '\n';
    write_report_csv(out, report);
    const auto best = std::min_element(results.begin(), results.end(), [](const auto& a, const auto& b) {
        return a.result.mae < b.result.mae;
    });
    out << "lowest Mae: " << best->name << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stacked sparse autoencoder short-term load forecasting", "daen"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config_path, "key = value run configuration file");
    app.add_option("--out", g.out_dir, "output directory (gen-data: data directory)");
    app.add_option("--workers", g.workers, "training worker threads")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "base random seed");

    std::size_t days = 365;
    auto* gen = app.add_subcommand("gen-data", "write a seeded synthetic load history");
    gen->add_option("--days", days, "number of days (>= 30)");

    auto* train = app.add_subcommand("train", "train the 24 hourly models");

    std::string date, forecast_csv, actual_csv;
    auto* fc = app.add_subcommand("forecast", "forecast the 24 hourly loads of one day");
    fc->add_option("--date", date, "forecast day YYYY-MM-DD")->required();

    auto* ev = app.add_subcommand("evaluate", "score a forecast against actual loads");
    ev->add_option("--date", date, "day to evaluate YYYY-MM-DD");
    ev->add_option("--forecast-csv", forecast_csv, "hour,forecast_mw file");
    ev->add_option("--actual-csv", actual_csv, "hour,actual_mw file");

    auto* cmp = app.add_subcommand("compare", "compare DAENs with BPNN and ELM baselines");
    cmp->add_option("--date", date, "test day YYYY-MM-DD (default: configured test day)");

    std::vector<std::string> argv_storage{"daen"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }
    if (seed_opt->count() > 0) g.seed = seed;

    try {
        if (gen->parsed()) return cmd_gen_data(g, days, out);
        if (train->parsed()) return cmd_train(g, out);
        if (fc->parsed()) return cmd_forecast(g, date, out);
        if (ev->parsed()) return cmd_evaluate(g, date, forecast_csv, actual_csv, out);
        if (cmp->parsed()) return cmd_compare(g, date, out);
        return kExitInputError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const InsufficientHistory& e) {
        err << "error: " << e.what() << '\n';
        return kExitInsufficientData;
    } catch (const HourTrainingFailure& e) {
        err << "internal error: training failed for " << e.what() << '\n';
        return kExitInternalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
}

}  // namespace daen::cli
