#include "daen/cli/config.hpp"

#include "daen/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

namespace daen::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
    throw ConfigError("config key '" + key + "': expected " + want + ", got '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value, const char* want) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, want);
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value, "a boolean");
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');)
        out.push_back(parse_number<T>(key, trim(item), "a comma-separated list of integers"));
    if (out.empty()) bad_value(key, value, "a non-empty list");
    return out;
}

DateRange parse_range(const std::string& key, const std::string& value) {
    const auto sep = value.find("..");
    try {
        if (sep == std::string::npos) {
            const Date d = parse_date(value);
            return {d, d};
        }
        return {parse_date(trim(value.substr(0, sep))), parse_date(trim(value.substr(sep + 2)))};
    } catch (const std::invalid_argument&) {
        bad_value(key, value, "a date or YYYY-MM-DD..YYYY-MM-DD range");
    }
}

std::string join(const auto& values) {
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) out += ',';
        out += std::to_string(v);
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source_name) {
    KeyValues kv;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    return kv;
}

SplitConfig RunConfig::split_for(const std::vector<DailyRecord>& records) const {
    SplitConfig s;
    if (!pretrain_range || !finetune_range || !test_range) s = default_split(records);
    if (pretrain_range) s.pretrain = *pretrain_range;
    if (finetune_range) s.finetune = *finetune_range;
    if (test_range) s.test = *test_range;
    s.lags = lags;
    s.temperature_mode = temperature_mode;
    return s;
}

RunConfig run_config_from(const KeyValues& kv, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    std::filesystem::path data_dir = base_dir;

    auto resolve = [&](const std::filesystem::path& p) {
        return p.is_absolute() ? p : base_dir / p;
    };

    using Handler = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Handler> handlers = {
        {"data.dir", [&](auto&, auto& v) { data_dir = resolve(v); }},
        {"data.loads", [&](auto&, auto& v) { cfg.loads_path = resolve(v); }},
        {"data.temps", [&](auto&, auto& v) { cfg.temps_path = resolve(v); }},
        {"data.holidays", [&](auto&, auto& v) { cfg.holidays_path = resolve(v); }},
        {"split.pretrain", [&](auto& k, auto& v) { cfg.pretrain_range = parse_range(k, v); }},
        {"split.finetune", [&](auto& k, auto& v) { cfg.finetune_range = parse_range(k, v); }},
        {"split.test", [&](auto& k, auto& v) { cfg.test_range = parse_range(k, v); }},
        {"split.lags", [&](auto& k, auto& v) { cfg.lags = parse_list<unsigned>(k, v); }},
        {"features.temperature_mode",
         [&](auto& k, auto& v) {
             if (v == "weighted") cfg.temperature_mode = TemperatureMode::weighted;
             else if (v == "argmax") cfg.temperature_mode = TemperatureMode::argmax;
             else bad_value(k, v, "'weighted' or 'argmax'");
         }},
        {"stack.layer_sizes",
         [&](auto& k, auto& v) { cfg.stack.layer_sizes = parse_list<std::size_t>(k, v); }},
        {"train.learning_rate",
         [&](auto& k, auto& v) { cfg.train.learning_rate = parse_number<double>(k, v, "a number"); }},
        {"train.pretrain_iters",
         [&](auto& k, auto& v) { cfg.train.pretrain_iters = parse_number<std::size_t>(k, v, "a count"); }},
        {"train.finetune_iters",
         [&](auto& k, auto& v) { cfg.train.finetune_iters = parse_number<std::size_t>(k, v, "a count"); }},
        {"train.batch_size",
         [&](auto& k, auto& v) { cfg.train.batch_size = parse_number<std::size_t>(k, v, "a count"); }},
        {"train.optimizer",
         [&](auto& k, auto& v) {
             const auto kind = parse_optimizer_kind(v);
             if (!kind) bad_value(k, v, "sgd, rmsprop or adam");
             cfg.train.optimizer = *kind;
         }},
        {"train.rho",
         [&](auto& k, auto& v) { cfg.train.sparsity.rho = parse_number<double>(k, v, "a number"); }},
        {"train.beta",
         [&](auto& k, auto& v) { cfg.train.sparsity.beta = parse_number<double>(k, v, "a number"); }},
        {"train.seed",
         [&](auto& k, auto& v) { cfg.train.base_seed = parse_number<std::uint64_t>(k, v, "an unsigned integer"); }},
        {"ensemble.n",
         [&](auto& k, auto& v) { cfg.ensemble.n = parse_number<std::size_t>(k, v, "a count"); }},
        {"ensemble.alpha",
         [&](auto& k, auto& v) { cfg.ensemble.alpha = parse_number<double>(k, v, "a number"); }},
        {"ensemble.normalize_weights",
         [&](auto& k, auto& v) { cfg.ensemble.normalize_weights = parse_bool(k, v); }},
        {"run.workers",
         [&](auto& k, auto& v) { cfg.workers = parse_number<std::size_t>(k, v, "a count"); }},
        {"run.out_dir", [&](auto&, auto& v) { cfg.out_dir = resolve(v); }},
        {"baselines.bpnn", [&](auto& k, auto& v) { cfg.baselines.bpnn = parse_bool(k, v); }},
        {"baselines.elm", [&](auto& k, auto& v) { cfg.baselines.elm = parse_bool(k, v); }},
        {"baselines.bpnn_hidden",
         [&](auto& k, auto& v) { cfg.baselines.bpnn_config.hidden = parse_number<std::size_t>(k, v, "a count"); }},
        {"baselines.bpnn_learning_rate",
         [&](auto& k, auto& v) { cfg.baselines.bpnn_config.learning_rate = parse_number<double>(k, v, "a number"); }},
        {"baselines.bpnn_iters",
         [&](auto& k, auto& v) { cfg.baselines.bpnn_config.iters = parse_number<std::size_t>(k, v, "a count"); }},
        {"baselines.bpnn_optimizer",
         [&](auto& k, auto& v) {
             const auto kind = parse_optimizer_kind(v);
             if (!kind) bad_value(k, v, "sgd, rmsprop or adam");
             cfg.baselines.bpnn_config.optimizer = *kind;
         }},
        {"baselines.elm_hidden",
         [&](auto& k, auto& v) { cfg.baselines.elm_hidden = parse_number<std::size_t>(k, v, "a count"); }},
    };

    // data.dir must be applied before the per-file keys fall back to it.
    for (const auto& [key, value] : kv) {
        const auto h = handlers.find(key);
        if (h == handlers.end()) throw ConfigError("unknown config key '" + key + "'");
        h->second(key, value);
    }
    if (cfg.loads_path.empty()) cfg.loads_path = data_dir / "loads.csv";
    if (cfg.temps_path.empty()) cfg.temps_path = data_dir / "temps.csv";
    if (cfg.holidays_path.empty()) cfg.holidays_path = data_dir / "holidays.csv";
    cfg.out_dir = resolve(cfg.out_dir);

    try {
        cfg.stack.validate();
        cfg.train.validate();
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
    if (cfg.stack.input_size() != kFeatureCount)
        throw ConfigError("stack.layer_sizes must start with " + std::to_string(kFeatureCount));
    cfg.ensemble.validate();
    if (cfg.workers == 0) throw ConfigError("run.workers must be >= 1");
    for (unsigned k : cfg.lags)
        if (k == 0) throw ConfigError("split.lags entries must be >= 1");
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    return run_config_from(parse_key_values(in, path.string()), path.parent_path());
}

std::string describe(const RunConfig& cfg) {
    std::ostringstream os;
    auto range = [](const std::optional<DateRange>& r) {
        return r ? format_date(r->first) + ".." + format_date(r->last) : std::string("default");
    };
    os << "split.pretrain = " << range(cfg.pretrain_range) << '\n'
       << "split.finetune = " << range(cfg.finetune_range) << '\n'
       << "split.test = " << range(cfg.test_range) << '\n'
       << "split.lags = " << join(cfg.lags) << '\n'
       << "features.temperature_mode = "
       << (cfg.temperature_mode == TemperatureMode::weighted ? "weighted" : "argmax") << '\n'
       << "stack.layer_sizes = " << join(cfg.stack.layer_sizes) << '\n'
       << "train.learning_rate = " << fmt_double(cfg.train.learning_rate) << '\n'
       << "train.pretrain_iters = " << cfg.train.pretrain_iters << '\n'
       << "train.finetune_iters = " << cfg.train.finetune_iters << '\n'
       << "train.batch_size = " << cfg.train.batch_size << '\n'
       << "train.optimizer = " << to_string(cfg.train.optimizer) << '\n'
       << "train.rho = " << fmt_double(cfg.train.sparsity.rho) << '\n'
       << "train.beta = " << fmt_double(cfg.train.sparsity.beta) << '\n'
       << "train.seed = " << cfg.train.base_seed << '\n'
       << "ensemble.n = " << cfg.ensemble.n << '\n'
       << "ensemble.alpha = " << fmt_double(cfg.ensemble.alpha) << '\n'
       << "ensemble.normalize_weights = " << (cfg.ensemble.normalize_weights ? "true" : "false")
       << '\n';
    return os.str();
}

}  // namespace daen::cli
