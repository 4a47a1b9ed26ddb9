#include "daen/cli/checkpoint.hpp"

#include "daen/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace daen::cli {

using nlohmann::ordered_json;

namespace {

ordered_json matrix_json(const Matrix& m) {
    return ordered_json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.storage()}};
}

Matrix matrix_from(const ordered_json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    auto data = j.at("data").get<Vector>();
    if (data.size() != rows * cols)
        throw DataError("matrix data has " + std::to_string(data.size()) + " values, expected " +
                        std::to_string(rows) + "x" + std::to_string(cols));
    return Matrix(rows, cols, std::move(data));
}

ordered_json snapshot_json(const std::string& snapshot) {
    ordered_json out = ordered_json::object();
    std::istringstream in(snapshot);
    for (std::string line; std::getline(in, line);) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        out[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return out;
}

std::string snapshot_text(const ordered_json& j) {
    std::string out;
    for (const auto& [k, v] : j.items()) out += k + " = " + v.get<std::string>() + "\n";
    return out;
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& cp) {
    ordered_json layers = ordered_json::array();
    for (const auto& ae : cp.model.encoders) {
        layers.push_back({{"W", matrix_json(ae.weights)},
                          {"W_hat", matrix_json(ae.decoder_weights)},
                          {"p", ae.hidden_bias},
                          {"q", ae.visible_bias},
                          {"rho", ae.sparsity.rho},
                          {"beta", ae.sparsity.beta}});
    }
    ordered_json j{
        {"format_version", cp.format_version},
        {"hour", cp.hour},
        {"layer_sizes", cp.model.spec.layer_sizes},
        {"layers", std::move(layers)},
        {"head", {{"weights", cp.model.head_weights}, {"bias", cp.model.head_bias}}},
        {"norm_params", {{"l_min", cp.norm.l_min}, {"l_max", cp.norm.l_max}}},
        {"temperature_mode", cp.temperature_mode == TemperatureMode::weighted ? "weighted" : "argmax"},
        {"config", snapshot_json(cp.config_snapshot)},
        {"base_seed", cp.base_seed},
    };
    return j.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text, const std::string& source_name) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw DataError(source_name + ": not valid JSON: " + e.what());
    }
    Checkpoint cp;
    try {
        cp.format_version = j.at("format_version").get<int>();
        if (cp.format_version != kCheckpointFormatVersion)
            throw ConfigError(source_name + ": unsupported checkpoint format_version " +
                              std::to_string(cp.format_version));
        cp.hour = j.at("hour").get<std::size_t>();
        cp.model.spec.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
        for (const auto& l : j.at("layers")) {
            AutoEncoder ae;
            ae.weights = matrix_from(l.at("W"));
            ae.decoder_weights = matrix_from(l.at("W_hat"));
            ae.hidden_bias = l.at("p").get<Vector>();
            ae.visible_bias = l.at("q").get<Vector>();
            ae.sparsity.rho = l.at("rho").get<double>();
            ae.sparsity.beta = l.at("beta").get<double>();
            cp.model.encoders.push_back(std::move(ae));
        }
        cp.model.head_weights = j.at("head").at("weights").get<Vector>();
        cp.model.head_bias = j.at("head").at("bias").get<double>();
        cp.norm.l_min = j.at("norm_params").at("l_min").get<double>();
        cp.norm.l_max = j.at("norm_params").at("l_max").get<double>();
        const auto mode = j.at("temperature_mode").get<std::string>();
        if (mode == "weighted") cp.temperature_mode = TemperatureMode::weighted;
        else if (mode == "argmax") cp.temperature_mode = TemperatureMode::argmax;
        else throw DataError(source_name + ": unknown temperature_mode '" + mode + "'");
        cp.config_snapshot = snapshot_text(j.at("config"));
        cp.base_seed = j.at("base_seed").get<std::uint64_t>();
    } catch (const ordered_json::exception& e) {
        throw DataError(source_name + ": malformed checkpoint: " + e.what());
    }
    if (cp.hour < 1 || cp.hour > kHoursPerDay)
        throw DataError(source_name + ": hour " + std::to_string(cp.hour) + " out of range");
    try {
        cp.model.validate();
        cp.norm.validate();
    } catch (const std::exception& e) {
        throw DataError(source_name + ": inconsistent checkpoint: " + e.what());
    }
    return cp;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& out_dir, std::size_t hour) {
    char name[32];
    std::snprintf(name, sizeof name, "hour_%02zu.json", hour);
    return out_dir / "checkpoints" / name;
}

std::filesystem::path log_path(const std::filesystem::path& out_dir, std::size_t hour) {
    char name[32];
    std::snprintf(name, sizeof name, "hour_%02zu.csv", hour);
    return out_dir / "logs" / name;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << checkpoint_to_json(cp);
    if (!out) throw ConfigError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open checkpoint " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return checkpoint_from_json(ss.str(), path.string());
}

ModelBank load_bank(const std::filesystem::path& out_dir) {
    ModelBank bank;
    for (std::size_t h = 1; h <= kHoursPerDay; ++h) {
        const auto path = checkpoint_path(out_dir, h);
        Checkpoint cp = load_checkpoint(path);
        if (cp.hour != h)
            throw DataError(path.string() + ": holds hour " + std::to_string(cp.hour));
        if (h == 1) {
            bank.norm = cp.norm;
            bank.temperature_mode = cp.temperature_mode;
            bank.config.base_seed = cp.base_seed;
        } else if (!(cp.norm == bank.norm) || cp.temperature_mode != bank.temperature_mode) {
            throw DataError(path.string() + ": scaling or feature mode differs from hour 1");
        }
        bank.models.push_back(std::move(cp.model));
    }
    try {
        bank.validate();
    } catch (const ContractViolation& e) {
        throw DataError(out_dir.string() + ": " + e.what());
    }
    return bank;
}

}  // namespace daen::cli
