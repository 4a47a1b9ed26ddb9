// Fixtures and parameter packing shared by the unit and acceptance tests.
#pragma once

#include "daen/autoencoder.hpp"
#include "daen/baselines.hpp"
#include "daen/numkit.hpp"
#include "daen/training.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace fixture {

// Hourly actual and forecast loads (MW) of the published test day.
inline constexpr std::array<double, 24> kPublishedActual{
    668, 642, 623, 602, 618, 619, 599, 602, 643, 669, 700, 688,
    710, 717, 700, 681, 704, 691, 692, 700, 648, 635, 681, 692};
inline constexpr std::array<double, 24> kPublishedForecast{
    673.3406, 650.3174, 625.4593, 620.9128, 621.4146, 611.1831, 601.7022, 604.8622,
    640.9628, 655.8308, 679.4819, 689.8511, 700.154,  713.8212, 706.6741, 687.7114,
    691.7314, 684.2487, 688.7641, 705.1727, 675.6137, 656.4427, 689.8683, 690.3376};

inline oracle::Rows rows_of(const daen::Matrix& m) {
    oracle::Rows out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
    return out;
}

inline daen::Matrix random_matrix(std::size_t rows, std::size_t cols, daen::SeededRng& rng,
                                  double lo = -1.0, double hi = 1.0) {
    daen::Matrix m(rows, cols);
    for (double& v : m.values()) v = rng.uniform(lo, hi);
    return m;
}

inline daen::Vector random_vector(std::size_t n, daen::SeededRng& rng, double lo = -1.0,
                                  double hi = 1.0) {
    daen::Vector v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Autoencoder with fully random (untied) parameters.
inline daen::AutoEncoder random_autoencoder(std::size_t in, std::size_t hidden, double rho,
                                            double beta, daen::SeededRng& rng) {
    daen::AutoEncoder ae;
    ae.weights = random_matrix(hidden, in, rng);
    ae.decoder_weights = random_matrix(in, hidden, rng);
    ae.hidden_bias = random_vector(hidden, rng, -0.5, 0.5);
    ae.visible_bias = random_vector(in, rng, -0.5, 0.5);
    ae.sparsity = {rho, beta};
    return ae;
}

inline void append(std::vector<double>& out, std::span<const double> v) {
    out.insert(out.end(), v.begin(), v.end());
}

inline void take(std::span<double> dst, const std::vector<double>& flat, std::size_t& pos) {
    for (double& d : dst) d = flat[pos++];
}

inline std::vector<double> pack(const daen::AutoEncoder& ae) {
    std::vector<double> f;
    append(f, ae.weights.values());
    append(f, ae.decoder_weights.values());
    append(f, ae.hidden_bias);
    append(f, ae.visible_bias);
    return f;
}

inline daen::AutoEncoder unpack(daen::AutoEncoder ae, const std::vector<double>& f) {
    std::size_t pos = 0;
    take(ae.weights.values(), f, pos);
    take(ae.decoder_weights.values(), f, pos);
    take(ae.hidden_bias, f, pos);
    take(ae.visible_bias, f, pos);
    return ae;
}

inline std::vector<double> pack(const daen::AeGradients& g) {
    std::vector<double> f;
    append(f, g.weights.values());
    append(f, g.decoder_weights.values());
    append(f, g.hidden_bias);
    append(f, g.visible_bias);
    return f;
}

// Fine-tuned parameters only: encoder W and p, then the head.
inline std::vector<double> pack(const daen::DaenModel& m) {
    std::vector<double> f;
    for (const auto& e : m.encoders) {
        append(f, e.weights.values());
        append(f, e.hidden_bias);
    }
    append(f, m.head_weights);
    f.push_back(m.head_bias);
    return f;
}

inline daen::DaenModel unpack(daen::DaenModel m, const std::vector<double>& f) {
    std::size_t pos = 0;
    for (auto& e : m.encoders) {
        take(e.weights.values(), f, pos);
        take(e.hidden_bias, f, pos);
    }
    take(m.head_weights, f, pos);
    m.head_bias = f[pos];
    return m;
}

inline std::vector<double> pack(const daen::FinetuneGradients& g) {
    std::vector<double> f;
    for (std::size_t l = 0; l < g.weights.size(); ++l) {
        append(f, g.weights[l].values());
        append(f, g.biases[l]);
    }
    append(f, g.head_weights);
    f.push_back(g.head_bias);
    return f;
}

inline std::vector<double> pack(const daen::BpnnModel& m) {
    std::vector<double> f;
    append(f, m.hidden_weights.values());
    append(f, m.hidden_bias);
    append(f, m.output_weights);
    f.push_back(m.output_bias);
    return f;
}

inline daen::BpnnModel unpack(daen::BpnnModel m, const std::vector<double>& f) {
    std::size_t pos = 0;
    take(m.hidden_weights.values(), f, pos);
    take(m.hidden_bias, f, pos);
    take(m.output_weights, f, pos);
    m.output_bias = f[pos];
    return m;
}

inline std::vector<double> pack(const daen::BpnnGradients& g) {
    std::vector<double> f;
    append(f, g.hidden_weights.values());
    append(f, g.hidden_bias);
    append(f, g.output_weights);
    f.push_back(g.output_bias);
    return f;
}

inline daen::DaenModel random_model(const daen::StackSpec& spec, daen::SeededRng& rng) {
    daen::DaenModel m;
    m.spec = spec;
    for (std::size_t l = 0; l < spec.encoder_count(); ++l)
        m.encoders.push_back(random_autoencoder(spec.layer_sizes[l], spec.layer_sizes[l + 1], 0.05,
                                                0.1, rng));
    m.head_weights = random_vector(spec.top_size(), rng);
    m.head_bias = rng.uniform(-0.5, 0.5);
    return m;
}

inline daen::LabelledSet random_pairs(std::size_t n, std::size_t dim, daen::SeededRng& rng) {
    daen::LabelledSet s;
    s.inputs = random_matrix(n, dim, rng, 0.0, 1.0);
    s.targets = random_vector(n, rng, 0.0, 1.0);
    return s;
}

// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::random_device rd;
        path = std::filesystem::temp_directory_path() /
               ("daen_test_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixture
