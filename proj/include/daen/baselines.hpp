#pragma once

#include "daen/dataset.hpp"
#include "daen/numkit.hpp"
#include "daen/optimizers.hpp"
#include "daen/training.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace daen {

// Single hidden layer network: sigmoid hidden units, linear output.
struct BpnnModel {
    Matrix hidden_weights;  // hidden x input
    Vector hidden_bias;
    Vector output_weights;  // hidden
    double output_bias = 0.0;

    void validate() const;
    friend bool operator==(const BpnnModel&, const BpnnModel&) = default;
};

struct BpnnConfig {
    std::size_t hidden = 24;
    double learning_rate = 0.01;
    std::size_t iters = 2000;
    OptimizerKind optimizer = OptimizerKind::sgd;
};

BpnnModel bpnn_init(std::size_t input_size, std::size_t hidden, SeededRng& rng);

struct BpnnGradients {
    Matrix hidden_weights;
    Vector hidden_bias;
    Vector output_weights;
    double output_bias = 0.0;
};

// Mean squared error over the pairs and its gradient.
double bpnn_loss(const BpnnModel& model, const LabelledSet& pairs);
std::pair<double, BpnnGradients> bpnn_loss_and_gradients(const BpnnModel& model,
                                                         const LabelledSet& pairs);

// Plain full-batch backpropagation from a random start; no pretraining.
BpnnModel bpnn_train(const LabelledSet& pairs, const BpnnConfig& cfg, SeededRng& rng);

// Frozen random sigmoid hidden layer and a least-squares readout (no bias).
struct ElmModel {
    Matrix hidden_weights;  // hidden x input, uniform on [-1, 1)
    Vector hidden_bias;     // uniform on [-1, 1)
    Vector output_weights;

    friend bool operator==(const ElmModel&, const ElmModel&) = default;
};

ElmModel elm_init(std::size_t input_size, std::size_t hidden, SeededRng& rng);
// Hidden activations H (samples x hidden).
Matrix elm_hidden(const ElmModel& model, const Matrix& inputs);
// Sets the readout to the minimum-norm least-squares solution of H w = t;
// the hidden layer is not modified.
void elm_fit(ElmModel& model, const LabelledSet& pairs);
ElmModel elm_train(const LabelledSet& pairs, std::size_t hidden, SeededRng& rng);

// Minimum-norm solution of min ||a x - b||; singular values below
// rcond * sigma_max are treated as zero.
Vector min_norm_least_squares(const Matrix& a, std::span<const double> b, double rcond = 1e-10);

// ||H w - t|| for the fitted model.
double elm_residual(const ElmModel& model, const LabelledSet& pairs);

double baseline_predict(const BpnnModel& model, std::span<const double> x);
double baseline_predict(const ElmModel& model, std::span<const double> x);

// Per-hour baseline banks trained on the fine-tuning pairs only.
struct BaselineBanks {
    std::vector<BpnnModel> bpnn;  // index hour-1, empty when disabled
    std::vector<ElmModel> elm;
};

struct BaselineSettings {
    bool bpnn = true;
    bool elm = true;
    BpnnConfig bpnn_config;
    std::size_t elm_hidden = 30;
};

// Seeds: base_seed + 1000 + hour for BPNN, base_seed + 2000 + hour for ELM.
BaselineBanks train_baselines(const SampleSet& samples, const BaselineSettings& settings,
                              std::uint64_t base_seed, std::size_t workers);

}  // namespace daen
