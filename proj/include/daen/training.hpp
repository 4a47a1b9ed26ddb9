#pragma once

#include "daen/autoencoder.hpp"
#include "daen/numkit.hpp"
#include "daen/optimizers.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace daen {

// Layer widths of the encoder stack, input first, e.g. {57, 24, 12}. The
// scalar regression head is implied and not listed.
struct StackSpec {
    std::vector<std::size_t> layer_sizes;

    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t top_size() const { return layer_sizes.back(); }
    std::size_t encoder_count() const { return layer_sizes.size() - 1; }

    // >= 2 entries, all positive.
    void validate() const;

    friend bool operator==(const StackSpec&, const StackSpec&) = default;
};

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t pretrain_iters = 2000;
    std::size_t finetune_iters = 250;
    std::size_t batch_size = 0;  // 0 means full batch
    OptimizerKind optimizer = OptimizerKind::rmsprop;
    SparsityConfig sparsity;
    std::uint64_t base_seed = 42;

    void validate() const;
    OptimizerSettings optimizer_settings() const;
};

enum class TrainPhase { pretrain, finetune };

struct LogEntry {
    TrainPhase phase;
    std::size_t layer;      // 1-based encoder index; 0 for fine-tuning
    std::size_t iteration;  // 1-based within the phase/layer
    double loss;            // objective before the update of this iteration
};

using TrainLog = std::vector<LogEntry>;

// Writes `phase,layer,iteration,loss` CSV with a header row.
void write_log_csv(std::ostream& out, const TrainLog& log);

// Supervised pairs: one input row per target value.
struct LabelledSet {
    Matrix inputs;
    Vector targets;

    std::size_t size() const noexcept { return targets.size(); }
};

// Encoder stack plus linear regression head. Decoder halves are kept so a
// checkpoint can resume pretraining; they take no part in prediction.
struct DaenModel {
    StackSpec spec;
    std::vector<AutoEncoder> encoders;
    Vector head_weights;
    double head_bias = 0.0;

    // Encoder dims chain and the head matches the top layer.
    void validate() const;

    friend bool operator==(const DaenModel&, const DaenModel&) = default;
};

struct PretrainResult {
    std::vector<AutoEncoder> encoders;
    TrainLog log;
};

// Greedy layer-wise pretraining: each layer minimizes sparse_batch_loss on
// the encodings produced by the already-trained layers below it.
PretrainResult pretrain_stack(const StackSpec& spec, const Matrix& data, const TrainConfig& cfg,
                              SeededRng& rng);

// Head weights drawn uniform on +-sqrt(6/(top+1)), bias zero.
DaenModel assemble_model(const StackSpec& spec, std::vector<AutoEncoder> encoders,
                         SeededRng& rng);

struct FinetuneResult {
    DaenModel model;
    TrainLog log;
};

// End-to-end gradient descent on mean squared error; updates every encoder
// (W, p) and the head. Decoder halves are left untouched.
FinetuneResult finetune(DaenModel model, const LabelledSet& pairs, const TrainConfig& cfg);

struct FinetuneGradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
    Vector head_weights;
    double head_bias = 0.0;
};

struct FinetuneLossAndGradients {
    double loss = 0.0;
    FinetuneGradients grads;
};

double finetune_loss(const DaenModel& model, const LabelledSet& pairs);
FinetuneLossAndGradients finetune_loss_and_gradients(const DaenModel& model,
                                                     const LabelledSet& pairs);

// Top-layer encoding of every input row.
Matrix encode_stack(const DaenModel& model, const Matrix& inputs);
Matrix encode_stack(std::span<const AutoEncoder> encoders, const Matrix& inputs);

// Normalized-load prediction; unbounded (the head is linear).
double predict(const DaenModel& model, std::span<const double> x);
Vector predict_batch(const DaenModel& model, const Matrix& inputs);

}  // namespace daen
