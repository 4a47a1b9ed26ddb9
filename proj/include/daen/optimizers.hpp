#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace daen {

enum class OptimizerKind { sgd, rmsprop, adam };

std::string_view to_string(OptimizerKind kind) noexcept;
std::optional<OptimizerKind> parse_optimizer_kind(std::string_view name) noexcept;

struct OptimizerSettings {
    OptimizerKind kind = OptimizerKind::rmsprop;
    double learning_rate = 0.01;
    double rms_decay = 0.9;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double epsilon = 1e-8;
};

// A parameter bundle is an ordered list of flat parameter blocks; the
// gradient bundle passed to step() must have the same block sizes.
using ParamBundle = std::vector<std::span<double>>;
using GradBundle = std::vector<std::span<const double>>;

// Update rule plus its per-parameter caches. Caches are sized on the first
// step and every later step must present the same block layout.
class Optimizer {
public:
    explicit Optimizer(OptimizerSettings settings);

    const OptimizerSettings& settings() const noexcept { return settings_; }
    std::size_t steps_taken() const noexcept { return steps_; }

    // SGD:     theta -= lr * g
    // RMSProp: c = decay*c + (1-decay)*g^2; theta -= lr * g / (sqrt(c) + eps)
    // Adam:    bias-corrected first/second moments
    void step(const ParamBundle& params, const GradBundle& grads);

private:
    void ensure_caches(const ParamBundle& params);

    OptimizerSettings settings_;
    std::size_t steps_ = 0;
    std::vector<std::vector<double>> first_moment_;
    std::vector<std::vector<double>> second_moment_;
};

}  // namespace daen
