#include "daen/optimizers.hpp"

#include "daen/errors.hpp"

#include <cmath>

namespace daen {

std::string_view to_string(OptimizerKind kind) noexcept {
    switch (kind) {
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::rmsprop: return "rmsprop";
        case OptimizerKind::adam: return "adam";
    }
    return "unknown";
}

std::optional<OptimizerKind> parse_optimizer_kind(std::string_view name) noexcept {
    if (name == "sgd") return OptimizerKind::sgd;
    if (name == "rmsprop") return OptimizerKind::rmsprop;
    if (name == "adam") return OptimizerKind::adam;
    return std::nullopt;
}

Optimizer::Optimizer(OptimizerSettings settings) : settings_(settings) {
    if (!(settings_.learning_rate > 0.0))
        throw ContractViolation("optimizer learning rate must be positive");
}

void Optimizer::ensure_caches(const ParamBundle& params) {
    if (steps_ == 0 && second_moment_.empty()) {
        for (const auto& block : params) {
            second_moment_.emplace_back(block.size(), 0.0);
            if (settings_.kind == OptimizerKind::adam) first_moment_.emplace_back(block.size(), 0.0);
        }
        return;
    }
    if (params.size() != second_moment_.size())
        throw ContractViolation("optimizer: bundle has " + std::to_string(params.size()) +
                                " blocks, caches were built for " +
                                std::to_string(second_moment_.size()));
    for (std::size_t b = 0; b < params.size(); ++b) {
        if (params[b].size() != second_moment_[b].size())
            throw ContractViolation("optimizer: block " + std::to_string(b) +
                                    " changed size since the first step");
    }
}

void Optimizer::step(const ParamBundle& params, const GradBundle& grads) {
    if (params.size() != grads.size())
        throw ContractViolation("optimizer: " + std::to_string(params.size()) +
                                " parameter blocks but " + std::to_string(grads.size()) +
                                " gradient blocks");
    for (std::size_t b = 0; b < params.size(); ++b) {
        if (params[b].size() != grads[b].size())
            throw ContractViolation("optimizer: block " + std::to_string(b) + " has " +
                                    std::to_string(params[b].size()) + " parameters but " +
                                    std::to_string(grads[b].size()) + " gradients");
    }
    ensure_caches(params);
    ++steps_;

    const double lr = settings_.learning_rate;
    const double eps = settings_.epsilon;
    switch (settings_.kind) {
        case OptimizerKind::sgd:
            for (std::size_t b = 0; b < params.size(); ++b)
                for (std::size_t i = 0; i < params[b].size(); ++i) params[b][i] -= lr * grads[b][i];
            break;
        case OptimizerKind::rmsprop: {
            const double decay = settings_.rms_decay;
            for (std::size_t b = 0; b < params.size(); ++b) {
                auto& cache = second_moment_[b];
                for (std::size_t i = 0; i < params[b].size(); ++i) {
                    const double g = grads[b][i];
                    cache[i] = decay * cache[i] + (1.0 - decay) * g * g;
                    params[b][i] -= lr * g / (std::sqrt(cache[i]) + eps);
                }
            }
            break;
        }
        case OptimizerKind::adam: {
            const double b1 = settings_.adam_beta1;
            const double b2 = settings_.adam_beta2;
            const double t = static_cast<double>(steps_);
            const double c1 = 1.0 - std::pow(b1, t);
            const double c2 = 1.0 - std::pow(b2, t);
            for (std::size_t b = 0; b < params.size(); ++b) {
                auto& m = first_moment_[b];
                auto& v = second_moment_[b];
                for (std::size_t i = 0; i < params[b].size(); ++i) {
                    const double g = grads[b][i];
                    m[i] = b1 * m[i] + (1.0 - b1) * g;
                    v[i] = b2 * v[i] + (1.0 - b2) * g * g;
                    params[b][i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
                }
            }
            break;
        }
    }
}

}  // namespace daen
