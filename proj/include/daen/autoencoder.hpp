#pragma once

#include "daen/numkit.hpp"

#include <cstddef>
#include <span>

namespace daen {

struct SparsityConfig {
    double rho = 0.05;  // target mean hidden activation
    double beta = 0.1;  // weight of the KL penalty

    // Throws ContractViolation unless 0 < rho < 1 and beta >= 0.
    void validate() const;
    friend bool operator==(const SparsityConfig&, const SparsityConfig&) = default;
};

// One sigmoid encode/decode layer. `weights` is hidden x input, the decoder
// is input x hidden and starts out as the transpose of `weights`; after
// construction the two are trained independently.
struct AutoEncoder {
    Matrix weights;
    Matrix decoder_weights;
    Vector hidden_bias;
    Vector visible_bias;
    SparsityConfig sparsity;

    static AutoEncoder initialize(std::size_t input_size, std::size_t hidden_size,
                                  const SparsityConfig& sparsity, SeededRng& rng);

    std::size_t input_size() const noexcept { return weights.cols(); }
    std::size_t hidden_size() const noexcept { return weights.rows(); }

    // Shape consistency among the four parameter blocks.
    void validate() const;

    friend bool operator==(const AutoEncoder&, const AutoEncoder&) = default;
};

// Gradient bundle shaped like the AutoEncoder parameters.
struct AeGradients {
    Matrix weights;
    Matrix decoder_weights;
    Vector hidden_bias;
    Vector visible_bias;
};

Vector encode(const AutoEncoder& ae, std::span<const double> x);
Vector decode(const AutoEncoder& ae, std::span<const double> h);

// Row-wise versions: every row of `batch` is one sample.
Matrix encode_batch(const AutoEncoder& ae, const Matrix& batch);
Matrix decode_batch(const AutoEncoder& ae, const Matrix& hidden);

// Binary cross-entropy -sum[x log y + (1-x) log(1-y)], natural log.
// x must lie in [0,1] and y strictly inside (0,1); std::domain_error otherwise.
double reconstruction_loss(std::span<const double> x, std::span<const double> y);

// Mean hidden activation per unit over the batch.
Vector mean_activation(const AutoEncoder& ae, const Matrix& batch);

// sum_j KL(rho || rho_hat_j) for Bernoulli distributions, natural log.
double kl_penalty(double rho, std::span<const double> rho_hat);

// Mean reconstruction loss over the batch.
double batch_loss(const AutoEncoder& ae, const Matrix& batch);
// Mean reconstruction loss plus beta * kl_penalty(rho, mean_activation).
double sparse_batch_loss(const AutoEncoder& ae, const Matrix& batch);

// Analytic gradient of sparse_batch_loss with respect to every parameter,
// including the KL term's dependence on the encoder through rho_hat.
AeGradients gradients(const AutoEncoder& ae, const Matrix& batch);

struct AeLossAndGradients {
    double loss = 0.0;
    AeGradients grads;
};

// Single forward/backward pass; `loss` equals sparse_batch_loss(ae, batch).
AeLossAndGradients loss_and_gradients(const AutoEncoder& ae, const Matrix& batch);

// Throws std::domain_error naming the first entry outside [0,1].
void require_unit_interval(const Matrix& batch);

}  // namespace daen
