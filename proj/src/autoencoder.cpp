#include "daen/autoencoder.hpp"

#include "daen/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace daen {

void SparsityConfig::validate() const {
    if (!(rho > 0.0 && rho < 1.0))
        throw ContractViolation("sparsity rho must lie in (0,1), got " + std::to_string(rho));
    if (!(beta >= 0.0))
        throw ContractViolation("sparsity beta must be >= 0, got " + std::to_string(beta));
}

AutoEncoder AutoEncoder::initialize(std::size_t input_size, std::size_t hidden_size,
                                    const SparsityConfig& sparsity, SeededRng& rng) {
    sparsity.validate();
    AutoEncoder ae;
    ae.weights = glorot_uniform(hidden_size, input_size, rng);
    ae.decoder_weights = ae.weights.transpose();
    ae.hidden_bias.assign(hidden_size, 0.0);
    ae.visible_bias.assign(input_size, 0.0);
    ae.sparsity = sparsity;
    return ae;
}

void AutoEncoder::validate() const {
    const bool ok = decoder_weights.rows() == weights.cols() &&
                    decoder_weights.cols() == weights.rows() &&
                    hidden_bias.size() == weights.rows() &&
                    visible_bias.size() == weights.cols();
    if (!ok)
        throw ContractViolation("autoencoder shapes inconsistent: W " + weights.shape_string() +
                                ", W_hat " + decoder_weights.shape_string() + ", p " +
                                std::to_string(hidden_bias.size()) + ", q " +
                                std::to_string(visible_bias.size()));
    sparsity.validate();
}

Vector encode(const AutoEncoder& ae, std::span<const double> x) {
    Vector a = matvec(ae.weights, x);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] += ae.hidden_bias[j];
    sigmoid_inplace(a);
    return a;
}

Vector decode(const AutoEncoder& ae, std::span<const double> h) {
    Vector a = matvec(ae.decoder_weights, h);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += ae.visible_bias[i];
    sigmoid_inplace(a);
    return a;
}

Matrix encode_batch(const AutoEncoder& ae, const Matrix& batch) {
    Matrix a = matmul_bt(batch, ae.weights);
    add_row_bias(a, ae.hidden_bias);
    sigmoid_inplace(a.values());
    return a;
}

Matrix decode_batch(const AutoEncoder& ae, const Matrix& hidden) {
    Matrix a = matmul_bt(hidden, ae.decoder_weights);
    add_row_bias(a, ae.visible_bias);
    sigmoid_inplace(a.values());
    return a;
}

double reconstruction_loss(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ContractViolation("reconstruction_loss: lengths " + std::to_string(x.size()) +
                                " and " + std::to_string(y.size()));
    double loss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= 0.0 && x[i] <= 1.0))
            throw std::domain_error("reconstruction_loss: input entry " + std::to_string(i) +
                                    " = " + std::to_string(x[i]) + " is outside [0,1]");
        if (!(y[i] > 0.0 && y[i] < 1.0))
            throw std::domain_error("reconstruction_loss: output entry " + std::to_string(i) +
                                    " = " + std::to_string(y[i]) + " is not inside (0,1)");
        loss -= x[i] * std::log(y[i]) + (1.0 - x[i]) * std::log(1.0 - y[i]);
    }
    return loss;
}

void require_unit_interval(const Matrix& batch) {
    const auto v = batch.values();
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!(v[k] >= 0.0 && v[k] <= 1.0))
            throw std::domain_error("feature (" + std::to_string(k / batch.cols()) + "," +
                                    std::to_string(k % batch.cols()) + ") = " +
                                    std::to_string(v[k]) + " is outside [0,1]");
    }
}

namespace {

void require_batch(const AutoEncoder& ae, const Matrix& batch) {
    if (batch.rows() == 0) throw ContractViolation("empty batch");
    if (batch.cols() != ae.input_size())
        throw ContractViolation("batch width " + std::to_string(batch.cols()) +
                                " does not match autoencoder input size " +
                                std::to_string(ae.input_size()));
}

// -[x log s(a) + (1-x) log(1 - s(a))] = softplus(a) - x a
double cross_entropy_from_logit(double x, double a) noexcept {
    const double softplus = std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a)));
    return softplus - x * a;
}

struct Forward {
    Matrix hidden;       // N x m, sigmoid outputs
    Matrix logits;       // N x n, decoder pre-activations
    Vector rho_hat;      // m
    double recon = 0.0;  // mean reconstruction loss
};

Forward forward(const AutoEncoder& ae, const Matrix& batch) {
    require_batch(ae, batch);
    require_unit_interval(batch);
    Forward f;
    f.hidden = encode_batch(ae, batch);
    f.logits = matmul_bt(f.hidden, ae.decoder_weights);
    add_row_bias(f.logits, ae.visible_bias);

    const double n = static_cast<double>(batch.rows());
    double total = 0.0;
    const auto xs = batch.values();
    const auto as = f.logits.values();
    for (std::size_t k = 0; k < xs.size(); ++k) total += cross_entropy_from_logit(xs[k], as[k]);
    f.recon = total / n;

    f.rho_hat = column_sums(f.hidden);
    for (double& r : f.rho_hat) r /= n;
    return f;
}

}  // namespace

Vector mean_activation(const AutoEncoder& ae, const Matrix& batch) {
    require_batch(ae, batch);
    Vector rho_hat = column_sums(encode_batch(ae, batch));
    for (double& r : rho_hat) r /= static_cast<double>(batch.rows());
    return rho_hat;
}

double kl_penalty(double rho, std::span<const double> rho_hat) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("kl_penalty: rho must lie in (0,1)");
    double total = 0.0;
    for (std::size_t j = 0; j < rho_hat.size(); ++j) {
        const double r = rho_hat[j];
        if (!(r > 0.0 && r < 1.0))
            throw std::domain_error("kl_penalty: rho_hat[" + std::to_string(j) + "] = " +
                                    std::to_string(r) + " is not inside (0,1)");
        total += rho * std::log(rho / r) + (1.0 - rho) * std::log((1.0 - rho) / (1.0 - r));
    }
    return total;
}

double batch_loss(const AutoEncoder& ae, const Matrix& batch) {
    return forward(ae, batch).recon;
}

double sparse_batch_loss(const AutoEncoder& ae, const Matrix& batch) {
    const Forward f = forward(ae, batch);
    if (ae.sparsity.beta == 0.0) return f.recon;
    return f.recon + ae.sparsity.beta * kl_penalty(ae.sparsity.rho, f.rho_hat);
}

AeLossAndGradients loss_and_gradients(const AutoEncoder& ae, const Matrix& batch) {
    const Forward f = forward(ae, batch);
    const double n = static_cast<double>(batch.rows());
    const double rho = ae.sparsity.rho;
    const double beta = ae.sparsity.beta;

    AeLossAndGradients out;
    out.loss = f.recon;
    if (beta != 0.0) out.loss += beta * kl_penalty(rho, f.rho_hat);

    // d(mean loss)/d(decoder logits) = (y - x) / N
    Matrix d_out = f.logits;
    {
        auto d = d_out.values();
        const auto xs = batch.values();
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = (sigmoid(d[k]) - xs[k]) / n;
    }
    out.grads.decoder_weights = matmul_at(d_out, f.hidden);
    out.grads.visible_bias = column_sums(d_out);

    Matrix d_hidden = matmul(d_out, ae.decoder_weights);
    if (beta != 0.0) {
        // Each sample contributes h/N to rho_hat.
        Vector kl_term(f.rho_hat.size());
        for (std::size_t j = 0; j < kl_term.size(); ++j) {
            const double r = f.rho_hat[j];
            kl_term[j] = beta * (-rho / r + (1.0 - rho) / (1.0 - r)) / n;
        }
        add_row_bias(d_hidden, kl_term);
    }
    {
        auto d = d_hidden.values();
        const auto h = f.hidden.values();
        for (std::size_t k = 0; k < d.size(); ++k) d[k] *= h[k] * (1.0 - h[k]);
    }
    out.grads.weights = matmul_at(d_hidden, batch);
    out.grads.hidden_bias = column_sums(d_hidden);
    return out;
}

AeGradients gradients(const AutoEncoder& ae, const Matrix& batch) {
    return loss_and_gradients(ae, batch).grads;
}

}  // namespace daen
