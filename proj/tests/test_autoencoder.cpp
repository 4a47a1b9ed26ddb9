#include "doctest.h"

#include "daen/autoencoder.hpp"
#include "daen/errors.hpp"

#include <cmath>

#include "support.hpp"

using namespace daen;

namespace {

AutoEncoder zero_autoencoder(std::size_t in, std::size_t hidden) {
    AutoEncoder ae;
    ae.weights = Matrix(hidden, in, 0.0);
    ae.decoder_weights = Matrix(in, hidden, 0.0);
    ae.hidden_bias.assign(hidden, 0.0);
    ae.visible_bias.assign(in, 0.0);
    return ae;
}

Matrix unit_batch(std::size_t n, std::size_t dim, SeededRng& rng) {
    return fixture::random_matrix(n, dim, rng, 0.0, 1.0);
}

double gradient_error(const AutoEncoder& ae, const Matrix& batch) {
    const auto analytic = fixture::pack(gradients(ae, batch));
    const auto numeric = oracle::central_difference(
        [&](const std::vector<double>& f) { return sparse_batch_loss(fixture::unpack(ae, f), batch); },
        fixture::pack(ae));
    return oracle::max_relative_error(analytic, numeric);
}

}  // namespace

TEST_CASE("encode with zero weights is one half everywhere") {
    const AutoEncoder ae = zero_autoencoder(4, 3);
    for (double v : encode(ae, Vector{0.2, 0.9, 0.0, 1.0})) CHECK(v == 0.5);
    AutoEncoder id = zero_autoencoder(3, 3);
    id.weights = Matrix::identity(3);
    for (double v : encode(id, Vector{0, 0, 0})) CHECK(v == 0.5);
    for (double v : decode(ae, Vector{0.3, 0.1, 0.7})) CHECK(v == 0.5);
}

TEST_CASE("encode and decode match a hand-rolled forward pass") {
    SeededRng rng(4);
    const AutoEncoder ae = fixture::random_autoencoder(4, 3, 0.05, 0.1, rng);
    const Vector x = fixture::random_vector(4, rng, 0.0, 1.0);
    const auto h_ref = oracle::affine_sigmoid(fixture::rows_of(ae.weights), ae.hidden_bias, x);
    const Vector h = encode(ae, x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(h[i] == doctest::Approx(h_ref[i]).epsilon(1e-14));
    const auto y_ref = oracle::affine_sigmoid(fixture::rows_of(ae.decoder_weights), ae.visible_bias, h);
    const Vector y = decode(ae, h);
    for (std::size_t i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(y_ref[i]).epsilon(1e-14));

    const Matrix batch = unit_batch(5, 4, rng);
    const Matrix hb = encode_batch(ae, batch);
    for (std::size_t r = 0; r < 5; ++r) {
        const Vector row(batch.row(r).begin(), batch.row(r).end());
        const Vector single = encode(ae, row);
        for (std::size_t c = 0; c < 3; ++c) CHECK(hb(r, c) == doctest::Approx(single[c]).epsilon(1e-14));
    }
}

TEST_CASE("fresh autoencoder decodes through the transposed encoder") {
    SeededRng rng(5);
    const AutoEncoder ae = AutoEncoder::initialize(6, 4, {}, rng);
    CHECK(ae.decoder_weights == ae.weights.transpose());
    for (double v : ae.hidden_bias) CHECK(v == 0.0);
    for (double v : ae.visible_bias) CHECK(v == 0.0);
    CHECK_NOTHROW(ae.validate());
}

TEST_CASE("activations stay strictly inside the unit interval") {
    SeededRng rng(6);
    const AutoEncoder ae = fixture::random_autoencoder(5, 4, 0.05, 0.1, rng);
    for (int i = 0; i < 100; ++i) {
        const Vector x = fixture::random_vector(5, rng, -20.0, 20.0);
        for (double v : encode(ae, x)) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
        for (double v : decode(ae, encode(ae, x))) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("reconstruction loss values") {
    const Vector half(6, 0.5);
    CHECK(reconstruction_loss(half, half) == doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(reconstruction_loss(Vector{1.0}, Vector{0.9}) == doctest::Approx(0.10536).epsilon(1e-4));
    CHECK(reconstruction_loss(Vector{1.0}, Vector{0.9}) == doctest::Approx(-std::log(0.9)).epsilon(1e-14));

    SeededRng rng(2);
    const Vector x = fixture::random_vector(5, rng, 0.05, 0.95);
    const Vector y = fixture::random_vector(5, rng, 0.05, 0.95);
    CHECK(reconstruction_loss(x, y) == doctest::Approx(oracle::cross_entropy(x, y)).epsilon(1e-13));
    // Minimum over y sits at y = x.
    const double at_x = reconstruction_loss(x, x);
    CHECK(at_x == doctest::Approx(oracle::cross_entropy(x, x)).epsilon(1e-13));
    CHECK(at_x < reconstruction_loss(x, y));
    Vector nudged = x;
    for (double& v : nudged) v += 1e-3;
    CHECK(at_x < reconstruction_loss(x, nudged));

    CHECK_THROWS_AS(reconstruction_loss(Vector{0.5}, Vector{1.0}), std::domain_error);
    CHECK_THROWS_AS(reconstruction_loss(Vector{1.5}, Vector{0.5}), std::domain_error);
}

TEST_CASE("mean activation") {
    SeededRng rng(8);
    const AutoEncoder ae = fixture::random_autoencoder(4, 3, 0.05, 0.1, rng);
    const Matrix one = unit_batch(1, 4, rng);
    const Vector single = encode(ae, one.row(0));
    const Vector m1 = mean_activation(ae, one);
    for (std::size_t j = 0; j < 3; ++j) CHECK(m1[j] == doctest::Approx(single[j]).epsilon(1e-15));

    for (double v : mean_activation(zero_autoencoder(4, 3), unit_batch(7, 4, rng))) CHECK(v == 0.5);

    const Matrix batch = unit_batch(5, 4, rng);
    std::vector<double> avg(3, 0.0);
    for (std::size_t r = 0; r < 5; ++r) {
        const auto h = oracle::affine_sigmoid(fixture::rows_of(ae.weights), ae.hidden_bias,
                                              std::vector<double>(batch.row(r).begin(), batch.row(r).end()));
        for (std::size_t j = 0; j < 3; ++j) avg[j] += h[j] / 5.0;
    }
    const Vector m = mean_activation(ae, batch);
    for (std::size_t j = 0; j < 3; ++j) CHECK(m[j] == doctest::Approx(avg[j]).epsilon(1e-14));
}

TEST_CASE("KL penalty values and sign") {
    CHECK(kl_penalty(0.05, Vector{0.05, 0.05, 0.05}) == 0.0);
    CHECK(kl_penalty(0.05, Vector{0.2}) == doctest::Approx(0.09395).epsilon(1e-4));
    CHECK(kl_penalty(0.05, Vector{0.2}) == doctest::Approx(oracle::bernoulli_kl(0.05, 0.2)).epsilon(1e-14));
    SeededRng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double rho = rng.uniform(0.001, 0.999);
        const Vector q = fixture::random_vector(3, rng, 1e-6, 1.0 - 1e-6);
        CHECK(kl_penalty(rho, q) >= 0.0);
    }
}

TEST_CASE("batch losses against a per-sample oracle") {
    SeededRng rng(13);
    const AutoEncoder ae = fixture::random_autoencoder(4, 3, 0.1, 0.3, rng);
    const Matrix batch = unit_batch(6, 4, rng);
    double sum = 0.0;
    std::vector<double> rho_hat(3, 0.0);
    for (std::size_t r = 0; r < 6; ++r) {
        const std::vector<double> x(batch.row(r).begin(), batch.row(r).end());
        const auto h = oracle::affine_sigmoid(fixture::rows_of(ae.weights), ae.hidden_bias, x);
        const auto y = oracle::affine_sigmoid(fixture::rows_of(ae.decoder_weights), ae.visible_bias, h);
        sum += oracle::cross_entropy(x, y);
        for (std::size_t j = 0; j < 3; ++j) rho_hat[j] += h[j] / 6.0;
    }
    CHECK(batch_loss(ae, batch) == doctest::Approx(sum / 6.0).epsilon(1e-13));
    double kl = 0.0;
    for (double q : rho_hat) kl += oracle::bernoulli_kl(0.1, q);
    CHECK(sparse_batch_loss(ae, batch) == doctest::Approx(sum / 6.0 + 0.3 * kl).epsilon(1e-13));

    Matrix same(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) same(r, c) = batch(0, c);
    const Vector x0(batch.row(0).begin(), batch.row(0).end());
    CHECK(batch_loss(ae, same) == doctest::Approx(reconstruction_loss(x0, decode(ae, encode(ae, x0)))).epsilon(1e-14));
}

TEST_CASE("zero sparsity weight reduces the sparse objective exactly") {
    SeededRng rng(14);
    for (int i = 0; i < 20; ++i) {
        const AutoEncoder ae = fixture::random_autoencoder(5, 3, rng.uniform(0.01, 0.5), 0.0, rng);
        const Matrix batch = unit_batch(4, 5, rng);
        CHECK(sparse_batch_loss(ae, batch) == batch_loss(ae, batch));
    }
}

TEST_CASE("analytic gradients match finite differences") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SeededRng rng(seed);
        SUBCASE("no sparsity") {
            const AutoEncoder ae = fixture::random_autoencoder(3, 2, 0.05, 0.0, rng);
            CHECK(gradient_error(ae, unit_batch(4, 3, rng)) < 1e-5);
        }
        SUBCASE("with sparsity") {
            const AutoEncoder ae = fixture::random_autoencoder(3, 2, 0.05, 0.1, rng);
            CHECK(gradient_error(ae, unit_batch(4, 3, rng)) < 1e-5);
        }
        SUBCASE("larger net") {
            const AutoEncoder ae = fixture::random_autoencoder(10, 6, 0.2, 0.5, rng);
            CHECK(gradient_error(ae, unit_batch(8, 10, rng)) < 1e-5);
        }
    }
}

TEST_CASE("combined pass agrees with separate loss and gradient") {
    SeededRng rng(15);
    const AutoEncoder ae = fixture::random_autoencoder(5, 3, 0.05, 0.1, rng);
    const Matrix batch = unit_batch(4, 5, rng);
    const auto lg = loss_and_gradients(ae, batch);
    CHECK(lg.loss == doctest::Approx(sparse_batch_loss(ae, batch)).epsilon(1e-14));
    CHECK(fixture::pack(lg.grads) == fixture::pack(gradients(ae, batch)));
}

TEST_CASE("symmetric start on zero inputs gives symmetric gradients") {
    AutoEncoder ae = zero_autoencoder(3, 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 3; ++c) ae.weights(r, c) = 0.3;
    ae.decoder_weights = ae.weights.transpose();
    const Matrix zeros(4, 3, 0.0);
    const AeGradients g = gradients(ae, zeros);
    CHECK(g.hidden_bias[0] == doctest::Approx(g.hidden_bias[1]).epsilon(1e-15));
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(g.weights(0, c) == doctest::Approx(g.weights(1, c)).epsilon(1e-15));
        CHECK(g.weights(0, c) == doctest::Approx(0.0));  // inputs are zero
    }
    for (std::size_t r = 0; r < 3; ++r)
        CHECK(g.decoder_weights(r, 0) == doctest::Approx(g.decoder_weights(r, 1)).epsilon(1e-15));
}

TEST_CASE("a small gradient step lowers the sparse objective") {
    SeededRng rng(16);
    for (int trial = 0; trial < 10; ++trial) {
        const AutoEncoder ae = fixture::random_autoencoder(6, 4, 0.05, 0.1, rng);
        const Matrix batch = unit_batch(5, 6, rng);
        const double before = sparse_batch_loss(ae, batch);
        const auto g = fixture::pack(gradients(ae, batch));
        bool decreased = false;
        for (double lr = 0.1; lr > 1e-8 && !decreased; lr *= 0.5) {
            auto p = fixture::pack(ae);
            for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
            decreased = sparse_batch_loss(fixture::unpack(ae, p), batch) < before;
        }
        CHECK(decreased);
    }
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS((SparsityConfig{0.0, 0.1}.validate()), ContractViolation);
    CHECK_THROWS_AS((SparsityConfig{0.5, -1.0}.validate()), ContractViolation);
    SeededRng rng(3);
    const AutoEncoder ae = fixture::random_autoencoder(3, 2, 0.05, 0.1, rng);
    CHECK_THROWS(encode(ae, Vector{1.0, 2.0}));
    CHECK_THROWS_AS(batch_loss(ae, Matrix(2, 3, 1.5)), std::domain_error);
}
