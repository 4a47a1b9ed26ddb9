#include "daen/baselines.hpp"

#include "daen/errors.hpp"
#include "daen/forecaster.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace daen {

void BpnnModel::validate() const {
    const bool ok = hidden_bias.size() == hidden_weights.rows() &&
                    output_weights.size() == hidden_weights.rows();
    if (!ok)
        throw ContractViolation("bpnn shapes inconsistent: hidden " + hidden_weights.shape_string() +
                                ", bias " + std::to_string(hidden_bias.size()) + ", output " +
                                std::to_string(output_weights.size()));
}

BpnnModel bpnn_init(std::size_t input_size, std::size_t hidden, SeededRng& rng) {
    BpnnModel m;
    m.hidden_weights = glorot_uniform(hidden, input_size, rng);
    m.hidden_bias.assign(hidden, 0.0);
    const double bound = std::sqrt(6.0 / static_cast<double>(hidden + 1));
    m.output_weights.resize(hidden);
    for (double& w : m.output_weights) w = rng.uniform(-bound, bound);
    return m;
}

namespace {

void require_pairs(std::size_t input_size, const LabelledSet& pairs) {
    if (pairs.size() == 0) throw ContractViolation("no labelled pairs");
    if (pairs.inputs.rows() != pairs.targets.size())
        throw ContractViolation("labelled set has mismatched inputs and targets");
    if (pairs.inputs.cols() != input_size)
        throw ContractViolation("input width " + std::to_string(pairs.inputs.cols()) +
                                " does not match model input " + std::to_string(input_size));
}

Matrix bpnn_hidden(const BpnnModel& m, const Matrix& inputs) {
    Matrix h = matmul_bt(inputs, m.hidden_weights);
    add_row_bias(h, m.hidden_bias);
    sigmoid_inplace(h.values());
    return h;
}

}  // namespace

double bpnn_loss(const BpnnModel& model, const LabelledSet& pairs) {
    return bpnn_loss_and_gradients(model, pairs).first;
}

std::pair<double, BpnnGradients> bpnn_loss_and_gradients(const BpnnModel& model,
                                                         const LabelledSet& pairs) {
    model.validate();
    require_pairs(model.hidden_weights.cols(), pairs);
    const double n = static_cast<double>(pairs.size());
    const Matrix h = bpnn_hidden(model, pairs.inputs);

    BpnnGradients g;
    g.output_weights.assign(model.output_weights.size(), 0.0);
    Matrix d_hidden(h.rows(), h.cols());
    double sse = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto hi = h.row(i);
        const double r = dot(hi, model.output_weights) + model.output_bias - pairs.targets[i];
        sse += r * r;
        const double d = 2.0 * r / n;
        g.output_bias += d;
        auto dh = d_hidden.row(i);
        for (std::size_t j = 0; j < hi.size(); ++j) {
            g.output_weights[j] += d * hi[j];
            dh[j] = d * model.output_weights[j] * hi[j] * (1.0 - hi[j]);
        }
    }
    g.hidden_weights = matmul_at(d_hidden, pairs.inputs);
    g.hidden_bias = column_sums(d_hidden);
    return {sse / n, std::move(g)};
}

BpnnModel bpnn_train(const LabelledSet& pairs, const BpnnConfig& cfg, SeededRng& rng) {
    require_pairs(pairs.inputs.cols(), pairs);
    require_unit_interval(pairs.inputs);
    BpnnModel m = bpnn_init(pairs.inputs.cols(), cfg.hidden, rng);
    Optimizer opt({.kind = cfg.optimizer, .learning_rate = cfg.learning_rate});
    for (std::size_t it = 0; it < cfg.iters; ++it) {
        auto [loss, g] = bpnn_loss_and_gradients(m, pairs);
        opt.step({m.hidden_weights.values(), m.hidden_bias, m.output_weights,
                  std::span<double>(&m.output_bias, 1)},
                 {g.hidden_weights.values(), g.hidden_bias, g.output_weights,
                  std::span<const double>(&g.output_bias, 1)});
    }
    return m;
}

ElmModel elm_init(std::size_t input_size, std::size_t hidden, SeededRng& rng) {
    if (input_size == 0 || hidden == 0) throw ContractViolation("elm: zero dimension");
    ElmModel m;
    m.hidden_weights = Matrix(hidden, input_size);
    for (double& w : m.hidden_weights.values()) w = rng.uniform(-1.0, 1.0);
    m.hidden_bias.resize(hidden);
    for (double& b : m.hidden_bias) b = rng.uniform(-1.0, 1.0);
    m.output_weights.assign(hidden, 0.0);
    return m;
}

Matrix elm_hidden(const ElmModel& model, const Matrix& inputs) {
    Matrix h = matmul_bt(inputs, model.hidden_weights);
    add_row_bias(h, model.hidden_bias);
    sigmoid_inplace(h.values());
    return h;
}

Vector min_norm_least_squares(const Matrix& a, std::span<const double> b, double rcond) {
    if (a.rows() != b.size())
        throw ContractViolation("least squares: matrix " + a.shape_string() + " vs rhs of length " +
                                std::to_string(b.size()));
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> am(a.values().data(), static_cast<Eigen::Index>(a.rows()),
                                        static_cast<Eigen::Index>(a.cols()));
    const Eigen::Map<const Eigen::VectorXd> bm(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(am, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(rcond);
    const Eigen::VectorXd x = svd.solve(bm);
    return Vector(x.data(), x.data() + x.size());
}

void elm_fit(ElmModel& model, const LabelledSet& pairs) {
    require_pairs(model.hidden_weights.cols(), pairs);
    model.output_weights = min_norm_least_squares(elm_hidden(model, pairs.inputs), pairs.targets);
}

ElmModel elm_train(const LabelledSet& pairs, std::size_t hidden, SeededRng& rng) {
    require_pairs(pairs.inputs.cols(), pairs);
    ElmModel m = elm_init(pairs.inputs.cols(), hidden, rng);
    elm_fit(m, pairs);
    return m;
}

double elm_residual(const ElmModel& model, const LabelledSet& pairs) {
    const Matrix h = elm_hidden(model, pairs.inputs);
    double ss = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        const double r = dot(h.row(i), model.output_weights) - pairs.targets[i];
        ss += r * r;
    }
    return std::sqrt(ss);
}

double baseline_predict(const BpnnModel& model, std::span<const double> x) {
    model.validate();
    Vector h = matvec(model.hidden_weights, x);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = sigmoid(h[j] + model.hidden_bias[j]);
    return dot(h, model.output_weights) + model.output_bias;
}

double baseline_predict(const ElmModel& model, std::span<const double> x) {
    Vector h = matvec(model.hidden_weights, x);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = sigmoid(h[j] + model.hidden_bias[j]);
    return dot(h, model.output_weights);
}

BaselineBanks train_baselines(const SampleSet& samples, const BaselineSettings& settings,
                              std::uint64_t base_seed, std::size_t workers) {
    BaselineBanks banks;
    if (settings.bpnn) banks.bpnn.resize(kHoursPerDay);
    if (settings.elm) banks.elm.resize(kHoursPerDay);
    for_each_hour(workers, [&](std::size_t hour) {
        const LabelledSet pairs = labelled_set(samples.finetune[hour - 1]);
        if (settings.bpnn) {
            SeededRng rng(base_seed + 1000 + hour);
            banks.bpnn[hour - 1] = bpnn_train(pairs, settings.bpnn_config, rng);
        }
        if (settings.elm) {
            SeededRng rng(base_seed + 2000 + hour);
            banks.elm[hour - 1] = elm_train(pairs, settings.elm_hidden, rng);
        }
    });
    return banks;
}

}  // namespace daen
