#include "daen/training.hpp"

#include "daen/errors.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace daen {

void StackSpec::validate() const {
    if (layer_sizes.size() < 2)
        throw ContractViolation("stack needs at least two layer sizes");
    for (std::size_t s : layer_sizes)
        if (s == 0) throw ContractViolation("stack layer sizes must be positive");
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ContractViolation("learning rate must be positive");
    sparsity.validate();
}

OptimizerSettings TrainConfig::optimizer_settings() const {
    OptimizerSettings s;
    s.kind = optimizer;
    s.learning_rate = learning_rate;
    return s;
}

void write_log_csv(std::ostream& out, const TrainLog& log) {
    out << "phase,layer,iteration,loss\n";
    const auto old_precision = out.precision(17);
    for (const auto& e : log) {
        out << (e.phase == TrainPhase::pretrain ? "pretrain" : "finetune") << ',' << e.layer << ','
            << e.iteration << ',' << e.loss << '\n';
    }
    out.precision(old_precision);
}

void DaenModel::validate() const {
    spec.validate();
    if (encoders.size() != spec.encoder_count())
        throw ContractViolation("model has " + std::to_string(encoders.size()) +
                                " encoders, stack spec implies " +
                                std::to_string(spec.encoder_count()));
    for (std::size_t l = 0; l < encoders.size(); ++l) {
        encoders[l].validate();
        if (encoders[l].input_size() != spec.layer_sizes[l] ||
            encoders[l].hidden_size() != spec.layer_sizes[l + 1])
            throw ContractViolation("encoder " + std::to_string(l + 1) + " is " +
                                    encoders[l].weights.shape_string() +
                                    ", which does not chain with the stack spec");
    }
    if (head_weights.size() != spec.top_size())
        throw ContractViolation("head has " + std::to_string(head_weights.size()) +
                                " weights, top layer has " + std::to_string(spec.top_size()));
}

namespace {

// Rows [begin, end) of m.
Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t end) {
    std::vector<double> data(m.values().begin() + static_cast<std::ptrdiff_t>(begin * m.cols()),
                             m.values().begin() + static_cast<std::ptrdiff_t>(end * m.cols()));
    return Matrix(end - begin, m.cols(), std::move(data));
}

// Deterministic cyclic mini-batches over contiguous row blocks.
struct BatchCursor {
    std::size_t total;
    std::size_t batch;

    BatchCursor(std::size_t n, std::size_t batch_size)
        : total(n), batch(batch_size == 0 || batch_size >= n ? n : batch_size) {}

    bool full() const { return batch == total; }
    std::size_t count() const { return (total + batch - 1) / batch; }
    std::pair<std::size_t, std::size_t> range(std::size_t iteration) const {
        const std::size_t b = iteration % count();
        return {b * batch, std::min(total, (b + 1) * batch)};
    }
};

}  // namespace

Matrix encode_stack(std::span<const AutoEncoder> encoders, const Matrix& inputs) {
    Matrix h = inputs;
    for (const auto& ae : encoders) h = encode_batch(ae, h);
    return h;
}

Matrix encode_stack(const DaenModel& model, const Matrix& inputs) {
    return encode_stack(model.encoders, inputs);
}

PretrainResult pretrain_stack(const StackSpec& spec, const Matrix& data, const TrainConfig& cfg,
                              SeededRng& rng) {
    spec.validate();
    cfg.validate();
    if (data.rows() == 0) throw ContractViolation("pretraining data is empty");
    if (data.cols() != spec.input_size())
        throw ContractViolation("pretraining data width " + std::to_string(data.cols()) +
                                " does not match stack input " +
                                std::to_string(spec.input_size()));
    require_unit_interval(data);

    PretrainResult result;
    result.log.reserve(cfg.pretrain_iters * spec.encoder_count());
    Matrix layer_input = data;
    const BatchCursor cursor(data.rows(), cfg.batch_size);

    for (std::size_t l = 0; l < spec.encoder_count(); ++l) {
        AutoEncoder ae = AutoEncoder::initialize(spec.layer_sizes[l], spec.layer_sizes[l + 1],
                                                 cfg.sparsity, rng);
        Optimizer opt(cfg.optimizer_settings());
        for (std::size_t it = 0; it < cfg.pretrain_iters; ++it) {
            AeLossAndGradients lg;
            if (cursor.full()) {
                lg = loss_and_gradients(ae, layer_input);
            } else {
                const auto [b, e] = cursor.range(it);
                lg = loss_and_gradients(ae, slice_rows(layer_input, b, e));
            }
            result.log.push_back({TrainPhase::pretrain, l + 1, it + 1, lg.loss});
            opt.step({ae.weights.values(), ae.decoder_weights.values(), ae.hidden_bias,
                      ae.visible_bias},
                     {lg.grads.weights.values(), lg.grads.decoder_weights.values(),
                      lg.grads.hidden_bias, lg.grads.visible_bias});
        }
        layer_input = encode_batch(ae, layer_input);
        result.encoders.push_back(std::move(ae));
    }
    return result;
}

DaenModel assemble_model(const StackSpec& spec, std::vector<AutoEncoder> encoders,
                         SeededRng& rng) {
    DaenModel model;
    model.spec = spec;
    model.encoders = std::move(encoders);
    const double bound = std::sqrt(6.0 / static_cast<double>(spec.top_size() + 1));
    model.head_weights.resize(spec.top_size());
    for (double& w : model.head_weights) w = rng.uniform(-bound, bound);
    model.head_bias = 0.0;
    model.validate();
    return model;
}

namespace {

void require_pairs(const DaenModel& model, const LabelledSet& pairs) {
    if (pairs.size() == 0) throw ContractViolation("no labelled pairs");
    if (pairs.inputs.rows() != pairs.targets.size())
        throw ContractViolation("labelled set has " + std::to_string(pairs.inputs.rows()) +
                                " inputs but " + std::to_string(pairs.targets.size()) +
                                " targets");
    if (pairs.inputs.cols() != model.spec.input_size())
        throw ContractViolation("input width " + std::to_string(pairs.inputs.cols()) +
                                " does not match model input " +
                                std::to_string(model.spec.input_size()));
}

}  // namespace

FinetuneLossAndGradients finetune_loss_and_gradients(const DaenModel& model,
                                                     const LabelledSet& pairs) {
    require_pairs(model, pairs);
    const std::size_t layers = model.encoders.size();
    const double n = static_cast<double>(pairs.size());

    // activations[0] is the input, activations[l] the output of encoder l.
    std::vector<Matrix> activations;
    activations.reserve(layers + 1);
    activations.push_back(pairs.inputs);
    for (const auto& ae : model.encoders) activations.push_back(encode_batch(ae, activations.back()));

    const Matrix& top = activations.back();
    FinetuneLossAndGradients out;
    Vector d_out(pairs.size());
    double sse = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double residual = dot(top.row(i), model.head_weights) + model.head_bias -
                                pairs.targets[i];
        sse += residual * residual;
        d_out[i] = 2.0 * residual / n;
    }
    out.loss = sse / n;

    auto& g = out.grads;
    g.head_weights.assign(model.head_weights.size(), 0.0);
    g.head_bias = 0.0;
    Matrix d_hidden(top.rows(), top.cols());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto h = top.row(i);
        auto dh = d_hidden.row(i);
        for (std::size_t j = 0; j < h.size(); ++j) {
            g.head_weights[j] += d_out[i] * h[j];
            dh[j] = d_out[i] * model.head_weights[j];
        }
        g.head_bias += d_out[i];
    }

    g.weights.resize(layers);
    g.biases.resize(layers);
    for (std::size_t l = layers; l-- > 0;) {
        const Matrix& h = activations[l + 1];
        auto d = d_hidden.values();
        const auto hv = h.values();
        for (std::size_t k = 0; k < d.size(); ++k) d[k] *= hv[k] * (1.0 - hv[k]);
        g.weights[l] = matmul_at(d_hidden, activations[l]);
        g.biases[l] = column_sums(d_hidden);
        if (l > 0) d_hidden = matmul(d_hidden, model.encoders[l].weights);
    }
    return out;
}

double finetune_loss(const DaenModel& model, const LabelledSet& pairs) {
    require_pairs(model, pairs);
    const Vector pred = predict_batch(model, pairs.inputs);
    double sse = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double r = pred[i] - pairs.targets[i];
        sse += r * r;
    }
    return sse / static_cast<double>(pred.size());
}

FinetuneResult finetune(DaenModel model, const LabelledSet& pairs, const TrainConfig& cfg) {
    cfg.validate();
    model.validate();
    require_pairs(model, pairs);

    FinetuneResult result;
    result.log.reserve(cfg.finetune_iters);
    Optimizer opt(cfg.optimizer_settings());
    const BatchCursor cursor(pairs.size(), cfg.batch_size);

    for (std::size_t it = 0; it < cfg.finetune_iters; ++it) {
        FinetuneLossAndGradients lg;
        if (cursor.full()) {
            lg = finetune_loss_and_gradients(model, pairs);
        } else {
            const auto [b, e] = cursor.range(it);
            LabelledSet mini{slice_rows(pairs.inputs, b, e),
                             Vector(pairs.targets.begin() + static_cast<std::ptrdiff_t>(b),
                                    pairs.targets.begin() + static_cast<std::ptrdiff_t>(e))};
            lg = finetune_loss_and_gradients(model, mini);
        }
        result.log.push_back({TrainPhase::finetune, 0, it + 1, lg.loss});

        ParamBundle params;
        GradBundle grads;
        for (std::size_t l = 0; l < model.encoders.size(); ++l) {
            params.push_back(model.encoders[l].weights.values());
            params.push_back(model.encoders[l].hidden_bias);
            grads.push_back(lg.grads.weights[l].values());
            grads.push_back(lg.grads.biases[l]);
        }
        params.push_back(model.head_weights);
        params.push_back(std::span<double>(&model.head_bias, 1));
        grads.push_back(lg.grads.head_weights);
        grads.push_back(std::span<const double>(&lg.grads.head_bias, 1));
        opt.step(params, grads);
    }
    result.model = std::move(model);
    return result;
}

double predict(const DaenModel& model, std::span<const double> x) {
    if (x.size() != model.spec.input_size())
        throw ContractViolation("predict: input length " + std::to_string(x.size()) +
                                " does not match model input " +
                                std::to_string(model.spec.input_size()));
    Vector h(x.begin(), x.end());
    for (const auto& ae : model.encoders) h = encode(ae, h);
    return dot(h, model.head_weights) + model.head_bias;
}

Vector predict_batch(const DaenModel& model, const Matrix& inputs) {
    if (inputs.cols() != model.spec.input_size())
        throw ContractViolation("predict: input width " + std::to_string(inputs.cols()) +
                                " does not match model input " +
                                std::to_string(model.spec.input_size()));
    const Matrix top = encode_stack(model, inputs);
    Vector out(top.rows());
    for (std::size_t i = 0; i < top.rows(); ++i)
        out[i] = dot(top.row(i), model.head_weights) + model.head_bias;
    return out;
}

}  // namespace daen
