#include "doctest.h"

#include "daen/dataset.hpp"
#include "daen/errors.hpp"
#include "daen/training.hpp"

#include <sstream>

#include "support.hpp"

using namespace daen;

namespace {

// Binary patterns: the cross-entropy floor is zero, so the loss can shrink freely.
Matrix binary_patterns() {
    return Matrix(4, 4, {1, 0, 0, 1,  //
                         0, 1, 1, 0,  //
                         1, 1, 0, 0,  //
                         0, 0, 1, 1});
}

Matrix synthetic_features(std::size_t days) {
    const auto data = synthesize(days, 42);
    std::vector<double> loads;
    for (const auto& r : data.records) loads.insert(loads.end(), r.loads.begin(), r.loads.end());
    const NormParams np = NormParams::from_loads(loads);
    std::vector<Vector> rows;
    for (const auto& r : data.records) rows.push_back(assemble_features(r, np));
    return stack_rows(rows);
}

}  // namespace

TEST_CASE("stack and config validation") {
    CHECK_THROWS_AS(StackSpec{{57}}.validate(), ContractViolation);
    CHECK_THROWS_AS((StackSpec{{57, 0}}.validate()), ContractViolation);
    CHECK_NOTHROW((StackSpec{{57, 24, 12}}.validate()));
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ContractViolation);
}

TEST_CASE("single layer pretraining halves its loss on binary patterns") {
    TrainConfig cfg;
    SeededRng rng(3);
    const auto res = pretrain_stack(StackSpec{{4, 4}}, binary_patterns(), cfg, rng);
    REQUIRE(res.log.size() == cfg.pretrain_iters);
    CHECK(res.log.back().loss < 0.5 * res.log.front().loss);
    CHECK(res.log.front().phase == TrainPhase::pretrain);
    CHECK(res.log.front().layer == 1);
    CHECK(res.log.front().iteration == 1);
}

TEST_CASE("the second layer is trained on first-layer encodings") {
    TrainConfig cfg;
    cfg.pretrain_iters = 60;
    SeededRng rng_a(11), rng_b(11);
    const Matrix data = synthetic_features(40);
    const auto both = pretrain_stack(StackSpec{{57, 10, 5}}, data, cfg, rng_a);

    const auto first = pretrain_stack(StackSpec{{57, 10}}, data, cfg, rng_b);
    const Matrix encoded = encode_batch(first.encoders[0], data);
    const auto second = pretrain_stack(StackSpec{{10, 5}}, encoded, cfg, rng_b);

    CHECK(both.encoders[0] == first.encoders[0]);
    CHECK(both.encoders[1] == second.encoders[0]);
    REQUIRE(both.log.size() == 120);
    CHECK(both.log[60].layer == 2);
    CHECK(both.log[60].loss == second.log[0].loss);
}

TEST_CASE("zero pretraining iterations return the initial encoders") {
    TrainConfig cfg;
    cfg.pretrain_iters = 0;
    SeededRng a(5), b(5);
    const auto res = pretrain_stack(StackSpec{{4, 3}}, binary_patterns(), cfg, a);
    CHECK(res.log.empty());
    CHECK(res.encoders[0] == AutoEncoder::initialize(4, 3, cfg.sparsity, b));
}

TEST_CASE("pretraining loss keeps falling over 50-iteration windows") {
    TrainConfig cfg;
    cfg.pretrain_iters = 1000;
    SeededRng rng(42);
    const auto res = pretrain_stack(StackSpec{{57, 24, 12}}, synthetic_features(60), cfg, rng);
    for (std::size_t i = 0; i + 50 < res.log.size(); ++i) {
        if (res.log[i].layer != res.log[i + 50].layer) continue;
        CHECK(res.log[i + 50].loss <= 1.05 * res.log[i].loss);
    }
}

TEST_CASE("pretraining rejects data outside the unit interval") {
    TrainConfig cfg;
    SeededRng rng(1);
    CHECK_THROWS_AS(pretrain_stack(StackSpec{{2, 2}}, Matrix(2, 2, 2.0), cfg, rng), std::domain_error);
    CHECK_THROWS_AS(pretrain_stack(StackSpec{{3, 2}}, Matrix(2, 2, 0.5), cfg, rng), ContractViolation);
}

TEST_CASE("assembled head is bounded and unbiased") {
    SeededRng rng(2);
    const StackSpec spec{{6, 4, 3}};
    std::vector<AutoEncoder> enc{AutoEncoder::initialize(6, 4, {}, rng),
                                 AutoEncoder::initialize(4, 3, {}, rng)};
    const DaenModel m = assemble_model(spec, enc, rng);
    CHECK(m.head_bias == 0.0);
    for (double w : m.head_weights) CHECK(std::abs(w) <= std::sqrt(6.0 / 4.0));
    CHECK_THROWS_AS(assemble_model(StackSpec{{6, 4, 2}}, enc, rng), ContractViolation);
}

TEST_CASE("fine-tuning gradients match finite differences") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SeededRng rng(seed);
        const DaenModel m = fixture::random_model(StackSpec{{6, 3, 2}}, rng);
        const LabelledSet pairs = fixture::random_pairs(5, 6, rng);
        const auto analytic = fixture::pack(finetune_loss_and_gradients(m, pairs).grads);
        const auto numeric = oracle::central_difference(
            [&](const std::vector<double>& f) { return finetune_loss(fixture::unpack(m, f), pairs); },
            fixture::pack(m));
        CHECK(oracle::max_relative_error(analytic, numeric) < 1e-5);
    }
}

TEST_CASE("fine-tuning loss matches a manual squared-error sum") {
    SeededRng rng(9);
    const DaenModel m = fixture::random_model(StackSpec{{5, 4, 2}}, rng);
    const LabelledSet pairs = fixture::random_pairs(7, 5, rng);
    double sse = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
        std::vector<double> h(pairs.inputs.row(i).begin(), pairs.inputs.row(i).end());
        for (const auto& e : m.encoders) h = oracle::affine_sigmoid(fixture::rows_of(e.weights), e.hidden_bias, h);
        double y = m.head_bias;
        for (std::size_t j = 0; j < h.size(); ++j) y += m.head_weights[j] * h[j];
        CHECK(predict(m, pairs.inputs.row(i)) == doctest::Approx(y).epsilon(1e-14));
        sse += (y - pairs.targets[i]) * (y - pairs.targets[i]);
    }
    CHECK(finetune_loss(m, pairs) == doctest::Approx(sse / 7.0).epsilon(1e-13));
    CHECK(finetune_loss_and_gradients(m, pairs).loss == doctest::Approx(sse / 7.0).epsilon(1e-13));
}

TEST_CASE("zero fine-tuning iterations leave the model unchanged") {
    SeededRng rng(4);
    const DaenModel m = fixture::random_model(StackSpec{{5, 3}}, rng);
    TrainConfig cfg;
    cfg.finetune_iters = 0;
    const auto res = finetune(m, fixture::random_pairs(4, 5, rng), cfg);
    CHECK(res.model == m);
    CHECK(res.log.empty());
}

namespace {

LabelledSet linear_targets(const DaenModel& m, SeededRng& rng) {
    const Matrix inputs = fixture::random_matrix(40, m.spec.input_size(), rng, 0.0, 1.0);
    const Matrix top = encode_stack(m, inputs);
    const Vector w = fixture::random_vector(m.spec.top_size(), rng, -0.5, 0.5);
    LabelledSet pairs{inputs, Vector(40)};
    for (std::size_t i = 0; i < 40; ++i) pairs.targets[i] = 0.3 + dot(top.row(i), w);
    return pairs;
}

}  // namespace

TEST_CASE("fine-tuning fits targets that are linear in the model's own encodings") {
    SeededRng rng(17);
    const DaenModel m = fixture::random_model(StackSpec{{8, 6, 4}}, rng);
    const LabelledSet pairs = linear_targets(m, rng);
    const auto res = finetune(m, pairs, TrainConfig{});
    REQUIRE(res.log.size() == 250);
    CHECK(res.log.front().phase == TrainPhase::finetune);
    CHECK(res.log.front().layer == 0);
    CHECK(finetune_loss(res.model, pairs) < 1e-4);
}

TEST_CASE("fine-tuning removes most of the error on self-consistent targets") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        SeededRng rng(seed);
        const DaenModel m = fixture::random_model(StackSpec{{8, 6, 4}}, rng);
        const LabelledSet pairs = linear_targets(m, rng);
        const auto res = finetune(m, pairs, TrainConfig{});
        CHECK(finetune_loss(res.model, pairs) <= 0.1 * finetune_loss(m, pairs));
    }
}

TEST_CASE("fine-tuning leaves decoder halves untouched") {
    SeededRng rng(18);
    const DaenModel m = fixture::random_model(StackSpec{{5, 4, 3}}, rng);
    TrainConfig cfg;
    cfg.finetune_iters = 20;
    const auto res = finetune(m, fixture::random_pairs(6, 5, rng), cfg);
    for (std::size_t l = 0; l < 2; ++l) {
        CHECK(res.model.encoders[l].decoder_weights == m.encoders[l].decoder_weights);
        CHECK(res.model.encoders[l].visible_bias == m.encoders[l].visible_bias);
        CHECK_FALSE(res.model.encoders[l].weights == m.encoders[l].weights);
    }
}

TEST_CASE("mini-batch fine-tuning walks contiguous slices") {
    SeededRng rng(19);
    const DaenModel m = fixture::random_model(StackSpec{{5, 3}}, rng);
    const LabelledSet pairs = fixture::random_pairs(10, 5, rng);
    TrainConfig cfg;
    cfg.batch_size = 4;
    cfg.finetune_iters = 3;
    const auto res = finetune(m, pairs, cfg);
    LabelledSet first{Matrix(4, 5, std::vector<double>(pairs.inputs.storage().begin(),
                                                       pairs.inputs.storage().begin() + 20)),
                      Vector(pairs.targets.begin(), pairs.targets.begin() + 4)};
    CHECK(res.log[0].loss == doctest::Approx(finetune_loss(m, first)).epsilon(1e-14));
}

TEST_CASE("prediction properties") {
    SeededRng rng(20);
    DaenModel m = fixture::random_model(StackSpec{{5, 3}}, rng);
    m.head_weights.assign(3, 0.0);
    m.head_bias = 0.37;
    CHECK(predict(m, fixture::random_vector(5, rng)) == 0.37);
    const DaenModel r = fixture::random_model(StackSpec{{5, 3}}, rng);
    const Vector x = fixture::random_vector(5, rng, 0.0, 1.0);
    CHECK(predict(r, x) == predict(r, x));
    CHECK_THROWS_AS(predict(r, Vector(4, 0.5)), ContractViolation);
}

TEST_CASE("full pipeline is deterministic for a fixed seed") {
    const Matrix data = synthetic_features(35);
    TrainConfig cfg;
    cfg.pretrain_iters = 30;
    cfg.finetune_iters = 20;
    auto run = [&] {
        SeededRng rng(7);
        const StackSpec spec{{57, 8, 4}};
        auto pre = pretrain_stack(spec, data, cfg, rng);
        DaenModel m = assemble_model(spec, pre.encoders, rng);
        LabelledSet pairs{data, Vector(data.rows(), 0.5)};
        return finetune(m, pairs, cfg).model;
    };
    CHECK(run() == run());
}

TEST_CASE("loss log csv layout") {
    std::ostringstream os;
    write_log_csv(os, {{TrainPhase::pretrain, 1, 1, 0.5}, {TrainPhase::finetune, 0, 1, 0.25}});
    CHECK(os.str() == "phase,layer,iteration,loss\npretrain,1,1,0.5\nfinetune,0,1,0.25\n");
}
