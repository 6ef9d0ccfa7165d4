#include "mucos/optim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "mucos/encoder.hpp"

using namespace mucos;

namespace {

// Smallest possible model: three 1x1 parameters (embed, w_cls, b_cls).
EncoderModel scalar_model(double value) {
    EncoderConfig cfg;
    cfg.encoder = EncoderKind::kMeanPool;
    cfg.vocab_size = 1;
    cfg.embed_dim = 1;
    cfg.num_classes = 1;
    cfg.max_len = 1;
    auto m = EncoderModel::init(cfg, 0);
    for (auto& p : m.parameters()) p.tensor->data[0] = value;
    return m;
}

TEST(AdamW, ZeroGradientZeroDecayLeavesParametersUntouched) {
    auto m = scalar_model(0.7);
    AdamW opt(m, {0.1, 0.9, 0.999, 1e-8, 0.0});
    auto grads = GradientSet::zeros_like(m);
    opt.step(grads);
    for (auto& p : m.parameters()) EXPECT_DOUBLE_EQ(p.tensor->data[0], 0.7);
}

TEST(AdamW, FirstStepWithUnitGradientMovesByAboutLr) {
    // m-hat = 1, v-hat = 1 after bias correction, so the update is
    // -lr / (1 + eps).
    auto m = scalar_model(0.5);
    AdamW opt(m, {0.1, 0.9, 0.999, 1e-8, 0.0});
    auto grads = GradientSet::zeros_like(m);
    grads.tensors[0].data[0] = 1.0;
    opt.step(grads);
    EXPECT_NEAR(m.embed.data[0], 0.5 - 0.1, 1e-8);
    EXPECT_DOUBLE_EQ(m.w_cls.data[0], 0.5);  // no gradient, no decay
}

TEST(AdamW, BiasCorrectionMakesFirstStepScaleFree) {
    for (double g : {1e-3, 1e-1, 10.0}) {
        auto m = scalar_model(0.0);
        AdamW opt(m, {0.1, 0.9, 0.999, 1e-8, 0.0});
        auto grads = GradientSet::zeros_like(m);
        grads.tensors[0].data[0] = g;
        opt.step(grads);
        EXPECT_NEAR(m.embed.data[0], -0.1, 1e-4) << "g=" << g;
    }
}

TEST(AdamW, DecayIsDecoupledAndExact) {
    // g = 0: moments stay zero, so the only movement is the decay scaling.
    // (Coupled L2 would fabricate an adaptive update of magnitude ~lr.)
    auto m = scalar_model(0.001);
    AdamW opt(m, {0.1, 0.9, 0.999, 1e-8, 0.1});
    auto grads = GradientSet::zeros_like(m);
    opt.step(grads);
    for (auto& p : m.parameters()) {
        EXPECT_DOUBLE_EQ(p.tensor->data[0], 0.001 * (1.0 - 0.01));
    }
    opt.step(grads);
    for (auto& p : m.parameters()) {
        EXPECT_DOUBLE_EQ(p.tensor->data[0], 0.001 * (1.0 - 0.01) * (1.0 - 0.01));
    }
}

TEST(AdamW, DecayAppliesBeforeTheAdaptiveUpdate) {
    // One step with both decay and gradient: p' = p(1 - lr*wd) - lr*mhat/(sqrt(vhat)+eps).
    auto m = scalar_model(2.0);
    AdamW opt(m, {0.1, 0.9, 0.999, 1e-8, 0.5});
    auto grads = GradientSet::zeros_like(m);
    grads.tensors[0].data[0] = 1.0;
    opt.step(grads);
    const double expected = 2.0 * (1.0 - 0.1 * 0.5) - 0.1 * (1.0 / (1.0 + 1e-8));
    EXPECT_NEAR(m.embed.data[0], expected, 1e-12);
}

TEST(AdamW, RejectsNonFiniteGradients) {
    auto m = scalar_model(0.0);
    AdamW opt(m, {});
    auto grads = GradientSet::zeros_like(m);
    grads.tensors[1].data[0] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(opt.step(grads), TrainError);
    grads.tensors[1].data[0] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(opt.step(grads), TrainError);
}

TEST(AdamW, RejectsMismatchedGradientShapes) {
    auto m = scalar_model(0.0);
    AdamW opt(m, {});
    GradientSet wrong_count;
    wrong_count.tensors.emplace_back(1, 1);
    EXPECT_THROW(opt.step(wrong_count), TrainError);

    auto wrong_shape = GradientSet::zeros_like(m);
    wrong_shape.tensors[0] = Tensor(2, 2);
    EXPECT_THROW(opt.step(wrong_shape), TrainError);
}

TEST(AdamW, StepsAllTensorsOfAnAttentionModel) {
    EncoderConfig cfg;
    cfg.encoder = EncoderKind::kAttention;
    cfg.vocab_size = 4;
    cfg.embed_dim = 3;
    cfg.ff_dim = 5;
    cfg.num_classes = 2;
    auto m = EncoderModel::init(cfg, 9);
    auto before = m;
    AdamW opt(m, {0.01, 0.9, 0.999, 1e-8, 0.0});
    auto grads = GradientSet::zeros_like(m);
    for (auto& t : grads.tensors) {
        for (auto& v : t.data) v = 0.5;
    }
    opt.step(grads);
    EXPECT_EQ(opt.steps(), 1u);
    auto pa = m.parameters();
    auto pb = before.parameters();
    for (std::size_t t = 0; t < pa.size(); ++t) {
        EXPECT_NE(pa[t].tensor->data, pb[t].tensor->data) << pa[t].name;
    }
}

TEST(AdamW, BumpsModelRevisionSoTracesGoStale) {
    auto m = scalar_model(0.0);
    const auto rev = m.revision;
    AdamW opt(m, {});
    auto grads = GradientSet::zeros_like(m);
    opt.step(grads);
    EXPECT_EQ(m.revision, rev + 1);
}

TEST(AdamW, TwoStepSequenceMatchesHandComputation) {
    // Scalar AdamW with lr=0.1, beta=(0.9, 0.999), wd=0, g=1 both steps.
    auto m = scalar_model(0.0);
    AdamW opt(m, {0.1, 0.9, 0.999, 1e-8, 0.0});
    auto grads = GradientSet::zeros_like(m);
    grads.tensors[0].data[0] = 1.0;
    opt.step(grads);
    opt.step(grads);

    double p = 0.0, mm = 0.0, vv = 0.0;
    for (int step = 1; step <= 2; ++step) {
        mm = 0.9 * mm + 0.1 * 1.0;
        vv = 0.999 * vv + 0.001 * 1.0;
        const double mhat = mm / (1.0 - std::pow(0.9, step));
        const double vhat = vv / (1.0 - std::pow(0.999, step));
        p -= 0.1 * mhat / (std::sqrt(vhat) + 1e-8);
    }
    EXPECT_NEAR(m.embed.data[0], p, 1e-15);
}

}  // namespace
