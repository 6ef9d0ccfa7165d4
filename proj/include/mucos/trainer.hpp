#pragma once
// Mini-batch training loop. Every train triple contributes exactly one
// positive example per epoch — the softmax over all classes supplies the
// contrast, so no negative sampling exists anywhere. One optimizer step per
// batch on the batch-mean gradient; seeded shuffle per epoch; optional
// per-epoch checkpoints keeping the latest and the best-by-validation-MRR.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "mucos/config.hpp"
#include "mucos/encoder.hpp"
#include "mucos/errors.hpp"
#include "mucos/evaluator.hpp"
#include "mucos/optim.hpp"
#include "mucos/pipeline.hpp"

namespace mucos {

struct TrainReport {
    std::vector<double> epoch_loss;       // mean example loss per epoch
    std::vector<double> epoch_seconds;    // wall clock per epoch
    std::vector<double> epoch_valid_mrr;  // empty when validation is skipped
    double context_seconds = 0.0;         // total context + sequence build time
    std::size_t clamp_count = 0;          // cross-entropy log-floor hits
    std::size_t train_examples = 0;       // examples per epoch
    std::size_t optimizer_steps = 0;
    std::size_t best_epoch = 0;  // 1-based; 0 when never validated
    double best_valid_mrr = -1.0;
    std::string last_checkpoint;
    std::string best_checkpoint;
};

struct TrainResult {
    EncoderModel model;
    TrainReport report;
};

namespace detail {

inline bool triple_less(const Triple& a, const Triple& b) {
    if (a.head != b.head) return a.head < b.head;
    if (a.relation != b.relation) return a.relation < b.relation;
    return a.tail < b.tail;
}

}  // namespace detail

// Trains on ds.splits.train (restricted to the configured subtask).
// Deterministic for a fixed config: fixed init, fixed shuffle order, fixed
// batch boundaries. When checkpoint_dir is non-empty, writes last.ckpt each
// epoch and best.ckpt whenever validation MRR improves.
inline TrainResult train(const Dataset& ds, const TrainConfig& cfg,
                         const std::string& checkpoint_dir = "", const std::string& manifest = "",
                         std::ostream* progress = nullptr) {
    validate_config(cfg);
    using Clock = std::chrono::steady_clock;
    const auto seconds_between = [](Clock::time_point a, Clock::time_point b) {
        return std::chrono::duration<double>(b - a).count();
    };

    const ExampleBuilder builder(ds.graph, cfg);
    std::vector<Triple> train_triples =
        subtask_triples(ds.splits.train, cfg.subtask, ds.splits.drug_target_relations);
    if (train_triples.empty()) {
        throw TrainError("no training triples for the selected subtask");
    }

    // Split hygiene: a triple under evaluation must never be trained on.
    std::vector<Triple> eval_sorted = ds.splits.valid;
    eval_sorted.insert(eval_sorted.end(), ds.splits.test.begin(), ds.splits.test.end());
    std::sort(eval_sorted.begin(), eval_sorted.end(), detail::triple_less);
    for (const auto& t : train_triples) {
        if (std::binary_search(eval_sorted.begin(), eval_sorted.end(), t, detail::triple_less)) {
            throw TrainError("split hygiene violation: train triple also present in valid/test");
        }
    }

    EncoderModel model = EncoderModel::init(builder.encoder_config(), cfg.seed);
    AdamW optimizer(model, cfg.adamw());
    GradientSet grads = GradientSet::zeros_like(model);

    const std::vector<Triple> valid_triples =
        subtask_triples(ds.splits.valid, cfg.subtask, ds.splits.drug_target_relations);

    TrainReport report;
    report.train_examples = train_triples.size();

    std::mt19937_64 shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::size_t> order(train_triples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto epoch_start = Clock::now();
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
            grads.zero();
            for (std::size_t i = begin; i < end; ++i) {
                const Triple& t = train_triples[order[i]];
                const auto ctx_start = Clock::now();
                const InputSequence seq = builder.example(t);
                report.context_seconds += seconds_between(ctx_start, Clock::now());

                ForwardTrace trace;
                const auto probs = forward(model, seq, &trace);
                const auto label = static_cast<std::size_t>(seq.label);
                const LossResult loss = cross_entropy(probs, label);
                if (!std::isfinite(loss.value)) {
                    throw TrainError("non-finite loss at epoch " + std::to_string(epoch));
                }
                if (loss.clamped) ++report.clamp_count;
                loss_sum += loss.value;
                backward(model, trace, label, grads);
            }
            grads.scale(1.0 / static_cast<double>(end - begin));
            optimizer.step(grads);
            ++report.optimizer_steps;
        }
        report.epoch_loss.push_back(loss_sum / static_cast<double>(order.size()));

        if (!valid_triples.empty()) {
            const auto vr = evaluate_split(model, builder, ds, ds.splits.valid, cfg);
            report.epoch_valid_mrr.push_back(vr.mrr);
            if (vr.mrr > report.best_valid_mrr) {
                report.best_valid_mrr = vr.mrr;
                report.best_epoch = epoch;
                if (!checkpoint_dir.empty()) {
                    report.best_checkpoint = checkpoint_dir + "/best.ckpt";
                    save_checkpoint(model, report.best_checkpoint, manifest);
                }
            }
        }
        if (!checkpoint_dir.empty()) {
            report.last_checkpoint = checkpoint_dir + "/last.ckpt";
            save_checkpoint(model, report.last_checkpoint, manifest);
        }

        report.epoch_seconds.push_back(seconds_between(epoch_start, Clock::now()));
        if (progress) {
            *progress << "epoch " << epoch << "/" << cfg.epochs << "  loss "
                      << report.epoch_loss.back();
            if (!report.epoch_valid_mrr.empty()) {
                *progress << "  valid_mrr " << report.epoch_valid_mrr.back();
            }
            *progress << '\n';
        }
    }
    return {std::move(model), std::move(report)};
}

}  // namespace mucos
