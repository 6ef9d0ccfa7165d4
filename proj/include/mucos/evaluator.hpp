#pragma once
// Ranking evaluation: one forward pass scores every candidate class at once;
// the gold class's rank is 1 + the number of candidates scoring above it by
// more than a tie tolerance (near-ties resolve in the gold's favor, which
// keeps queries with identical inputs from being penalized by float noise).
// Reports MRR and Hits@{1,3,5,10}.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <unordered_map>
#include <vector>

#include "mucos/encoder.hpp"
#include "mucos/errors.hpp"
#include "mucos/pipeline.hpp"

namespace mucos {

inline constexpr int kHitsKs[] = {1, 3, 5, 10};
inline constexpr double kDefaultTieTolerance = 1e-6;

struct RankingReport {
    Task task = Task::kRelation;
    Subtask subtask = Subtask::kGeneral;
    SamplingMode mode = SamplingMode::kSampled;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t query_count = 0;
    double mrr = 0.0;
    double hits1 = 0.0;
    double hits3 = 0.0;
    double hits5 = 0.0;
    double hits10 = 0.0;
    // Queries whose input entities never occur in a train triple; they are
    // scored through their (untrained) embedding rows, not skipped.
    std::size_t unseen_entity_queries = 0;
    std::vector<std::size_t> ranks;

    double hits(int at) const {
        switch (at) {
            case 1: return hits1;
            case 3: return hits3;
            case 5: return hits5;
            case 10: return hits10;
            default: throw EvalError("hits@k reported only for k in {1,3,5,10}");
        }
    }
};

inline std::size_t rank_from_scores(const std::vector<double>& scores, std::size_t gold,
                                    double tie_tolerance = kDefaultTieTolerance) {
    if (gold >= scores.size()) throw EvalError("rank: gold class out of range");
    const double gold_score = scores[gold];
    std::size_t better = 0;
    for (std::size_t c = 0; c < scores.size(); ++c) {
        if (c != gold && scores[c] > gold_score + tie_tolerance) ++better;
    }
    return 1 + better;
}

// Candidate-restricted variant; the gold class must be listed.
inline std::size_t rank_query(const EncoderModel& m, const InputSequence& seq, std::size_t gold,
                              const std::vector<std::size_t>& candidates,
                              double tie_tolerance = kDefaultTieTolerance) {
    const auto scores = forward(m, seq);
    if (gold >= scores.size()) throw EvalError("rank: gold class out of range");
    bool gold_listed = false;
    std::size_t better = 0;
    for (std::size_t c : candidates) {
        if (c >= scores.size()) throw EvalError("rank: candidate class out of range");
        if (c == gold) {
            gold_listed = true;
        } else if (scores[c] > scores[gold] + tie_tolerance) {
            ++better;
        }
    }
    if (!gold_listed) throw EvalError("rank: gold candidate missing from candidate set");
    return 1 + better;
}

inline std::size_t rank_query(const EncoderModel& m, const InputSequence& seq, std::size_t gold,
                              double tie_tolerance = kDefaultTieTolerance) {
    return rank_from_scores(forward(m, seq), gold, tie_tolerance);
}

// MRR = mean(1/rank); Hits@k = fraction of ranks <= k.
inline RankingReport compute_metrics(const std::vector<std::size_t>& ranks) {
    if (ranks.empty()) throw EvalError("metrics: empty rank list");
    RankingReport r;
    r.query_count = ranks.size();
    r.ranks = ranks;
    double inv_sum = 0.0;
    std::size_t h1 = 0, h3 = 0, h5 = 0, h10 = 0;
    for (std::size_t rank : ranks) {
        if (rank < 1) throw EvalError("metrics: rank below 1");
        inv_sum += 1.0 / static_cast<double>(rank);
        h1 += rank <= 1;
        h3 += rank <= 3;
        h5 += rank <= 5;
        h10 += rank <= 10;
    }
    const double N = static_cast<double>(ranks.size());
    r.mrr = inv_sum / N;
    r.hits1 = static_cast<double>(h1) / N;
    r.hits3 = static_cast<double>(h3) / N;
    r.hits5 = static_cast<double>(h5) / N;
    r.hits10 = static_cast<double>(h10) / N;
    return r;
}

namespace detail {

// Known gold tails per (head, relation) query, for filtered tail ranking.
inline std::unordered_map<std::uint64_t, std::vector<EntityId>> known_tails_index(
    const DatasetSplits& splits) {
    std::unordered_map<std::uint64_t, std::vector<EntityId>> index;
    auto add = [&](const std::vector<Triple>& triples) {
        for (const auto& t : triples) {
            const std::uint64_t key =
                (static_cast<std::uint64_t>(t.head) << 32) | static_cast<std::uint64_t>(t.relation);
            index[key].push_back(t.tail);
        }
    };
    add(splits.train);
    add(splits.valid);
    add(splits.test);
    return index;
}

}  // namespace detail

// Ranks every triple of `eval_triples` (restricted to the configured
// subtask) and aggregates metrics. Candidates default to every class; the
// tail task can restrict to tails seen in training (gold always kept) and
// can filter out other known-true tails of the same (h, r) query.
inline RankingReport evaluate_split(const EncoderModel& m, const ExampleBuilder& builder,
                                    const Dataset& ds, const std::vector<Triple>& eval_triples,
                                    const TrainConfig& cfg, std::size_t num_threads = 1) {
    if (cfg.subtask == Subtask::kDrugTarget && ds.splits.drug_target_relations.empty()) {
        throw EvalError("drug_target subtask selected but no relations are marked");
    }
    const auto triples =
        subtask_triples(eval_triples, cfg.subtask, ds.splits.drug_target_relations);
    if (triples.empty()) {
        throw EvalError("empty subtask: no evaluation triples after filtering");
    }
    const auto& g = ds.graph;
    const std::size_t num_classes = builder.num_classes();

    std::vector<char> seen_in_train(g.num_entities(), 0);
    for (const auto& t : g.triples) {
        seen_in_train[t.head] = 1;
        seen_in_train[t.tail] = 1;
    }

    std::vector<char> candidate_mask;  // empty = all classes are candidates
    if (cfg.task == Task::kTail && cfg.tail_candidates == TailCandidates::kSeenTails) {
        candidate_mask.assign(num_classes, 0);
        for (const auto& t : g.triples) candidate_mask[t.tail] = 1;
    }

    std::unordered_map<std::uint64_t, std::vector<EntityId>> known_tails;
    const bool filtered = cfg.filtered && cfg.task == Task::kTail;
    if (filtered) known_tails = detail::known_tails_index(ds.splits);

    std::vector<std::size_t> ranks(triples.size(), 0);
    std::atomic<std::size_t> unseen{0};

    auto worker = [&](std::size_t begin, std::size_t end) {
        std::vector<char> excluded;
        for (std::size_t i = begin; i < end; ++i) {
            const Triple& t = triples[i];
            const InputSequence seq = builder.example(t);
            const auto gold = static_cast<std::size_t>(seq.label);
            const auto scores = forward(m, seq);

            bool exclusions = false;
            if (filtered) {
                const std::uint64_t key = (static_cast<std::uint64_t>(t.head) << 32) |
                                          static_cast<std::uint64_t>(t.relation);
                if (auto it = known_tails.find(key); it != known_tails.end()) {
                    excluded.assign(num_classes, 0);
                    for (EntityId known : it->second) {
                        if (known != gold) excluded[known] = 1;
                    }
                    exclusions = true;
                }
            }

            std::size_t better = 0;
            for (std::size_t c = 0; c < num_classes; ++c) {
                if (c == gold) continue;
                if (!candidate_mask.empty() && !candidate_mask[c]) continue;
                if (exclusions && excluded[c]) continue;
                if (scores[c] > scores[gold] + cfg.tie_tolerance) ++better;
            }
            ranks[i] = 1 + better;

            const bool query_unseen = !seen_in_train[t.head] ||
                                      (cfg.task == Task::kRelation && !seen_in_train[t.tail]);
            if (query_unseen) unseen.fetch_add(1, std::memory_order_relaxed);
        }
    };

    if (num_threads <= 1 || triples.size() < 2 * num_threads) {
        worker(0, triples.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (triples.size() + num_threads - 1) / num_threads;
        for (std::size_t t = 0; t < num_threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(triples.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    RankingReport report = compute_metrics(ranks);
    report.task = cfg.task;
    report.subtask = cfg.subtask;
    report.mode = cfg.mode;
    report.n = cfg.n;
    report.k = cfg.k;
    report.unseen_entity_queries = unseen.load();
    return report;
}

}  // namespace mucos
