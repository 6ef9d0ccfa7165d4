#pragma once
// Glue between the graph and the classifier: bundles the density index,
// context sampler and token vocabulary so one call turns a triple into a
// labeled input sequence for the configured task.

#include <cstdint>
#include <set>
#include <vector>

#include "mucos/config.hpp"
#include "mucos/context.hpp"
#include "mucos/density.hpp"
#include "mucos/kg.hpp"
#include "mucos/sequence.hpp"

namespace mucos {

// Restricts a split to the configured subtask. GENERAL keeps everything;
// DRUG_TARGET keeps triples whose relation is marked.
inline std::vector<Triple> subtask_triples(const std::vector<Triple>& triples, Subtask subtask,
                                           const std::set<RelationId>& marked) {
    if (subtask == Subtask::kGeneral) return triples;
    std::vector<Triple> out;
    for (const auto& t : triples) {
        if (marked.count(t.relation)) out.push_back(t);
    }
    return out;
}

class ExampleBuilder {
public:
    ExampleBuilder(const KnowledgeGraph& g, const TrainConfig& cfg)
        : graph_(&g),
          cfg_(cfg),
          density_(DensityIndex::build(g, cfg.density_mode)),
          sampler_(g, density_, cfg.undirected_context),
          vocab_(g) {}

    const KnowledgeGraph& graph() const { return *graph_; }
    const TrainConfig& config() const { return cfg_; }
    const DensityIndex& density() const { return density_; }
    const ContextSampler& sampler() const { return sampler_; }
    const TokenVocab& vocab() const { return vocab_; }

    // Classifier output width: all relations (relation task) or all
    // entities (tail task).
    std::size_t num_classes() const {
        return cfg_.task == Task::kRelation ? graph_->num_relations() : graph_->num_entities();
    }

    EncoderConfig encoder_config() const {
        EncoderConfig ec;
        ec.encoder = cfg_.encoder;
        ec.vocab_size = vocab_.size();
        ec.embed_dim = cfg_.embed_dim;
        ec.ff_dim = cfg_.ff_dim;
        ec.num_classes = num_classes();
        ec.max_len = cfg_.max_len;
        return ec;
    }

    InputSequence relation_example(EntityId h, EntityId t, std::int64_t gold = -1) const {
        const auto bundle = sampler_.relation_query_bundle(h, t, cfg_.sampler_options());
        auto seq = build_relation_query(h, t, bundle.head_context, bundle.tail_context, vocab_,
                                        cfg_.sequence_options());
        seq.label = gold;
        return seq;
    }

    InputSequence tail_example(EntityId h, RelationId r, std::int64_t gold = -1) const {
        const auto bundle = sampler_.tail_query_bundle(h, r, cfg_.sampler_options());
        auto seq = build_tail_query(h, r, bundle.head_context, bundle.relation_context, vocab_,
                                    cfg_.sequence_options());
        seq.label = gold;
        return seq;
    }

    // Query inputs + gold label for one triple under the configured task.
    InputSequence example(const Triple& t) const {
        return cfg_.task == Task::kRelation
                   ? relation_example(t.head, t.tail, static_cast<std::int64_t>(t.relation))
                   : tail_example(t.head, t.relation, static_cast<std::int64_t>(t.tail));
    }

private:
    const KnowledgeGraph* graph_;
    TrainConfig cfg_;
    DensityIndex density_;
    ContextSampler sampler_;
    TokenVocab vocab_;
};

}  // namespace mucos
