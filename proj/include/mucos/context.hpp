#pragma once
// Context construction for completion queries, in two modes:
//
//   FULL     entire neighborhood, no sampling
//   SAMPLED  density-sampled: top-n neighbor entities for the head/tail
//            contexts, top-k entity pairs for the relation context
//
// Head context of h uses outgoing train edges: the distinct relations that
// link h to its selected neighbors, then the selected neighbor entities.
// Tail context mirrors this over incoming edges. Relation context of r is
// the (head, tail) pairs connected by r, ranked by the density sum of the
// pair, flattened pair by pair.
//
// The sampler precomputes density-sorted adjacency views once per graph, so
// a SAMPLED context costs output size, not neighborhood size. Everything is
// immutable after construction and safe for concurrent reads.
//
// Ordering rules (all deterministic):
// - density sort: descending density, ties by ascending entity id; pairs by
//   descending density sum, ties by ascending (head id, tail id)
// - FULL neighborhoods: deduplicated, first-appearance (train) order
// - sampled relations: selected neighbors are scanned in density order and
//   each neighbor's linking relations appended in edge order, deduplicated

#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mucos/density.hpp"
#include "mucos/kg.hpp"

namespace mucos {

enum class SamplingMode { kFull, kSampled };

inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

struct ContextToken {
    enum class Kind : std::uint8_t { kRelation, kEntity };
    Kind kind;
    std::uint32_t id;

    static ContextToken relation(RelationId r) { return {Kind::kRelation, r}; }
    static ContextToken entity(EntityId e) { return {Kind::kEntity, e}; }

    friend bool operator==(const ContextToken&, const ContextToken&) = default;
};

using ContextTokens = std::vector<ContextToken>;

struct SamplerOptions {
    SamplingMode mode = SamplingMode::kSampled;
    std::size_t n = 15;  // head/tail context entity budget
    std::size_t k = 10;  // relation context pair budget
};

// Sampled (or full) contexts for one query.
struct ContextBundle {
    ContextTokens head_context;
    ContextTokens tail_context;
    std::vector<EntityId> relation_context;  // flattened (head, tail) pairs
    SamplingMode mode = SamplingMode::kSampled;
    std::size_t n = 0;
    std::size_t k = 0;
};

// One-hop neighborhood of an entity in a fixed edge direction.
struct Neighborhood {
    std::vector<RelationId> relations;  // distinct, first-appearance order
    std::vector<EntityId> entities;     // distinct, first-appearance order
    // Density-ranked view of `entities`, plus the distinct linking relations
    // per ranked neighbor (edge order), for O(selection) sampling.
    std::vector<EntityId> entities_by_density;
    std::vector<std::vector<RelationId>> relations_by_density_slot;
};

class ContextSampler {
public:
    ContextSampler(const KnowledgeGraph& g, const DensityIndex& d, bool undirected_context = false)
        : graph_(&g) {
        head_views_.resize(g.num_entities());
        tail_views_.resize(g.num_entities());
        for (EntityId e = 0; e < g.num_entities(); ++e) {
            std::vector<Edge> head_edges = g.out_index[e];
            std::vector<Edge> tail_edges = g.in_index[e];
            if (undirected_context) {
                head_edges.insert(head_edges.end(), g.in_index[e].begin(), g.in_index[e].end());
                tail_edges = g.in_index[e];
                tail_edges.insert(tail_edges.end(), g.out_index[e].begin(), g.out_index[e].end());
            }
            head_views_[e] = build_view(head_edges, d);
            tail_views_[e] = build_view(tail_edges, d);
        }

        pair_order_.resize(g.num_relations());
        for (RelationId r = 0; r < g.num_relations(); ++r) {
            const auto& pairs = g.by_relation[r];
            auto& order = pair_order_[r];
            order.resize(pairs.size());
            std::iota(order.begin(), order.end(), 0u);
            std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
                const auto sum_a = d.density(pairs[a].first) + d.density(pairs[a].second);
                const auto sum_b = d.density(pairs[b].first) + d.density(pairs[b].second);
                if (sum_a != sum_b) return sum_a > sum_b;
                if (pairs[a] != pairs[b]) return pairs[a] < pairs[b];
                return a < b;
            });
        }
    }

    const KnowledgeGraph& graph() const { return *graph_; }

    const Neighborhood& head_neighborhood(EntityId h) const { return head_views_.at(h); }
    const Neighborhood& tail_neighborhood(EntityId t) const { return tail_views_.at(t); }

    ContextTokens sample_head_context(EntityId h, std::size_t n, SamplingMode mode) const {
        return sample_entity_context(head_views_.at(h), n, mode);
    }

    ContextTokens sample_tail_context(EntityId t, std::size_t n, SamplingMode mode) const {
        return sample_entity_context(tail_views_.at(t), n, mode);
    }

    std::vector<EntityId> sample_relation_context(RelationId r, std::size_t k,
                                                  SamplingMode mode) const {
        const auto& pairs = graph_->by_relation.at(r);
        std::vector<EntityId> out;
        if (mode == SamplingMode::kFull) {
            out.reserve(pairs.size() * 2);
            for (const auto& [h, t] : pairs) {
                out.push_back(h);
                out.push_back(t);
            }
            return out;
        }
        const auto& order = pair_order_[r];
        const std::size_t take = std::min(k, order.size());
        out.reserve(take * 2);
        for (std::size_t i = 0; i < take; ++i) {
            out.push_back(pairs[order[i]].first);
            out.push_back(pairs[order[i]].second);
        }
        return out;
    }

    // Contexts for a (h, ?, t) query: head + tail context.
    ContextBundle relation_query_bundle(EntityId h, EntityId t, const SamplerOptions& opt) const {
        ContextBundle b;
        b.mode = opt.mode;
        b.n = opt.n;
        b.k = opt.k;
        b.head_context = sample_head_context(h, opt.n, opt.mode);
        b.tail_context = sample_tail_context(t, opt.n, opt.mode);
        return b;
    }

    // Contexts for a (h, r, ?) query: head + relation context.
    ContextBundle tail_query_bundle(EntityId h, RelationId r, const SamplerOptions& opt) const {
        ContextBundle b;
        b.mode = opt.mode;
        b.n = opt.n;
        b.k = opt.k;
        b.head_context = sample_head_context(h, opt.n, opt.mode);
        b.relation_context = sample_relation_context(r, opt.k, opt.mode);
        return b;
    }

private:
    static Neighborhood build_view(const std::vector<Edge>& edges, const DensityIndex& d) {
        Neighborhood v;
        std::unordered_map<EntityId, std::vector<RelationId>> linking;
        std::unordered_map<RelationId, bool> seen_rel;
        for (const auto& e : edges) {
            if (seen_rel.emplace(e.relation, true).second) v.relations.push_back(e.relation);
            auto [it, fresh] = linking.try_emplace(e.entity);
            if (fresh) v.entities.push_back(e.entity);
            auto& rels = it->second;
            if (std::find(rels.begin(), rels.end(), e.relation) == rels.end()) {
                rels.push_back(e.relation);
            }
        }
        v.entities_by_density = top_n_entities(v.entities, d, kNoLimit);
        v.relations_by_density_slot.reserve(v.entities_by_density.size());
        for (EntityId e : v.entities_by_density) {
            v.relations_by_density_slot.push_back(linking[e]);
        }
        return v;
    }

    static ContextTokens sample_entity_context(const Neighborhood& v, std::size_t n,
                                               SamplingMode mode) {
        ContextTokens out;
        if (mode == SamplingMode::kFull) {
            out.reserve(v.relations.size() + v.entities.size());
            for (RelationId r : v.relations) out.push_back(ContextToken::relation(r));
            for (EntityId e : v.entities) out.push_back(ContextToken::entity(e));
            return out;
        }
        const std::size_t take = std::min(n, v.entities_by_density.size());
        std::vector<RelationId> rels;
        for (std::size_t i = 0; i < take; ++i) {
            for (RelationId r : v.relations_by_density_slot[i]) {
                if (std::find(rels.begin(), rels.end(), r) == rels.end()) rels.push_back(r);
            }
        }
        out.reserve(rels.size() + take);
        for (RelationId r : rels) out.push_back(ContextToken::relation(r));
        for (std::size_t i = 0; i < take; ++i) {
            out.push_back(ContextToken::entity(v.entities_by_density[i]));
        }
        return out;
    }

    const KnowledgeGraph* graph_;
    std::vector<Neighborhood> head_views_;
    std::vector<Neighborhood> tail_views_;
    std::vector<std::vector<std::uint32_t>> pair_order_;
};

inline std::string format_tokens(const ContextTokens& tokens, const KnowledgeGraph& g) {
    std::ostringstream out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out << ' ';
        out << (tokens[i].kind == ContextToken::Kind::kRelation ? g.relations.label(tokens[i].id)
                                                                : g.entities.label(tokens[i].id));
    }
    return out.str();
}

inline std::string format_entities(const std::vector<EntityId>& entities, const KnowledgeGraph& g) {
    std::ostringstream out;
    for (std::size_t i = 0; i < entities.size(); ++i) {
        if (i) out << ' ';
        out << g.entities.label(entities[i]);
    }
    return out.str();
}

}  // namespace mucos
