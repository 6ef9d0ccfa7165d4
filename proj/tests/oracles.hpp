#pragma once
// Brute-force reference implementations, written from the definitions and
// kept independent of the library's incremental/precomputed code paths.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mucos/context.hpp"
#include "mucos/density.hpp"
#include "mucos/kg.hpp"

namespace oracle {

// Density = number of train triples an entity occurs in, per role mode.
inline std::vector<std::size_t> density_counts(const mucos::KnowledgeGraph& g,
                                               mucos::DensityMode mode) {
    std::vector<std::size_t> counts(g.num_entities(), 0);
    for (const auto& t : g.triples) {
        if (mode == mucos::DensityMode::kBoth) counts[t.head] += 1;
        counts[t.tail] += 1;
    }
    return counts;
}

// Stable order: density descending, id ascending.
inline std::vector<mucos::EntityId> rank_entities(std::vector<mucos::EntityId> entities,
                                                  const std::vector<std::size_t>& counts) {
    std::stable_sort(entities.begin(), entities.end(),
                     [&](mucos::EntityId a, mucos::EntityId b) {
                         if (counts[a] != counts[b]) return counts[a] > counts[b];
                         return a < b;
                     });
    return entities;
}

// Entity context from a raw edge list (outgoing edges for a head query,
// incoming for a tail query). FULL keeps first-appearance enumeration
// order; SAMPLED takes the density top-n entities and, slot by slot, their
// linking relations in edge order, globally deduplicated.
inline mucos::ContextTokens entity_context(const std::vector<mucos::Edge>& edges,
                                           const std::vector<std::size_t>& counts,
                                           std::size_t n, mucos::SamplingMode mode) {
    std::vector<mucos::RelationId> rels;
    std::vector<mucos::EntityId> ents;
    for (const auto& e : edges) {
        if (std::find(rels.begin(), rels.end(), e.relation) == rels.end()) {
            rels.push_back(e.relation);
        }
        if (std::find(ents.begin(), ents.end(), e.entity) == ents.end()) {
            ents.push_back(e.entity);
        }
    }

    mucos::ContextTokens out;
    if (mode == mucos::SamplingMode::kFull) {
        for (auto r : rels) out.push_back(mucos::ContextToken::relation(r));
        for (auto e : ents) out.push_back(mucos::ContextToken::entity(e));
        return out;
    }

    const auto ranked = rank_entities(ents, counts);
    const std::size_t take = std::min(n, ranked.size());
    std::vector<mucos::RelationId> selected_rels;
    for (std::size_t i = 0; i < take; ++i) {
        for (const auto& e : edges) {
            if (e.entity != ranked[i]) continue;
            if (std::find(selected_rels.begin(), selected_rels.end(), e.relation) ==
                selected_rels.end()) {
                selected_rels.push_back(e.relation);
            }
        }
    }
    for (auto r : selected_rels) out.push_back(mucos::ContextToken::relation(r));
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back(mucos::ContextToken::entity(ranked[i]));
    }
    return out;
}

inline std::vector<mucos::Edge> out_edges(const mucos::KnowledgeGraph& g, mucos::EntityId h,
                                          bool undirected) {
    std::vector<mucos::Edge> edges;
    for (const auto& t : g.triples) {
        if (t.head == h) edges.push_back({t.relation, t.tail});
    }
    if (undirected) {
        for (const auto& t : g.triples) {
            if (t.tail == h) edges.push_back({t.relation, t.head});
        }
    }
    return edges;
}

inline std::vector<mucos::Edge> in_edges(const mucos::KnowledgeGraph& g, mucos::EntityId t,
                                         bool undirected) {
    std::vector<mucos::Edge> edges;
    for (const auto& tr : g.triples) {
        if (tr.tail == t) edges.push_back({tr.relation, tr.head});
    }
    if (undirected) {
        for (const auto& tr : g.triples) {
            if (tr.head == t) edges.push_back({tr.relation, tr.tail});
        }
    }
    return edges;
}

// Relation context: (head, tail) pairs of the relation's train triples.
// FULL keeps train order; SAMPLED sorts by density sum (descending, then
// pair ascending, then original position) and keeps k pairs.
inline std::vector<mucos::EntityId> relation_context(const mucos::KnowledgeGraph& g,
                                                     mucos::RelationId r,
                                                     const std::vector<std::size_t>& counts,
                                                     std::size_t k, mucos::SamplingMode mode) {
    std::vector<std::pair<mucos::EntityId, mucos::EntityId>> pairs;
    for (const auto& t : g.triples) {
        if (t.relation == r) pairs.emplace_back(t.head, t.tail);
    }

    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0u);
    if (mode == mucos::SamplingMode::kSampled) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto sum_a = counts[pairs[a].first] + counts[pairs[a].second];
            const auto sum_b = counts[pairs[b].first] + counts[pairs[b].second];
            if (sum_a != sum_b) return sum_a > sum_b;
            if (pairs[a] != pairs[b]) return pairs[a] < pairs[b];
            return a < b;
        });
        if (order.size() > k) order.resize(k);
    }

    std::vector<mucos::EntityId> out;
    for (auto i : order) {
        out.push_back(pairs[i].first);
        out.push_back(pairs[i].second);
    }
    return out;
}

// One-line MRR / Hits re-implementation.
inline double mrr(const std::vector<std::size_t>& ranks) {
    double s = 0.0;
    for (auto r : ranks) s += 1.0 / static_cast<double>(r);
    return s / static_cast<double>(ranks.size());
}

inline double hits_at(const std::vector<std::size_t>& ranks, std::size_t k) {
    std::size_t c = 0;
    for (auto r : ranks) c += r <= k;
    return static_cast<double>(c) / static_cast<double>(ranks.size());
}

// Rank by sorting candidate indices by score, descending, gold first among
// equals. Matches the optimistic-tie rank whenever score gaps exceed the
// tie tolerance.
inline std::size_t rank_by_sort(const std::vector<double>& scores, std::size_t gold) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a == gold;  // gold wins exact ties
    });
    return static_cast<std::size_t>(std::find(idx.begin(), idx.end(), gold) - idx.begin()) + 1;
}

}  // namespace oracle
