#pragma once
// Fixed-length token sequences for the encoder.
//
// Relation query (h, ?, t):  CLS h SEP Hc... SEP t SEP Tc... SEP
// Tail query     (h, r, ?):  CLS h SEP Hc... SEP r SEP Rc... SEP
//
// The 7-token skeleton (CLS, the two query tokens, four separators) always
// survives; when the sequence exceeds max_len, tokens are dropped from the
// end of the longer context first, alternating, with ties dropping from the
// second context so the head context survives longest.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mucos/context.hpp"
#include "mucos/kg.hpp"

namespace mucos {

// CLS, two query tokens, four separators.
inline constexpr std::size_t kSequenceSkeletonTokens = 7;

// Token ids: PAD=0, CLS=1, SEP=2, then one token per entity, then one per
// relation. Entities are opaque ids; there is no subword tokenization.
class TokenVocab {
public:
    static constexpr std::uint32_t kPad = 0;
    static constexpr std::uint32_t kCls = 1;
    static constexpr std::uint32_t kSep = 2;

    TokenVocab(std::size_t num_entities, std::size_t num_relations)
        : num_entities_(num_entities), num_relations_(num_relations) {}

    explicit TokenVocab(const KnowledgeGraph& g)
        : TokenVocab(g.num_entities(), g.num_relations()) {}

    std::uint32_t entity_token(EntityId e) const { return 3 + e; }
    std::uint32_t relation_token(RelationId r) const {
        return static_cast<std::uint32_t>(3 + num_entities_ + r);
    }
    std::uint32_t context_token(const ContextToken& t) const {
        return t.kind == ContextToken::Kind::kRelation ? relation_token(t.id) : entity_token(t.id);
    }
    std::size_t size() const { return 3 + num_entities_ + num_relations_; }
    std::size_t num_entities() const { return num_entities_; }
    std::size_t num_relations() const { return num_relations_; }

private:
    std::size_t num_entities_;
    std::size_t num_relations_;
};

struct InputSequence {
    std::vector<std::uint32_t> token_ids;   // length exactly max_len
    std::vector<std::uint8_t> attention_mask;  // 1 exactly on non-PAD positions
    std::int64_t label = -1;                // class id; -1 when unlabeled
};

struct SequenceOptions {
    std::size_t max_len = 128;
    // Ablation switches: an off segment is emitted empty, skeleton intact.
    bool use_head_context = true;
    bool use_relation_context = true;
};

namespace detail {

inline void truncate_contexts(std::vector<std::uint32_t>& a, std::vector<std::uint32_t>& b,
                              std::size_t budget) {
    while (a.size() + b.size() > budget) {
        if (a.size() > b.size()) {
            a.pop_back();
        } else {
            b.pop_back();
        }
    }
}

inline InputSequence assemble(std::uint32_t query1, std::vector<std::uint32_t> ctx1,
                              std::uint32_t query2, std::vector<std::uint32_t> ctx2,
                              std::size_t max_len) {
    if (max_len < kSequenceSkeletonTokens) {
        throw std::invalid_argument("sequence max_len must be >= 7 to fit the query skeleton");
    }
    truncate_contexts(ctx1, ctx2, max_len - kSequenceSkeletonTokens);

    InputSequence seq;
    seq.token_ids.reserve(max_len);
    seq.token_ids.push_back(TokenVocab::kCls);
    seq.token_ids.push_back(query1);
    seq.token_ids.push_back(TokenVocab::kSep);
    seq.token_ids.insert(seq.token_ids.end(), ctx1.begin(), ctx1.end());
    seq.token_ids.push_back(TokenVocab::kSep);
    seq.token_ids.push_back(query2);
    seq.token_ids.push_back(TokenVocab::kSep);
    seq.token_ids.insert(seq.token_ids.end(), ctx2.begin(), ctx2.end());
    seq.token_ids.push_back(TokenVocab::kSep);

    seq.attention_mask.assign(seq.token_ids.size(), 1);
    seq.token_ids.resize(max_len, TokenVocab::kPad);
    seq.attention_mask.resize(max_len, 0);
    return seq;
}

inline std::vector<std::uint32_t> map_tokens(const ContextTokens& ctx, const TokenVocab& vocab) {
    std::vector<std::uint32_t> out;
    out.reserve(ctx.size());
    for (const auto& t : ctx) out.push_back(vocab.context_token(t));
    return out;
}

}  // namespace detail

inline InputSequence build_relation_query(EntityId h, EntityId t, const ContextTokens& head_ctx,
                                          const ContextTokens& tail_ctx, const TokenVocab& vocab,
                                          const SequenceOptions& opt = {}) {
    std::vector<std::uint32_t> hc =
        opt.use_head_context ? detail::map_tokens(head_ctx, vocab) : std::vector<std::uint32_t>{};
    std::vector<std::uint32_t> tc = detail::map_tokens(tail_ctx, vocab);
    return detail::assemble(vocab.entity_token(h), std::move(hc), vocab.entity_token(t),
                            std::move(tc), opt.max_len);
}

inline InputSequence build_tail_query(EntityId h, RelationId r, const ContextTokens& head_ctx,
                                      const std::vector<EntityId>& relation_ctx,
                                      const TokenVocab& vocab, const SequenceOptions& opt = {}) {
    std::vector<std::uint32_t> hc =
        opt.use_head_context ? detail::map_tokens(head_ctx, vocab) : std::vector<std::uint32_t>{};
    std::vector<std::uint32_t> rc;
    if (opt.use_relation_context) {
        rc.reserve(relation_ctx.size());
        for (EntityId e : relation_ctx) rc.push_back(vocab.entity_token(e));
    }
    return detail::assemble(vocab.entity_token(h), std::move(hc), vocab.relation_token(r),
                            std::move(rc), opt.max_len);
}

// Space-separated token labels, for debugging.
inline std::string dump_sequence(const InputSequence& seq, const TokenVocab& vocab,
                                 const KnowledgeGraph& g) {
    std::ostringstream out;
    for (std::size_t i = 0; i < seq.token_ids.size(); ++i) {
        if (i) out << ' ';
        const auto id = seq.token_ids[i];
        if (id == TokenVocab::kPad) {
            out << "PAD";
        } else if (id == TokenVocab::kCls) {
            out << "CLS";
        } else if (id == TokenVocab::kSep) {
            out << "SEP";
        } else if (id < 3 + vocab.num_entities()) {
            out << g.entities.label(static_cast<EntityId>(id - 3));
        } else {
            out << g.relations.label(static_cast<RelationId>(id - 3 - vocab.num_entities()));
        }
    }
    return out.str();
}

}  // namespace mucos
