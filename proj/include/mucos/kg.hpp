#pragma once
// Triple store for (head, relation, tail) facts.
//
// - Entity/relation vocabularies intern labels in first-appearance order
//   (train file first, then valid, then test), so ids are dense and stable.
// - Adjacency indexes (outgoing, incoming, by-relation) are built from the
//   train split only; valid/test triples are held back for supervision and
//   evaluation and never enter a context.
// - Duplicate triples within a split are kept: density counts occurrence
//   frequency, so the store has multiset semantics. Splits must be disjoint
//   as multisets.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mucos/errors.hpp"

namespace mucos {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
    EntityId head;
    RelationId relation;
    EntityId tail;

    friend bool operator==(const Triple&, const Triple&) = default;
};

// Label <-> dense id mapping. Ids are assigned in first-appearance order.
class Vocab {
public:
    std::uint32_t intern(const std::string& label) {
        auto it = index_.find(label);
        if (it != index_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(labels_.size());
        labels_.push_back(label);
        index_.emplace(label, id);
        return id;
    }

    std::optional<std::uint32_t> find(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& label(std::uint32_t id) const { return labels_.at(id); }
    std::size_t size() const { return labels_.size(); }

    friend bool operator==(const Vocab& a, const Vocab& b) {
        return a.labels_ == b.labels_;
    }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

struct Edge {
    RelationId relation;
    EntityId entity;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Immutable after construction; safe for concurrent reads.
struct KnowledgeGraph {
    Vocab entities;
    Vocab relations;
    std::vector<Triple> triples;  // train triples, file order

    // Per-entity/per-relation views of `triples`. Sized by the full
    // vocabulary, so eval-only entities have empty (but valid) slots.
    std::vector<std::vector<Edge>> out_index;
    std::vector<std::vector<Edge>> in_index;
    std::vector<std::vector<std::pair<EntityId, EntityId>>> by_relation;

    std::size_t num_entities() const { return entities.size(); }
    std::size_t num_relations() const { return relations.size(); }
};

struct DatasetSplits {
    std::vector<Triple> train;
    std::vector<Triple> valid;
    std::vector<Triple> test;
    std::set<RelationId> drug_target_relations;
};

struct Dataset {
    KnowledgeGraph graph;
    DatasetSplits splits;
};

using RawTriple = std::array<std::string, 3>;

// Parses one TSV split file: `head<delim>relation<delim>tail`, no header.
// Blank lines are skipped; anything else with a field count != 3 is a
// parse error reported with its line number.
inline std::vector<RawTriple> parse_triple_file(const std::string& path, char delimiter = '\t') {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");

    std::vector<RawTriple> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        RawTriple fields;
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == delimiter) {
                if (field >= 3) {
                    throw ParseError(path + ":" + std::to_string(line_no) +
                                     ": expected 3 fields, found more");
                }
                fields[field++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (field != 3) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 3 fields, found " +
                             std::to_string(field));
        }
        for (const auto& f : fields) {
            if (f.empty()) {
                throw ParseError(path + ":" + std::to_string(line_no) + ": empty field");
            }
        }
        out.push_back(std::move(fields));
    }
    if (out.empty()) throw ParseError(path + ": empty triple file");
    return out;
}

namespace detail {

inline void check_split_disjoint(const std::vector<Triple>& a, const std::vector<Triple>& b,
                                 const char* a_name, const char* b_name) {
    std::map<std::tuple<EntityId, RelationId, EntityId>, std::size_t> counts;
    for (const auto& t : a) ++counts[{t.head, t.relation, t.tail}];
    for (const auto& t : b) {
        if (counts.count({t.head, t.relation, t.tail})) {
            throw ParseError(std::string("splits overlap: a triple appears in both ") + a_name +
                             " and " + b_name);
        }
    }
}

}  // namespace detail

// Interns vocabularies over the union of all splits (train, valid, test in
// that order) and indexes the train triples.
inline Dataset build_dataset(const std::vector<RawTriple>& raw_train,
                             const std::vector<RawTriple>& raw_valid = {},
                             const std::vector<RawTriple>& raw_test = {}) {
    Dataset ds;
    auto intern_split = [&ds](const std::vector<RawTriple>& raw) {
        std::vector<Triple> out;
        out.reserve(raw.size());
        for (const auto& [h, r, t] : raw) {
            out.push_back({ds.graph.entities.intern(h), ds.graph.relations.intern(r),
                           ds.graph.entities.intern(t)});
        }
        return out;
    };
    ds.splits.train = intern_split(raw_train);
    ds.splits.valid = intern_split(raw_valid);
    ds.splits.test = intern_split(raw_test);

    detail::check_split_disjoint(ds.splits.train, ds.splits.valid, "train", "valid");
    detail::check_split_disjoint(ds.splits.train, ds.splits.test, "train", "test");
    detail::check_split_disjoint(ds.splits.valid, ds.splits.test, "valid", "test");

    auto& g = ds.graph;
    g.triples = ds.splits.train;
    g.out_index.assign(g.num_entities(), {});
    g.in_index.assign(g.num_entities(), {});
    g.by_relation.assign(g.num_relations(), {});
    for (const auto& t : g.triples) {
        g.out_index[t.head].push_back({t.relation, t.tail});
        g.in_index[t.tail].push_back({t.relation, t.head});
        g.by_relation[t.relation].emplace_back(t.head, t.tail);
    }
    return ds;
}

// Loads a dataset from per-split TSV files. valid/test paths may be empty
// strings, yielding empty splits.
inline Dataset load_dataset(const std::string& train_path, const std::string& valid_path = "",
                            const std::string& test_path = "", char delimiter = '\t') {
    auto raw_train = parse_triple_file(train_path, delimiter);
    std::vector<RawTriple> raw_valid, raw_test;
    if (!valid_path.empty()) raw_valid = parse_triple_file(valid_path, delimiter);
    if (!test_path.empty()) raw_test = parse_triple_file(test_path, delimiter);
    return build_dataset(raw_train, raw_valid, raw_test);
}

inline void export_split_tsv(std::ostream& out, const KnowledgeGraph& g,
                             const std::vector<Triple>& triples, char delimiter = '\t') {
    for (const auto& t : triples) {
        out << g.entities.label(t.head) << delimiter << g.relations.label(t.relation) << delimiter
            << g.entities.label(t.tail) << '\n';
    }
}

// Marks the drug-target relation subset from a list of relation labels.
inline void mark_drug_target_relations(Dataset& ds, const std::vector<std::string>& labels) {
    ds.splits.drug_target_relations.clear();
    for (const auto& label : labels) {
        auto id = ds.graph.relations.find(label);
        if (!id) throw ConfigError("unknown drug-target relation label '" + label + "'");
        ds.splits.drug_target_relations.insert(*id);
    }
}

struct StatsReport {
    std::size_t num_entities = 0;
    std::size_t num_relations = 0;
    std::size_t total_triples = 0;  // across all splits
    std::size_t train_triples = 0;
    std::size_t valid_triples = 0;
    std::size_t test_triples = 0;
    // Entities that occur in valid/test but never in a train triple, plus
    // the number of eval triples touching at least one of them.
    std::size_t unseen_valid_entities = 0;
    std::size_t unseen_test_entities = 0;
    std::size_t unseen_valid_triples = 0;
    std::size_t unseen_test_triples = 0;

    double avg_density() const {
        return static_cast<double>(total_triples) / static_cast<double>(num_entities);
    }
    double avg_appearance() const {
        return static_cast<double>(total_triples) / static_cast<double>(num_relations);
    }
};

inline StatsReport graph_stats(const Dataset& ds) {
    const auto& g = ds.graph;
    StatsReport s;
    s.num_entities = g.num_entities();
    s.num_relations = g.num_relations();
    s.train_triples = ds.splits.train.size();
    s.valid_triples = ds.splits.valid.size();
    s.test_triples = ds.splits.test.size();
    s.total_triples = s.train_triples + s.valid_triples + s.test_triples;
    if (s.num_entities == 0 || s.total_triples == 0) {
        throw std::invalid_argument("graph_stats: empty graph");
    }

    std::vector<char> in_train(g.num_entities(), 0);
    for (const auto& t : ds.splits.train) {
        in_train[t.head] = 1;
        in_train[t.tail] = 1;
    }
    auto count_unseen = [&](const std::vector<Triple>& split, std::size_t& ent_out,
                            std::size_t& tri_out) {
        std::set<EntityId> unseen;
        for (const auto& t : split) {
            bool touched = false;
            if (!in_train[t.head]) { unseen.insert(t.head); touched = true; }
            if (!in_train[t.tail]) { unseen.insert(t.tail); touched = true; }
            if (touched) ++tri_out;
        }
        ent_out = unseen.size();
    };
    count_unseen(ds.splits.valid, s.unseen_valid_entities, s.unseen_valid_triples);
    count_unseen(ds.splits.test, s.unseen_test_entities, s.unseen_test_triples);
    return s;
}

// Deterministic random dataset: every entity appears in at least one triple,
// all triples are distinct (so the 90/5/5 split stays disjoint), and the
// valid/test splits take floor(5%) each with the remainder going to train.
inline Dataset generate_synthetic(std::size_t num_entities, std::size_t num_relations,
                                  std::size_t num_triples, std::uint64_t seed) {
    if (num_entities == 0 || num_relations == 0 || num_triples == 0) {
        throw std::invalid_argument("generate_synthetic: counts must be positive");
    }
    if (num_triples < num_entities) {
        throw std::invalid_argument("generate_synthetic: need num_triples >= num_entities");
    }
    if (static_cast<double>(num_triples) >
        static_cast<double>(num_entities) * static_cast<double>(num_entities) *
            static_cast<double>(num_relations)) {
        throw std::invalid_argument("generate_synthetic: more triples than distinct (h,r,t) slots");
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> ent(0, static_cast<std::uint32_t>(num_entities) - 1);
    std::uniform_int_distribution<std::uint32_t> rel(0, static_cast<std::uint32_t>(num_relations) - 1);

    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> seen;
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> triples;
    triples.reserve(num_triples);
    auto emit = [&](std::uint32_t h, std::uint32_t r, std::uint32_t t) {
        if (!seen.emplace(h, r, t).second) return false;
        triples.emplace_back(h, r, t);
        return true;
    };
    // First pass guarantees every entity at least one appearance (as head).
    for (std::uint32_t h = 0; h < num_entities; ++h) {
        while (!emit(h, rel(rng), ent(rng))) {}
    }
    while (triples.size() < num_triples) {
        emit(ent(rng), rel(rng), ent(rng));
    }
    std::shuffle(triples.begin(), triples.end(), rng);

    auto label = [](char prefix, std::uint32_t i) { return prefix + std::to_string(i); };
    std::vector<RawTriple> raw;
    raw.reserve(num_triples);
    for (const auto& [h, r, t] : triples) {
        raw.push_back({label('e', h), label('r', r), label('e', t)});
    }

    const std::size_t n_eval = num_triples / 20;  // floor(5%)
    const std::size_t n_train = num_triples - 2 * n_eval;
    std::vector<RawTriple> raw_train(raw.begin(), raw.begin() + n_train);
    std::vector<RawTriple> raw_valid(raw.begin() + n_train, raw.begin() + n_train + n_eval);
    std::vector<RawTriple> raw_test(raw.begin() + n_train + n_eval, raw.end());
    return build_dataset(raw_train, raw_valid, raw_test);
}

}  // namespace mucos
