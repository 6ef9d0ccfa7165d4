#pragma once
// Per-entity occurrence counts over the train triples, the priority signal
// for all context sampling.
//
// Default counting covers both roles (one head + one tail occurrence per
// triple; a self-loop contributes 2 to its entity), which is the reading
// consistent with applying the density to head entities in relation-pair
// sums. `kTailOnly` restricts to tail occurrences.

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "mucos/kg.hpp"

namespace mucos {

enum class DensityMode { kBoth, kTailOnly };

class DensityIndex {
public:
    static DensityIndex build(const KnowledgeGraph& g, DensityMode mode = DensityMode::kBoth) {
        DensityIndex d;
        d.counts_.assign(g.num_entities(), 0);
        for (const auto& t : g.triples) {
            if (mode == DensityMode::kBoth) d.counts_[t.head] += 1;
            d.counts_[t.tail] += 1;
        }
        return d;
    }

    std::uint64_t density(EntityId e) const { return counts_.at(e); }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

private:
    std::vector<std::uint64_t> counts_;
};

// Top-n candidates by descending density, ties broken by ascending id.
// Returns min(n, |candidates|) entities; the result at n is always a prefix
// of the result at n+1.
inline std::vector<EntityId> top_n_entities(std::span<const EntityId> candidates,
                                            const DensityIndex& d, std::size_t n) {
    std::vector<EntityId> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end(), [&d](EntityId a, EntityId b) {
        if (d.density(a) != d.density(b)) return d.density(a) > d.density(b);
        return a < b;
    });
    if (sorted.size() > n) sorted.resize(n);
    return sorted;
}

// Inspection dump: `entity_label<TAB>density` per line, id order.
inline void write_density_tsv(std::ostream& out, const KnowledgeGraph& g, const DensityIndex& d) {
    for (EntityId e = 0; e < g.num_entities(); ++e) {
        out << g.entities.label(e) << '\t' << d.density(e) << '\n';
    }
}

}  // namespace mucos
