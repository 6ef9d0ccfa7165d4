#include "mucos/density.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mucos/kg.hpp"
#include "oracles.hpp"

using namespace mucos;

namespace {

TEST(DensityIndex, CountsBothRolesOnG0) {
    const auto ds = fixtures::g0();
    const auto d = DensityIndex::build(ds.graph);
    EXPECT_EQ(d.density(0), 4u);  // A
    EXPECT_EQ(d.density(1), 2u);  // B
    EXPECT_EQ(d.density(2), 3u);  // C
    EXPECT_EQ(d.density(3), 1u);  // D
}

TEST(DensityIndex, TailOnlyModeCountsTailsOnly) {
    const auto ds = fixtures::g0();
    const auto d = DensityIndex::build(ds.graph, DensityMode::kTailOnly);
    EXPECT_EQ(d.density(0), 2u);  // A: tail of (C,r2,A), (D,r1,A)
    EXPECT_EQ(d.density(1), 1u);
    EXPECT_EQ(d.density(2), 2u);
    EXPECT_EQ(d.density(3), 0u);
}

TEST(DensityIndex, SumsToExpectedTotal) {
    // Both-roles counting touches each triple twice.
    const auto ds = generate_synthetic(25, 3, 100, 5);
    const auto d = DensityIndex::build(ds.graph);
    std::size_t sum = 0;
    for (EntityId e = 0; e < ds.graph.num_entities(); ++e) sum += d.density(e);
    EXPECT_EQ(sum, 2 * ds.graph.triples.size());
}

TEST(DensityIndex, MatchesOracleOnRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ds = generate_synthetic(10 + seed, 1 + seed % 4, 40 + 7 * seed, seed);
        for (auto mode : {DensityMode::kBoth, DensityMode::kTailOnly}) {
            const auto d = DensityIndex::build(ds.graph, mode);
            const auto expected = oracle::density_counts(ds.graph, mode);
            for (EntityId e = 0; e < ds.graph.num_entities(); ++e) {
                ASSERT_EQ(d.density(e), expected[e]) << "seed " << seed << " entity " << e;
            }
        }
    }
}

TEST(TopN, OrdersByDensityThenId) {
    const auto ds = fixtures::g0();
    const auto d = DensityIndex::build(ds.graph);
    const std::vector<EntityId> all = {0, 1, 2, 3};
    EXPECT_EQ(top_n_entities(all, d, kNoLimit), (std::vector<EntityId>{0, 2, 1, 3}));
    EXPECT_EQ(top_n_entities(all, d, 2), (std::vector<EntityId>{0, 2}));
    EXPECT_EQ(top_n_entities(all, d, 0), (std::vector<EntityId>{}));
}

TEST(TopN, TieBreaksOnLowerId) {
    // Two entities with equal density: the lower id wins.
    const auto ds = build_dataset({{"A", "r1", "B"}, {"B", "r1", "A"}}, {}, {});
    const auto d = DensityIndex::build(ds.graph);
    EXPECT_EQ(d.density(0), d.density(1));
    EXPECT_EQ(top_n_entities(std::vector<EntityId>{1, 0}, d, 1), (std::vector<EntityId>{0}));
}

TEST(DensityDump, WritesLabelTabCountPerLine) {
    const auto ds = fixtures::g0();
    const auto d = DensityIndex::build(ds.graph);
    std::ostringstream out;
    write_density_tsv(out, ds.graph, d);
    EXPECT_EQ(out.str(), "A\t4\nB\t2\nC\t3\nD\t1\n");
}

}  // namespace
