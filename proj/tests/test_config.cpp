#include "mucos/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "mucos/report.hpp"

using namespace mucos;

namespace {

TEST(Config, DefaultsMatchTheStandardRecipe) {
    const TrainConfig cfg;
    EXPECT_EQ(cfg.task, Task::kRelation);
    EXPECT_EQ(cfg.mode, SamplingMode::kSampled);
    EXPECT_EQ(cfg.n, 15u);
    EXPECT_EQ(cfg.k, 10u);
    EXPECT_EQ(cfg.max_len, 128u);
    EXPECT_DOUBLE_EQ(cfg.lr, 5e-5);
    EXPECT_EQ(cfg.batch_size, 16u);
    EXPECT_EQ(cfg.epochs, 50u);
    EXPECT_DOUBLE_EQ(cfg.beta1, 0.9);
    EXPECT_DOUBLE_EQ(cfg.beta2, 0.999);
    EXPECT_DOUBLE_EQ(cfg.eps, 1e-8);
    EXPECT_DOUBLE_EQ(cfg.weight_decay, 0.01);
    EXPECT_EQ(cfg.encoder, EncoderKind::kMeanPool);
    EXPECT_EQ(cfg.embed_dim, 64u);
    EXPECT_EQ(cfg.ff_dim, 128u);
    EXPECT_DOUBLE_EQ(cfg.tie_tolerance, 1e-6);
    EXPECT_FALSE(cfg.filtered);
    EXPECT_EQ(cfg.tail_candidates, TailCandidates::kAllEntities);
}

TEST(Config, ParsesEveryKey) {
    const auto cfg = parse_config_text(R"(
# full sweep
task = tail
subtask = drug-target
mode = full
n = 3
k = 4
max_len = 32
lr = 0.001
batch_size = 8
epochs = 2
seed = 99
beta1 = 0.8
beta2 = 0.95
eps = 1e-6
weight_decay = 0.1
encoder = attn
embed_dim = 16
ff_dim = 24
density_mode = tail_only
undirected_context = true
use_head_context = false
use_relation_context = false
drug_target_relations = binds, targets ,inhibits
tie_tolerance = 1e-9
filtered = true
tail_candidates = seen
)");
    EXPECT_EQ(cfg.task, Task::kTail);
    EXPECT_EQ(cfg.subtask, Subtask::kDrugTarget);
    EXPECT_EQ(cfg.mode, SamplingMode::kFull);
    EXPECT_EQ(cfg.n, 3u);
    EXPECT_EQ(cfg.k, 4u);
    EXPECT_EQ(cfg.max_len, 32u);
    EXPECT_DOUBLE_EQ(cfg.lr, 0.001);
    EXPECT_EQ(cfg.batch_size, 8u);
    EXPECT_EQ(cfg.epochs, 2u);
    EXPECT_EQ(cfg.seed, 99u);
    EXPECT_DOUBLE_EQ(cfg.beta1, 0.8);
    EXPECT_DOUBLE_EQ(cfg.beta2, 0.95);
    EXPECT_DOUBLE_EQ(cfg.eps, 1e-6);
    EXPECT_DOUBLE_EQ(cfg.weight_decay, 0.1);
    EXPECT_EQ(cfg.encoder, EncoderKind::kAttention);
    EXPECT_EQ(cfg.embed_dim, 16u);
    EXPECT_EQ(cfg.ff_dim, 24u);
    EXPECT_EQ(cfg.density_mode, DensityMode::kTailOnly);
    EXPECT_TRUE(cfg.undirected_context);
    EXPECT_FALSE(cfg.use_head_context);
    EXPECT_FALSE(cfg.use_relation_context);
    EXPECT_EQ(cfg.drug_target_relations,
              (std::vector<std::string>{"binds", "targets", "inhibits"}));
    EXPECT_DOUBLE_EQ(cfg.tie_tolerance, 1e-9);
    EXPECT_TRUE(cfg.filtered);
    EXPECT_EQ(cfg.tail_candidates, TailCandidates::kSeenTails);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(parse_config_text("learning_rate=0.1\n"), ConfigError);
    EXPECT_THROW(parse_config_text("n=abc\n"), ConfigError);
    EXPECT_THROW(parse_config_text("n=-3\n"), ConfigError);
    EXPECT_THROW(parse_config_text("lr=fast\n"), ConfigError);
    EXPECT_THROW(parse_config_text("task=both\n"), ConfigError);
    EXPECT_THROW(parse_config_text("mode=quick\n"), ConfigError);
    EXPECT_THROW(parse_config_text("undirected_context=maybe\n"), ConfigError);
    EXPECT_THROW(parse_config_text("just a line\n"), ConfigError);
}

TEST(Config, ValidatesRanges) {
    EXPECT_THROW(parse_config_text("lr=0\n"), ConfigError);
    EXPECT_THROW(parse_config_text("lr=-0.1\n"), ConfigError);
    EXPECT_THROW(parse_config_text("batch_size=0\n"), ConfigError);
    EXPECT_THROW(parse_config_text("epochs=0\n"), ConfigError);
    EXPECT_THROW(parse_config_text("max_len=6\n"), ConfigError);
    EXPECT_THROW(parse_config_text("tie_tolerance=-1\n"), ConfigError);
    EXPECT_NO_THROW(parse_config_text("max_len=7\n"));
}

TEST(Config, SerializationRoundTripsByteIdentically) {
    TrainConfig cfg;
    cfg.task = Task::kTail;
    cfg.n = 2;
    cfg.lr = 0.01;
    cfg.drug_target_relations = {"binds", "targets"};
    cfg.tail_candidates = TailCandidates::kSeenTails;
    const auto text = serialize_config(cfg);
    const auto reparsed = parse_config_text(text);
    EXPECT_EQ(serialize_config(reparsed), text);
    EXPECT_EQ(serialize_config(parse_config_text(serialize_config(TrainConfig{}))),
              serialize_config(TrainConfig{}));
}

TEST(Config, LoadsFromFileAndRejectsMissingFile) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / ("mucos_cfg_" + std::to_string(::getpid()) + ".txt");
    {
        std::ofstream out(path);
        out << "epochs=3\nseed=5\n";
    }
    const auto cfg = load_config_file(path.string());
    EXPECT_EQ(cfg.epochs, 3u);
    EXPECT_EQ(cfg.seed, 5u);
    std::filesystem::remove(path);
    EXPECT_THROW(load_config_file(path.string()), ConfigError);
}

TEST(Fingerprint, DeterministicAndContentSensitive) {
    const auto a = dataset_fingerprint(fixtures::g0());
    const auto b = dataset_fingerprint(fixtures::g0());
    const auto c = dataset_fingerprint(fixtures::g0_with_eval());
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_EQ(a.size(), 16u);  // 64-bit hex
}

TEST(Manifest, CarriesConfigSeedAndFingerprint) {
    const auto ds = fixtures::g0_with_eval();
    TrainConfig cfg;
    cfg.seed = 123;
    const auto m = RunManifest::make(ds, cfg);
    EXPECT_EQ(m.seed, 123u);
    EXPECT_EQ(m.dataset_triples, 7u);
    EXPECT_EQ(m.dataset_fingerprint, dataset_fingerprint(ds));
    EXPECT_EQ(m.config_echo, serialize_config(cfg));
    EXPECT_EQ(m.tool, "mucos 0.1.0");

    const auto j = m.to_json();
    EXPECT_EQ(j["seed"], 123);
    EXPECT_TRUE(j.contains("created_utc"));
}

TEST(Manifest, EqualInputsSerializeIdenticallyModuloTimestamp) {
    const auto ds = fixtures::g0();
    TrainConfig cfg;
    auto a = RunManifest::make(ds, cfg).to_json();
    auto b = RunManifest::make(ds, cfg).to_json();
    a.erase("created_utc");
    b.erase("created_utc");
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Reports, StatsSerializeMeasuredAggregates) {
    const auto s = graph_stats(fixtures::g0());
    const auto j = stats_to_json(s);
    EXPECT_EQ(j["entities"], 4);
    EXPECT_EQ(j["triples_total"], 5);
    EXPECT_DOUBLE_EQ(j["avg_density"].get<double>(), 1.25);
    EXPECT_FALSE(j.contains("avg_density_reference"));  // not the KEGG50k shape

    const auto text = stats_to_text(s);
    EXPECT_NE(text.find("avg_density"), std::string::npos);
    EXPECT_NE(text.find("1.250000"), std::string::npos);
}

}  // namespace
