#pragma once
// Run manifests and report serialization. Every artifact embeds the manifest
// (config echo, seed, dataset fingerprint, tool version, timestamp) so a run
// can be reproduced from any of its outputs. With timestamps excluded, equal
// inputs serialize byte-identically.

#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mucos/bench.hpp"
#include "mucos/config.hpp"
#include "mucos/errors.hpp"
#include "mucos/evaluator.hpp"
#include "mucos/kg.hpp"
#include "mucos/trainer.hpp"

namespace mucos {

inline constexpr const char* kToolName = "mucos";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// FNV-1a over the canonical label lines of all splits, train → valid →
// test, in stored order.
inline std::string dataset_fingerprint(const Dataset& ds) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
    };
    auto mix_split = [&](const std::vector<Triple>& triples) {
        for (const auto& t : triples) {
            mix(ds.graph.entities.label(t.head));
            mix("\t");
            mix(ds.graph.relations.label(t.relation));
            mix("\t");
            mix(ds.graph.entities.label(t.tail));
            mix("\n");
        }
    };
    mix_split(ds.splits.train);
    mix_split(ds.splits.valid);
    mix_split(ds.splits.test);
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

struct RunManifest {
    std::string tool = std::string(kToolName) + " " + kToolVersion;
    std::string created_utc;  // excluded from reproducibility comparisons
    std::uint64_t seed = 0;
    std::string dataset_fingerprint;
    std::size_t dataset_triples = 0;
    std::string config_echo;

    static RunManifest make(const Dataset& ds, const TrainConfig& cfg) {
        RunManifest m;
        m.created_utc = now_utc();
        m.seed = cfg.seed;
        m.dataset_fingerprint = mucos::dataset_fingerprint(ds);
        m.dataset_triples =
            ds.splits.train.size() + ds.splits.valid.size() + ds.splits.test.size();
        m.config_echo = serialize_config(cfg);
        return m;
    }

    static std::string now_utc() {
        const std::time_t t = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    Json to_json() const {
        Json j;
        j["tool"] = tool;
        j["created_utc"] = created_utc;
        j["seed"] = seed;
        j["dataset_fingerprint"] = dataset_fingerprint;
        j["dataset_triples"] = dataset_triples;
        j["config"] = config_echo;
        return j;
    }
};

namespace detail {

inline std::string real6(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

}  // namespace detail

inline Json stats_to_json(const StatsReport& s) {
    Json j;
    j["entities"] = s.num_entities;
    j["relations"] = s.num_relations;
    j["triples_total"] = s.total_triples;
    j["triples_train"] = s.train_triples;
    j["triples_valid"] = s.valid_triples;
    j["triples_test"] = s.test_triples;
    j["avg_density"] = s.avg_density();
    j["avg_appearance"] = s.avg_appearance();
    j["unseen_valid_entities"] = s.unseen_valid_entities;
    j["unseen_test_entities"] = s.unseen_test_entities;
    j["unseen_valid_triples"] = s.unseen_valid_triples;
    j["unseen_test_triples"] = s.unseen_test_triples;
    if (is_kegg50k_shape(s)) {
        j["avg_density_reference"] = kKegg50kAvgDensityReference;
        j["avg_density_matches_reference"] =
            std::abs(s.avg_density() - kKegg50kAvgDensityReference) < 5e-4;
    }
    return j;
}

inline std::string stats_to_text(const StatsReport& s) {
    std::ostringstream os;
    os << "entities            " << s.num_entities << '\n';
    os << "relations           " << s.num_relations << '\n';
    os << "triples total       " << s.total_triples << '\n';
    os << "triples train       " << s.train_triples << '\n';
    os << "triples valid       " << s.valid_triples << '\n';
    os << "triples test        " << s.test_triples << '\n';
    os << "avg_density         " << detail::real6(s.avg_density()) << '\n';
    os << "avg_appearance      " << detail::real6(s.avg_appearance()) << '\n';
    os << "unseen valid ents   " << s.unseen_valid_entities << '\n';
    os << "unseen test ents    " << s.unseen_test_entities << '\n';
    if (is_kegg50k_shape(s)) {
        os << "avg_density ref     " << kKegg50kAvgDensityReference
           << (std::abs(s.avg_density() - kKegg50kAvgDensityReference) < 5e-4
                   ? " (matches measured)"
                   : " (differs from measured " + detail::real6(s.avg_density()) + ")")
           << '\n';
    }
    return os.str();
}

inline Json complexity_to_json(const ComplexityReport& r) {
    Json j;
    j["avg_density"] = r.avg_density;
    j["avg_appearance"] = r.avg_appearance;
    j["n"] = r.n;
    j["k"] = r.k;
    j["cost_full"] = r.cost_full;
    j["cost_sampled"] = r.cost_sampled;
    j["speedup"] = r.speedup;
    if (r.queries > 0) {
        j["queries"] = r.queries;
        j["repetitions"] = r.repetitions;
        j["empirical_full_ns"] = r.empirical_full_ns;
        j["empirical_sampled_ns"] = r.empirical_sampled_ns;
        j["empirical_speedup"] = r.empirical_speedup;
    }
    return j;
}

inline std::string complexity_to_text(const ComplexityReport& r) {
    std::ostringstream os;
    os << "avg_density         " << detail::real6(r.avg_density) << '\n';
    os << "avg_appearance      " << detail::real6(r.avg_appearance) << '\n';
    os << "n                   " << r.n << '\n';
    os << "k                   " << r.k << '\n';
    os << "cost_full           " << detail::real6(r.cost_full) << '\n';
    os << "cost_sampled        " << detail::real6(r.cost_sampled) << '\n';
    os << "speedup             " << detail::real6(r.speedup) << '\n';
    if (r.queries > 0) {
        os << "queries             " << r.queries << '\n';
        os << "repetitions         " << r.repetitions << '\n';
        os << "empirical_full_ns   " << detail::real6(r.empirical_full_ns) << '\n';
        os << "empirical_sampled_ns " << detail::real6(r.empirical_sampled_ns) << '\n';
        os << "empirical_speedup   " << detail::real6(r.empirical_speedup) << '\n';
    }
    return os.str();
}

inline const char* task_name(Task t) { return t == Task::kRelation ? "relation" : "tail"; }
inline const char* subtask_name(Subtask s) {
    return s == Subtask::kGeneral ? "general" : "drug_target";
}
inline const char* mode_name(SamplingMode m) {
    return m == SamplingMode::kFull ? "full" : "sampled";
}

inline Json ranking_to_json(const RankingReport& r) {
    Json j;
    j["task"] = task_name(r.task);
    j["subtask"] = subtask_name(r.subtask);
    j["mode"] = mode_name(r.mode);
    j["n"] = r.n;
    j["k"] = r.k;
    j["N"] = r.query_count;
    j["MRR"] = r.mrr;
    j["Hits@1"] = r.hits1;
    j["Hits@3"] = r.hits3;
    j["Hits@5"] = r.hits5;
    j["Hits@10"] = r.hits10;
    j["unseen_entity_queries"] = r.unseen_entity_queries;
    return j;
}

inline std::string ranking_to_text(const RankingReport& r) {
    std::ostringstream os;
    os << "task      " << task_name(r.task) << '\n';
    os << "subtask   " << subtask_name(r.subtask) << '\n';
    os << "mode      " << mode_name(r.mode) << '\n';
    os << "n         " << r.n << '\n';
    os << "k         " << r.k << '\n';
    os << "N         " << r.query_count << '\n';
    os << "MRR       " << detail::real6(r.mrr) << '\n';
    os << "Hits@1    " << detail::real6(r.hits1) << '\n';
    os << "Hits@3    " << detail::real6(r.hits3) << '\n';
    os << "Hits@5    " << detail::real6(r.hits5) << '\n';
    os << "Hits@10   " << detail::real6(r.hits10) << '\n';
    os << "unseen    " << r.unseen_entity_queries << '\n';
    return os.str();
}

inline Json train_report_to_json(const TrainReport& r) {
    Json j;
    j["epochs"] = r.epoch_loss.size();
    j["epoch_loss"] = r.epoch_loss;
    j["epoch_seconds"] = r.epoch_seconds;
    j["epoch_valid_mrr"] = r.epoch_valid_mrr;
    j["context_seconds"] = r.context_seconds;
    j["clamp_count"] = r.clamp_count;
    j["train_examples"] = r.train_examples;
    j["optimizer_steps"] = r.optimizer_steps;
    j["best_epoch"] = r.best_epoch;
    j["best_valid_mrr"] = r.best_valid_mrr;
    j["last_checkpoint"] = r.last_checkpoint;
    j["best_checkpoint"] = r.best_checkpoint;
    return j;
}

inline void write_json_file(const std::string& path, Json j, const RunManifest* manifest) {
    if (manifest) j["manifest"] = manifest->to_json();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace mucos
