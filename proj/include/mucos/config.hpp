#pragma once
// Flat key=value run configuration shared by the trainer, evaluator and CLI.
// Unknown keys and malformed values are rejected loudly; the echo serializer
// emits every field in a fixed order so two runs with equal configs produce
// byte-identical report headers.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mucos/context.hpp"
#include "mucos/density.hpp"
#include "mucos/encoder.hpp"
#include "mucos/errors.hpp"
#include "mucos/optim.hpp"

namespace mucos {

enum class Task { kRelation, kTail };
enum class Subtask { kGeneral, kDrugTarget };
enum class TailCandidates { kAllEntities, kSeenTails };

struct TrainConfig {
    Task task = Task::kRelation;
    Subtask subtask = Subtask::kGeneral;
    SamplingMode mode = SamplingMode::kSampled;
    std::size_t n = 15;
    std::size_t k = 10;
    std::size_t max_len = 128;
    double lr = 5e-5;
    std::size_t batch_size = 16;
    std::size_t epochs = 50;
    std::uint64_t seed = 42;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
    EncoderKind encoder = EncoderKind::kMeanPool;
    std::size_t embed_dim = 64;
    std::size_t ff_dim = 128;
    DensityMode density_mode = DensityMode::kBoth;
    bool undirected_context = false;
    bool use_head_context = true;
    bool use_relation_context = true;
    std::vector<std::string> drug_target_relations;
    double tie_tolerance = 1e-6;
    bool filtered = false;
    TailCandidates tail_candidates = TailCandidates::kAllEntities;

    AdamWConfig adamw() const { return {lr, beta1, beta2, eps, weight_decay}; }

    SamplerOptions sampler_options() const { return {mode, n, k}; }

    SequenceOptions sequence_options() const {
        return {max_len, use_head_context, use_relation_context};
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
    }
}

inline std::uint64_t parse_count(const std::string& key, const std::string& value) {
    try {
        std::size_t consumed = 0;
        const long long v = std::stoll(value, &consumed);
        if (consumed != value.size() || v < 0) throw std::invalid_argument(value);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a non-negative integer: '" + value +
                          "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

inline std::vector<std::string> parse_label_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

// Applies one key=value pair; shared by the file parser and CLI overrides.
inline void apply_config_entry(TrainConfig& cfg, const std::string& key,
                               const std::string& value) {
    if (key == "task") {
        if (value == "relation") cfg.task = Task::kRelation;
        else if (value == "tail") cfg.task = Task::kTail;
        else throw ConfigError("config key 'task': expected relation|tail, got '" + value + "'");
    } else if (key == "subtask") {
        if (value == "general") cfg.subtask = Subtask::kGeneral;
        else if (value == "drug_target" || value == "drug-target")
            cfg.subtask = Subtask::kDrugTarget;
        else
            throw ConfigError("config key 'subtask': expected general|drug-target, got '" +
                              value + "'");
    } else if (key == "mode") {
        if (value == "full") cfg.mode = SamplingMode::kFull;
        else if (value == "sampled") cfg.mode = SamplingMode::kSampled;
        else throw ConfigError("config key 'mode': expected full|sampled, got '" + value + "'");
    } else if (key == "n") {
        cfg.n = detail::parse_count(key, value);
    } else if (key == "k") {
        cfg.k = detail::parse_count(key, value);
    } else if (key == "max_len") {
        cfg.max_len = detail::parse_count(key, value);
    } else if (key == "lr") {
        cfg.lr = detail::parse_real(key, value);
    } else if (key == "batch_size") {
        cfg.batch_size = detail::parse_count(key, value);
    } else if (key == "epochs") {
        cfg.epochs = detail::parse_count(key, value);
    } else if (key == "seed") {
        cfg.seed = detail::parse_count(key, value);
    } else if (key == "beta1") {
        cfg.beta1 = detail::parse_real(key, value);
    } else if (key == "beta2") {
        cfg.beta2 = detail::parse_real(key, value);
    } else if (key == "eps") {
        cfg.eps = detail::parse_real(key, value);
    } else if (key == "weight_decay") {
        cfg.weight_decay = detail::parse_real(key, value);
    } else if (key == "encoder") {
        if (value == "mean_pool") cfg.encoder = EncoderKind::kMeanPool;
        else if (value == "attn") cfg.encoder = EncoderKind::kAttention;
        else
            throw ConfigError("config key 'encoder': expected mean_pool|attn, got '" + value +
                              "'");
    } else if (key == "embed_dim") {
        cfg.embed_dim = detail::parse_count(key, value);
    } else if (key == "ff_dim") {
        cfg.ff_dim = detail::parse_count(key, value);
    } else if (key == "density_mode") {
        if (value == "both") cfg.density_mode = DensityMode::kBoth;
        else if (value == "tail_only") cfg.density_mode = DensityMode::kTailOnly;
        else
            throw ConfigError("config key 'density_mode': expected both|tail_only, got '" +
                              value + "'");
    } else if (key == "undirected_context") {
        cfg.undirected_context = detail::parse_bool(key, value);
    } else if (key == "use_head_context") {
        cfg.use_head_context = detail::parse_bool(key, value);
    } else if (key == "use_relation_context") {
        cfg.use_relation_context = detail::parse_bool(key, value);
    } else if (key == "drug_target_relations") {
        cfg.drug_target_relations = detail::parse_label_list(value);
    } else if (key == "tie_tolerance") {
        cfg.tie_tolerance = detail::parse_real(key, value);
    } else if (key == "filtered") {
        cfg.filtered = detail::parse_bool(key, value);
    } else if (key == "tail_candidates") {
        if (value == "all") cfg.tail_candidates = TailCandidates::kAllEntities;
        else if (value == "seen") cfg.tail_candidates = TailCandidates::kSeenTails;
        else
            throw ConfigError("config key 'tail_candidates': expected all|seen, got '" + value +
                              "'");
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

inline void validate_config(const TrainConfig& cfg) {
    if (cfg.lr <= 0.0) throw ConfigError("config: lr must be > 0");
    if (cfg.batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
    if (cfg.epochs < 1) throw ConfigError("config: epochs must be >= 1");
    if (cfg.max_len < kSequenceSkeletonTokens) {
        throw ConfigError("config: max_len must be >= " +
                          std::to_string(kSequenceSkeletonTokens));
    }
    if (cfg.embed_dim < 1) throw ConfigError("config: embed_dim must be >= 1");
    if (cfg.ff_dim < 1) throw ConfigError("config: ff_dim must be >= 1");
    if (cfg.tie_tolerance < 0.0) throw ConfigError("config: tie_tolerance must be >= 0");
}

inline TrainConfig parse_config_text(const std::string& text) {
    TrainConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        }
        apply_config_entry(cfg, key, value);
    }
    validate_config(cfg);
    return cfg;
}

inline TrainConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

namespace detail {

inline std::string format_real(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace detail

// Round-trippable echo of every field, fixed order.
inline std::string serialize_config(const TrainConfig& cfg) {
    std::ostringstream os;
    os << "task=" << (cfg.task == Task::kRelation ? "relation" : "tail") << '\n';
    os << "subtask=" << (cfg.subtask == Subtask::kGeneral ? "general" : "drug_target") << '\n';
    os << "mode=" << (cfg.mode == SamplingMode::kFull ? "full" : "sampled") << '\n';
    os << "n=" << cfg.n << '\n';
    os << "k=" << cfg.k << '\n';
    os << "max_len=" << cfg.max_len << '\n';
    os << "lr=" << detail::format_real(cfg.lr) << '\n';
    os << "batch_size=" << cfg.batch_size << '\n';
    os << "epochs=" << cfg.epochs << '\n';
    os << "seed=" << cfg.seed << '\n';
    os << "beta1=" << detail::format_real(cfg.beta1) << '\n';
    os << "beta2=" << detail::format_real(cfg.beta2) << '\n';
    os << "eps=" << detail::format_real(cfg.eps) << '\n';
    os << "weight_decay=" << detail::format_real(cfg.weight_decay) << '\n';
    os << "encoder=" << (cfg.encoder == EncoderKind::kMeanPool ? "mean_pool" : "attn") << '\n';
    os << "embed_dim=" << cfg.embed_dim << '\n';
    os << "ff_dim=" << cfg.ff_dim << '\n';
    os << "density_mode=" << (cfg.density_mode == DensityMode::kBoth ? "both" : "tail_only")
       << '\n';
    os << "undirected_context=" << (cfg.undirected_context ? "true" : "false") << '\n';
    os << "use_head_context=" << (cfg.use_head_context ? "true" : "false") << '\n';
    os << "use_relation_context=" << (cfg.use_relation_context ? "true" : "false") << '\n';
    os << "drug_target_relations=";
    for (std::size_t i = 0; i < cfg.drug_target_relations.size(); ++i) {
        if (i) os << ',';
        os << cfg.drug_target_relations[i];
    }
    os << '\n';
    os << "tie_tolerance=" << detail::format_real(cfg.tie_tolerance) << '\n';
    os << "filtered=" << (cfg.filtered ? "true" : "false") << '\n';
    os << "tail_candidates="
       << (cfg.tail_candidates == TailCandidates::kAllEntities ? "all" : "seen") << '\n';
    return os.str();
}

}  // namespace mucos
