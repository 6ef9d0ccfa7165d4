// mucos command-line tool: dataset ingestion and statistics, context
// sampling inspection, classifier training and ranking evaluation, and the
// full-vs-sampled context cost benchmark. Every run writes its artifacts
// into a fresh timestamped directory with an embedded manifest.
//
// Exit codes: 0 ok, 2 data parse error, 3 config error, 4 checkpoint error,
// 5 training error, 6 evaluation error, 10 any other failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mucos/mucos.hpp"

namespace fs = std::filesystem;

namespace {

using namespace mucos;

struct ConfigFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string mode, task, subtask;
    std::size_t n = 0, k = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        seed_opt = cmd->add_option("--seed", seed, "RNG seed");
        mode_opt = cmd->add_option("--mode", mode, "full|sampled")
                       ->check(CLI::IsMember({"full", "sampled"}));
        n_opt = cmd->add_option("--n", n, "head/tail context entity budget");
        k_opt = cmd->add_option("--k", k, "relation context pair budget");
        task_opt = cmd->add_option("--task", task, "relation|tail")
                       ->check(CLI::IsMember({"relation", "tail"}));
        subtask_opt = cmd->add_option("--subtask", subtask, "general|drug-target")
                          ->check(CLI::IsMember({"general", "drug-target"}));
    }

    // File values first, explicit flags override.
    TrainConfig resolve() const {
        TrainConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (seed_opt && seed_opt->count()) cfg.seed = seed;
        if (mode_opt && mode_opt->count()) apply_config_entry(cfg, "mode", mode);
        if (n_opt && n_opt->count()) cfg.n = n;
        if (k_opt && k_opt->count()) cfg.k = k;
        if (task_opt && task_opt->count()) apply_config_entry(cfg, "task", task);
        if (subtask_opt && subtask_opt->count()) apply_config_entry(cfg, "subtask", subtask);
        validate_config(cfg);
        return cfg;
    }

private:
    CLI::Option* seed_opt = nullptr;
    CLI::Option* mode_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* k_opt = nullptr;
    CLI::Option* task_opt = nullptr;
    CLI::Option* subtask_opt = nullptr;
};

std::string out_base(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("MUCOS_OUT"); env && *env) return env;
    return "runs";
}

fs::path make_run_dir(const std::string& base, std::uint64_t seed) {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
    fs::path dir = fs::path(base) / (std::string(stamp) + "-s" + std::to_string(seed));
    for (int suffix = 2; fs::exists(dir); ++suffix) {
        dir = fs::path(base) / (std::string(stamp) + "-s" + std::to_string(seed) + "-" +
                                std::to_string(suffix));
    }
    fs::create_directories(dir);
    return dir;
}

Dataset load_data_dir(const std::string& dir, char delim) {
    const fs::path p(dir);
    const auto train = p / "train.tsv";
    const auto valid = p / "valid.tsv";
    const auto test = p / "test.tsv";
    return load_dataset(train.string(), fs::exists(valid) ? valid.string() : "",
                        fs::exists(test) ? test.string() : "", delim);
}

void write_dataset_dir(const Dataset& ds, const fs::path& dir) {
    fs::create_directories(dir);
    auto write_split = [&](const char* name, const std::vector<Triple>& triples) {
        std::ofstream out(dir / name);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        export_split_tsv(out, ds.graph, triples);
    };
    write_split("train.tsv", ds.splits.train);
    write_split("valid.tsv", ds.splits.valid);
    write_split("test.tsv", ds.splits.test);
}

void apply_drug_target_labels(Dataset& ds, const TrainConfig& cfg) {
    if (!cfg.drug_target_relations.empty()) {
        mark_drug_target_relations(ds, cfg.drug_target_relations);
    }
}

int run(int argc, char** argv) {
    CLI::App app{"mucos: density-sampled context construction for knowledge-graph completion"};
    app.require_subcommand(1);
    app.fallthrough();  // let --out appear after the subcommand too

    std::string out_flag;
    app.add_option("--out", out_flag,
                   "output base directory (default $MUCOS_OUT or ./runs)");

    // --- ingest ---------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "parse triple files into a dataset directory");
    std::string in_train, in_valid, in_test, in_delim = "tab";
    ingest->add_option("--train", in_train, "train triples (head<DELIM>relation<DELIM>tail)")
        ->required();
    ingest->add_option("--valid", in_valid, "validation triples");
    ingest->add_option("--test", in_test, "test triples");
    ingest->add_option("--delim", in_delim, "tab|comma")
        ->check(CLI::IsMember({"tab", "comma"}));

    // --- synth ----------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a random dataset with given shape");
    std::size_t sy_entities = 0, sy_relations = 0, sy_triples = 0;
    std::uint64_t sy_seed = 42;
    synth->add_option("--entities", sy_entities, "entity count")->required();
    synth->add_option("--relations", sy_relations, "relation count")->required();
    synth->add_option("--triples", sy_triples, "total triple count")->required();
    synth->add_option("--seed", sy_seed, "RNG seed");

    // --- stats ----------------------------------------------------------
    auto* stats = app.add_subcommand("stats", "dataset statistics and density aggregates");
    std::string st_data;
    stats->add_option("--data", st_data, "dataset directory (train/valid/test .tsv)")
        ->required();

    // --- sample ---------------------------------------------------------
    auto* sample = app.add_subcommand(
        "sample", "print the contexts for one query; use ? for the unknown slot");
    std::string sa_data;
    std::vector<std::string> sa_query;
    ConfigFlags sa_flags;
    sample->add_option("--data", sa_data, "dataset directory")->required();
    sample->add_option("query", sa_query, "HEAD RELATION TAIL with ? in one slot")
        ->expected(3);
    sa_flags.attach(sample);

    // --- train ----------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "train the classifier on the train split");
    std::string tr_data;
    ConfigFlags tr_flags;
    train_cmd->add_option("--data", tr_data, "dataset directory")->required();
    tr_flags.attach(train_cmd);

    // --- eval -----------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "rank the test split with a trained checkpoint");
    std::string ev_data, ev_checkpoint, ev_split = "test";
    ConfigFlags ev_flags;
    eval_cmd->add_option("--data", ev_data, "dataset directory")->required();
    eval_cmd->add_option("--checkpoint", ev_checkpoint, "model checkpoint")->required();
    eval_cmd->add_option("--split", ev_split, "test|valid|train")
        ->check(CLI::IsMember({"test", "valid", "train"}));
    ev_flags.attach(eval_cmd);

    // --- bench ----------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "context-construction cost model and timings");
    std::string be_data;
    double be_density = 0.0, be_appearance = 0.0;
    std::size_t be_n = 15, be_k = 10, be_queries = 1000, be_reps = 5;
    bool be_analytical_only = false;
    bench->add_option("--data", be_data, "dataset directory (enables empirical timing)");
    bench->add_option("--density", be_density, "avg_density for the analytical model");
    bench->add_option("--appearance", be_appearance, "avg_appearance for the analytical model");
    bench->add_option("--n", be_n, "head/tail context entity budget");
    bench->add_option("--k", be_k, "relation context pair budget");
    bench->add_option("--queries", be_queries, "empirical query count");
    bench->add_option("--reps", be_reps, "empirical repetitions");
    bench->add_flag("--analytical-only", be_analytical_only, "skip wall-clock timings");

    CLI11_PARSE(app, argc, argv);

    if (*ingest) {
        const char delim = in_delim == "comma" ? ',' : '\t';
        Dataset ds = load_dataset(in_train, in_valid, in_test, delim);
        const auto run_dir = make_run_dir(out_base(out_flag), 0);
        write_dataset_dir(ds, run_dir / "dataset");
        const auto s = graph_stats(ds);
        RunManifest manifest = RunManifest::make(ds, TrainConfig{});
        write_json_file((run_dir / "stats.json").string(), stats_to_json(s), &manifest);
        std::cout << "dataset: " << (run_dir / "dataset").string() << '\n'
                  << stats_to_text(s);
        return 0;
    }

    if (*synth) {
        Dataset ds = generate_synthetic(sy_entities, sy_relations, sy_triples, sy_seed);
        const auto run_dir = make_run_dir(out_base(out_flag), sy_seed);
        write_dataset_dir(ds, run_dir / "dataset");
        const auto s = graph_stats(ds);
        TrainConfig cfg;
        cfg.seed = sy_seed;
        RunManifest manifest = RunManifest::make(ds, cfg);
        write_json_file((run_dir / "stats.json").string(), stats_to_json(s), &manifest);
        std::cout << "dataset: " << (run_dir / "dataset").string() << '\n'
                  << stats_to_text(s);
        return 0;
    }

    if (*stats) {
        Dataset ds = load_data_dir(st_data, '\t');
        const auto s = graph_stats(ds);
        const auto run_dir = make_run_dir(out_base(out_flag), 0);
        RunManifest manifest = RunManifest::make(ds, TrainConfig{});
        write_json_file((run_dir / "stats.json").string(), stats_to_json(s), &manifest);
        std::cout << stats_to_text(s);
        return 0;
    }

    if (*sample) {
        TrainConfig cfg = sa_flags.resolve();
        Dataset ds = load_data_dir(sa_data, '\t');
        const auto& g = ds.graph;
        const bool rel_unknown = sa_query[1] == "?";
        const bool tail_unknown = sa_query[2] == "?";
        if (sa_query[0] == "?" || rel_unknown == tail_unknown) {
            throw ConfigError("sample: exactly one of RELATION or TAIL must be '?'");
        }
        auto entity = [&](const std::string& label) {
            auto id = g.entities.find(label);
            if (!id) throw ConfigError("sample: unknown entity '" + label + "'");
            return *id;
        };
        const EntityId h = entity(sa_query[0]);
        const DensityIndex d = DensityIndex::build(g, cfg.density_mode);
        const ContextSampler sampler(g, d, cfg.undirected_context);
        if (rel_unknown) {
            const EntityId t = entity(sa_query[2]);
            const auto bundle = sampler.relation_query_bundle(h, t, cfg.sampler_options());
            std::cout << "Hc: " << format_tokens(bundle.head_context, g) << " | Tc: "
                      << format_tokens(bundle.tail_context, g) << '\n';
        } else {
            auto rid = g.relations.find(sa_query[1]);
            if (!rid) throw ConfigError("sample: unknown relation '" + sa_query[1] + "'");
            const auto bundle = sampler.tail_query_bundle(h, *rid, cfg.sampler_options());
            std::cout << "Hc: " << format_tokens(bundle.head_context, g) << " | Rc: "
                      << format_entities(bundle.relation_context, g) << '\n';
        }
        return 0;
    }

    if (*train_cmd) {
        TrainConfig cfg = tr_flags.resolve();
        Dataset ds = load_data_dir(tr_data, '\t');
        apply_drug_target_labels(ds, cfg);
        const auto run_dir = make_run_dir(out_base(out_flag), cfg.seed);
        RunManifest manifest = RunManifest::make(ds, cfg);
        const std::string manifest_str = manifest.to_json().dump();

        TrainResult result = train(ds, cfg, run_dir.string(), manifest_str, &std::cout);
        write_json_file((run_dir / "train_report.json").string(),
                        train_report_to_json(result.report), &manifest);
        std::ofstream cfg_echo(run_dir / "config.txt");
        cfg_echo << serialize_config(cfg);
        std::cout << "checkpoint: " << result.report.last_checkpoint << '\n';
        if (!result.report.best_checkpoint.empty()) {
            std::cout << "best checkpoint: " << result.report.best_checkpoint << " (epoch "
                      << result.report.best_epoch << ")\n";
        }
        return 0;
    }

    if (*eval_cmd) {
        TrainConfig cfg = ev_flags.resolve();
        Dataset ds = load_data_dir(ev_data, '\t');
        apply_drug_target_labels(ds, cfg);
        LoadedCheckpoint loaded = load_checkpoint(ev_checkpoint);

        const ExampleBuilder builder(ds.graph, cfg);
        const auto expect = builder.encoder_config();
        const auto& have = loaded.model.config;
        if (have.vocab_size != expect.vocab_size || have.num_classes != expect.num_classes) {
            throw CheckpointError("checkpoint does not match this dataset/task (vocab " +
                                  std::to_string(have.vocab_size) + " vs " +
                                  std::to_string(expect.vocab_size) + ", classes " +
                                  std::to_string(have.num_classes) + " vs " +
                                  std::to_string(expect.num_classes) + ")");
        }

        const auto& split = ev_split == "train"  ? ds.splits.train
                            : ev_split == "valid" ? ds.splits.valid
                                                  : ds.splits.test;
        if (split.empty()) throw EvalError("selected split '" + ev_split + "' is empty");
        const auto report = evaluate_split(loaded.model, builder, ds, split, cfg);

        const auto run_dir = make_run_dir(out_base(out_flag), cfg.seed);
        RunManifest manifest = RunManifest::make(ds, cfg);
        write_json_file((run_dir / "eval.json").string(), ranking_to_json(report), &manifest);
        std::cout << ranking_to_text(report);
        return 0;
    }

    if (*bench) {
        ComplexityReport report;
        std::optional<Dataset> ds;
        if (!be_data.empty()) {
            ds = load_data_dir(be_data, '\t');
            if (!be_analytical_only) {
                const DensityIndex d = DensityIndex::build(ds->graph);
                const auto queries = bench_queries(ds->graph, be_queries, 7);
                report = empirical_bench(*ds, d, queries, be_n, be_k, be_reps);
            } else {
                report = analytical_speedup(graph_stats(*ds), be_n, be_k);
            }
        } else if (be_density > 0.0 && be_appearance > 0.0) {
            report = analytical_speedup(be_density, be_appearance, be_n, be_k);
        } else {
            throw ConfigError("bench: provide --data or both --density and --appearance");
        }
        const auto run_dir = make_run_dir(out_base(out_flag), 0);
        write_json_file((run_dir / "bench.json").string(), complexity_to_json(report), nullptr);
        std::cout << complexity_to_text(report);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mucos::ParseError& e) {
        std::cerr << "error (data): " << e.what() << '\n';
        return 2;
    } catch (const mucos::ConfigError& e) {
        std::cerr << "error (config): " << e.what() << '\n';
        return 3;
    } catch (const mucos::CheckpointError& e) {
        std::cerr << "error (checkpoint): " << e.what() << '\n';
        return 4;
    } catch (const mucos::TrainError& e) {
        std::cerr << "error (train): " << e.what() << '\n';
        return 5;
    } catch (const mucos::EvalError& e) {
        std::cerr << "error (eval): " << e.what() << '\n';
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 10;
    }
}
