/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#include "flowgnn/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "flowgnn/cli/export.hpp"
#include "flowgnn/datagen.hpp"
#include "flowgnn/dataset.hpp"
#include "flowgnn/errors.hpp"
#include "flowgnn/reference.hpp"

namespace flowgnn::cli {

namespace {

constexpr double kOracleTolerance = 1e-6;

class OracleMismatch : public Error {
  public:
    explicit OracleMismatch(const std::string& what) : Error("oracle", what) {}
};

std::pair<std::string, std::string> split_setting(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + kv + "'");
    return {kv.substr(0, eq), kv.substr(eq + 1)};
}

struct Options {
    std::string config;
    std::vector<std::string> settings;
    std::string dataset;
    std::string format = "edges";
    std::string labels;
    std::string out_dir = ".";
    std::string log_level = "info";
    bool oracle_check = false;
    std::string matrix;
    std::vector<std::string> sweeps;
    std::int64_t wcount = 0;
    std::string csv;
    // generate
    std::string shape = "er";
    std::string output;
    TraceOptions trace;
    // dedicated flags translated into settings, in declaration order
    std::vector<std::pair<std::string, std::string>> flag_values;
};

/// Flags that are shorthands for plan settings.
struct Shorthand {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr Shorthand kPlanFlags[] = {
    {"--layers", "layers", "number of GNN layers"},
    {"--parallelism", "parallelism", "base parallelism of layer 1"},
    {"--lambda", "explosion_factor", "explosion factor between consecutive layers"},
    {"--max-parallelism", "max_parallelism", "upper bound on any layer's parallelism"},
    {"--num-partitions", "num_partitions", "logical parts (0 = max parallelism)"},
    {"--partitioner", "partitioner", "hdrf, clda or random"},
    {"--window", "window", "streaming, tumbling, session or adaptive"},
    {"--window-ms", "window_ms", "tumbling interval in ms"},
    {"--session-gap-ms", "session_gap_ms", "session inactivity gap in ms"},
    {"--feature-dim", "feature_dim", "input feature dimension"},
    {"--hidden-dim", "hidden_dim", "hidden dimension"},
    {"--embedding-dim", "embedding_dim", "final embedding dimension"},
    {"--classes", "num_classes", "number of label classes"},
    {"--seed", "seed", "model and feature seed"},
    {"--throttle-eps", "throttle_eps", "ingestion pacing in events per virtual second"},
    {"--scheduler", "scheduler", "sequential or parallel"},
    {"--epochs", "epochs", "epochs per training round"},
    {"--trigger", "train_trigger_labels", "labels per output sub-operator that trigger a vote"},
    {"--batch-cap", "batch_cap", "upper bound on the training batch"},
    {"--learning-rate", "learning_rate", "optimizer learning rate"},
};

void add_plan_options(CLI::App* sub, Options& o, std::vector<std::unique_ptr<std::string>>& storage) {
    sub->add_option("--config", o.config, "key = value config file");
    sub->add_option("--set", o.settings, "override a setting, key=value (repeatable)");
    for (const auto& f : kPlanFlags) {
        storage.push_back(std::make_unique<std::string>());
        std::string* slot = storage.back().get();
        const std::string key = f.key;
        sub->add_option_function<std::string>(
            f.flag, [&o, key, slot](const std::string& v) {
                *slot = v;
                o.flag_values.emplace_back(key, v);
            },
            f.help);
    }
}

void add_dataset_options(CLI::App* sub, Options& o) {
    sub->add_option("--dataset", o.dataset, "input event file")->required();
    sub->add_option("--format", o.format, "edges or tagged")->capture_default_str();
    sub->add_option("--labels", o.labels, "labels sidecar file");
}

std::vector<std::string> all_overrides(const Options& o) {
    std::vector<std::string> out = o.settings;
    for (const auto& [k, v] : o.flag_values) out.push_back(k + "=" + v);
    return out;
}

Dataset load_dataset(const Options& o, const PipelinePlan& plan) {
    DatasetSpec spec;
    spec.path = o.dataset;
    spec.format = parse_dataset_format(o.format);
    spec.feature_dim = plan.model.feature_dim;
    spec.seed = plan.model.seed;
    if (!o.labels.empty()) spec.labels_path = o.labels;
    return parse_dataset(spec);
}

Json invocation_json(const std::string& command, const std::vector<std::string>& args, const CLI::App* sub) {
    Json flags = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        const auto& res = opt->results();
        if (res.size() == 1) flags[opt->get_name()] = res.front();
        else if (res.empty()) flags[opt->get_name()] = true;
        else flags[opt->get_name()] = res;
    }
    return Json{{"command", command}, {"args", std::vector<std::string>(args.begin() + 1, args.end())}, {"flags", flags}};
}

std::filesystem::path prepare_out(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

Json run_summary(const RunMetrics& m, const Dataset& ds) {
    return Json{{"dataset", Json{{"lines", ds.lines},
                                 {"events", ds.events.size()},
                                 {"edge_events", ds.edge_events},
                                 {"label_events", ds.label_events},
                                 {"vertices", ds.vertices.size()},
                                 {"synthesized_features", ds.synthesized_features},
                                 {"out_of_order", ds.out_of_order}}},
                {"metrics", metrics_json(m)}};
}

double oracle_error(const Pipeline& p, const std::vector<GraphEvent>& events) {
    std::vector<LayerModel> layers;
    for (std::uint32_t l = 1; l <= p.plan().num_layers; ++l) layers.push_back(p.model(l));
    return max_relative_error(p.embeddings(), batch_forward(snapshot_of(events), layers));
}

int cmd_infer(const Options& o, const Json& invocation, std::ostream& out) {
    const PipelinePlan plan = resolve_plan(o.config, all_overrides(o));
    const Dataset ds = load_dataset(o, plan);
    Pipeline p(plan);
    p.ingest(ds.events);
    const RunMetrics m = p.run_until_quiescent();
    const auto dir = prepare_out(o.out_dir);
    const auto emb = p.embeddings();
    write_embeddings((dir / "embeddings").string(), emb, &ds.vertices);

    Json doc{{"invocation", invocation}, {"plan", plan_json(plan)}};
    doc.update(run_summary(m, ds));
    double err = 0.0;
    if (o.oracle_check) {
        err = oracle_error(p, ds.events);
        doc["oracle"] = Json{{"max_relative_error", err}, {"tolerance", kOracleTolerance}, {"passed", err < kOracleTolerance}};
    }
    write_json((dir / "metrics.json").string(), doc);
    write_flat_csv((dir / "metrics.csv").string(), doc["metrics"]);
    write_operators_csv((dir / "operators.csv").string(), m);
    write_latencies_csv((dir / "latencies.csv").string(), m);
    out << Json{{"command", "infer"}, {"embeddings", emb.size()}, {"virtual_runtime_ms", m.virtual_runtime_ms},
                {"out", dir.string()}}.dump()
        << '\n';
    if (o.oracle_check && !(err < kOracleTolerance)) {
        throw OracleMismatch("incremental embeddings differ from the batch forward pass: max relative error " +
                             std::to_string(err));
    }
    return 0;
}

int cmd_train(const Options& o, const Json& invocation, std::ostream& out) {
    const PipelinePlan plan = resolve_plan(o.config, all_overrides(o));
    const Dataset ds = load_dataset(o, plan);
    if (ds.label_events == 0) throw ConfigError("training needs labelled vertices; the dataset has none");
    Pipeline p(plan);
    p.ingest(ds.events);
    RunMetrics m = p.run_until_quiescent();
    if (plan.training.train_trigger_labels == 0) {
        p.request_training();
        m = p.run_until_quiescent();
    }
    const TrainingReport& report = p.training_report();
    std::vector<std::string> warnings = report.warnings;
    if (report.rounds.empty()) {
        const std::string msg = "training never started: no output sub-operator majority reached " +
                                std::to_string(plan.training.train_trigger_labels) + " labels";
        spdlog::warn(msg);
        warnings.push_back(msg);
    }
    const auto dir = prepare_out(o.out_dir);
    write_embeddings((dir / "embeddings").string(), p.embeddings(), &ds.vertices);
    write_json((dir / "model.json").string(), model_json(p));
    {
        std::ofstream log(dir / "loss.jsonl");
        if (!log) throw ConfigError("cannot write loss log in '" + dir.string() + "'");
        for (const auto& e : report.epochs) {
            log << Json{{"round", e.round},     {"epoch", e.epoch},     {"loss_sum", e.loss_sum},
                        {"loss", e.loss},       {"accuracy", e.accuracy}, {"grad_norm", e.grad_norm},
                        {"batch", e.batch},     {"skipped", e.skipped},   {"phase_ms", e.phase_ms}}
                       .dump()
                << '\n';
        }
    }
    Json doc{{"invocation", invocation}, {"plan", plan_json(plan)}};
    doc.update(run_summary(m, ds));
    doc["training"] = training_json(report);
    doc["training"]["warnings"] = warnings;
    write_json((dir / "metrics.json").string(), doc);
    write_flat_csv((dir / "metrics.csv").string(), doc["metrics"]);
    write_operators_csv((dir / "operators.csv").string(), m);
    write_latencies_csv((dir / "latencies.csv").string(), m);
    const double acc = report.rounds.empty() ? 0.0 : report.rounds.back().final_accuracy;
    out << Json{{"command", "train"}, {"rounds", report.rounds.size()}, {"epochs", report.epochs.size()},
                {"final_accuracy", acc}, {"out", dir.string()}}.dump()
        << '\n';
    return 0;
}

int cmd_partition(const Options& o, const Json& invocation, std::ostream& out) {
    PipelinePlan plan = resolve_plan(o.config, all_overrides(o));
    const Dataset ds = load_dataset(o, plan);
    PartitionerConfig cfg = plan.partitioner;
    cfg.num_partitions = plan.partitions();
    PartitionerState state(cfg);
    std::uint64_t unknown_deletes = 0;
    for (const auto& ev : ds.events) {
        if (const auto* e = std::get_if<EdgeElement>(&ev.element)) {
            if (ev.op == EventOp::Create) state.assign_part(e->src.id, e->dst.id);
            else if (ev.op == EventOp::Delete && !state.take_edge(e->src.id, e->dst.id)) ++unknown_deletes;
        } else if (const auto* v = std::get_if<VertexElement>(&ev.element)) {
            state.place_vertex(v->id);
        } else {
            state.place_vertex(std::get<FeatureElement>(ev.element).owner.id);
        }
    }
    Json report = partition_json(state);
    report["unknown_deletes"] = unknown_deletes;
    const auto dir = prepare_out(o.out_dir);
    write_json((dir / "partition.json").string(), Json{{"invocation", invocation}, {"report", report}});
    out << report.dump() << '\n';
    return 0;
}

BenchRow run_case(const Options& o, const BenchCase& c) {
    BenchRow row;
    row.name = c.name;
    try {
        std::vector<std::string> overrides = all_overrides(o);
        overrides.insert(overrides.end(), c.overrides.begin(), c.overrides.end());
        if (o.wcount > 0) overrides.emplace_back("window=tumbling");
        const PipelinePlan plan = resolve_plan(o.config, overrides);
        Dataset ds = load_dataset(o, plan);
        Pipeline p(plan);
        RunMetrics m;
        if (o.wcount > 0) {
            m = run_wcount(p, std::move(ds.events), o.wcount);
            row.per_part_batch = wcount_part_batch(o.wcount, plan.base_parallelism);
        } else {
            p.ingest(std::move(ds.events));
            m = p.run_until_quiescent();
        }
        const auto tp = summarize_throughput(m);
        const std::uint32_t probe = std::min<std::uint32_t>(2, plan.num_layers);
        row.virtual_runtime_ms = m.virtual_runtime_ms;
        row.throughput_mean_eps = tp.mean_eps;
        row.throughput_max_eps = tp.max_eps;
        row.imbalance = m.imbalance();
        row.layer2_reduce_messages = m.aggregator_traffic(probe).count;
        row.layer2_messages = m.iterative_traffic(probe).count;
        row.layer2_bytes = m.iterative_traffic(probe).bytes;
        row.embeddings = m.embeddings_emitted;
        row.latency_p50_ms = summarize_latencies(m.latencies_ms).p50;
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        spdlog::error("bench case '{}' failed: {}", c.name, e.what());
    }
    return row;
}

int cmd_bench(const Options& o, const Json& invocation, std::ostream& out) {
    std::vector<BenchCase> cases;
    if (!o.matrix.empty()) {
        std::ifstream in(o.matrix);
        if (!in) throw ConfigError("cannot open matrix file '" + o.matrix + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        cases = parse_matrix(buf.str());
    }
    if (!o.sweeps.empty()) {
        const auto swept = expand_sweeps(o.sweeps);
        if (cases.empty()) {
            cases = swept;
        } else {
            std::vector<BenchCase> product;
            for (const auto& a : cases) {
                for (const auto& b : swept) {
                    BenchCase c{a.name + " " + b.name, a.overrides};
                    c.overrides.insert(c.overrides.end(), b.overrides.begin(), b.overrides.end());
                    product.push_back(std::move(c));
                }
            }
            cases = std::move(product);
        }
    }
    if (o.matrix.empty() && o.sweeps.empty()) cases.push_back(BenchCase{"base", {}});
    // fail fast on configuration problems shared by every case
    (void)resolve_plan(o.config, all_overrides(o));

    std::vector<BenchRow> rows;
    for (const auto& c : cases) rows.push_back(run_case(o, c));
    const auto dir = prepare_out(o.out_dir);
    const std::string csv = o.csv.empty() ? (dir / "bench.csv").string() : o.csv;
    {
        std::ofstream f(csv);
        if (!f) throw ConfigError("cannot write '" + csv + "'");
        write_bench_csv(f, rows);
    }
    write_json((dir / "bench.json").string(), Json{{"invocation", invocation}, {"cases", rows.size()}, {"csv", csv}});
    write_bench_csv(out, rows);
    return 0;
}

int cmd_generate(const Options& o, std::ostream& out) {
    TraceOptions t = o.trace;
    t.shape = parse_graph_shape(o.shape);
    const auto events = generate_trace(t);
    if (o.output.empty() || o.output == "-") {
        write_tagged(out, events);
    } else {
        std::ofstream f(o.output);
        if (!f) throw ConfigError("cannot write '" + o.output + "'");
        write_tagged(f, events);
    }
    return 0;
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& message, std::optional<std::size_t> line) {
    Json e{{"kind", kind}, {"message", message}};
    if (line) e["line"] = *line;
    err << Json{{"error", e}}.dump() << '\n';
}

}  // namespace

PipelinePlan resolve_plan(const std::string& config_path, const std::vector<std::string>& overrides) {
    PipelinePlan plan;
    if (!config_path.empty()) apply_settings(plan, read_settings_file(config_path));
    for (const auto& kv : overrides) {
        const auto [k, v] = split_setting(kv);
        apply_setting(plan, k, v);
    }
    plan.validate();
    return plan;
}

std::int64_t wcount_part_batch(std::int64_t batch, std::uint32_t parallelism) {
    if (batch <= 0 || parallelism == 0) throw ArgumentError("batch and parallelism must be positive");
    return batch / static_cast<std::int64_t>(parallelism);
}

RunMetrics run_wcount(Pipeline& pipeline, std::vector<GraphEvent> events, std::int64_t batch) {
    if (batch <= 0) throw ArgumentError("wcount batch must be positive");
    std::stable_sort(events.begin(), events.end(),
                     [](const GraphEvent& a, const GraphEvent& b) { return a.timestamp < b.timestamp; });
    // Event counts that close each batch of `batch` edges.
    std::vector<std::int64_t> chunks;
    std::int64_t in_chunk = 0;
    std::int64_t edges = 0;
    for (const auto& ev : events) {
        ++in_chunk;
        if (ev.kind() == ElementKind::Edge && ++edges == batch) {
            chunks.push_back(in_chunk);
            in_chunk = 0;
            edges = 0;
        }
    }
    pipeline.ingest(std::move(events));
    RunMetrics m;
    for (std::int64_t n : chunks) {
        pipeline.set_release_gate(n);
        m = pipeline.run_until_quiescent();
    }
    pipeline.set_release_gate(-1);
    return pipeline.run_until_quiescent();
}

std::vector<BenchCase> parse_matrix(const std::string& text) {
    std::vector<BenchCase> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream words(line);
        std::vector<std::string> tokens;
        for (std::string w; words >> w;) tokens.push_back(w);
        if (tokens.empty()) continue;
        BenchCase c;
        std::size_t first = 0;
        if (tokens[0].find('=') == std::string::npos) {
            c.name = tokens[0];
            first = 1;
        }
        for (std::size_t i = first; i < tokens.size(); ++i) {
            split_setting(tokens[i]);
            c.overrides.push_back(tokens[i]);
        }
        if (c.name.empty()) {
            for (const auto& s : c.overrides) c.name += (c.name.empty() ? "" : " ") + s;
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<BenchCase> expand_sweeps(const std::vector<std::string>& sweeps) {
    std::vector<BenchCase> cases{BenchCase{}};
    for (const auto& sweep : sweeps) {
        const auto [key, list] = split_setting(sweep);
        std::vector<std::string> values;
        std::istringstream in(list);
        for (std::string v; std::getline(in, v, ',');) {
            if (!v.empty()) values.push_back(v);
        }
        if (values.empty()) throw ConfigError("sweep '" + sweep + "' lists no values");
        std::vector<BenchCase> next;
        for (const auto& c : cases) {
            for (const auto& v : values) {
                BenchCase n = c;
                n.overrides.push_back(key + "=" + v);
                n.name += (n.name.empty() ? "" : " ") + key + "=" + v;
                next.push_back(std::move(n));
            }
        }
        cases = std::move(next);
    }
    return cases;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    out << "name,status,virtual_runtime_ms,throughput_mean_eps,throughput_max_eps,imbalance,layer2_reduce_messages,"
           "layer2_messages,layer2_bytes,embeddings,latency_p50_ms,per_part_batch\n";
    for (const auto& r : rows) {
        out << quote(r.name) << ',' << quote(r.status) << ',' << Json(r.virtual_runtime_ms).dump() << ','
            << Json(r.throughput_mean_eps).dump() << ',' << Json(r.throughput_max_eps).dump() << ','
            << Json(r.imbalance).dump() << ',' << r.layer2_reduce_messages << ',' << r.layer2_messages << ','
            << r.layer2_bytes << ',' << r.embeddings << ',' << Json(r.latency_p50_ms).dump() << ',' << r.per_part_batch
            << '\n';
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Streaming GNN dataflow engine"};
    app.require_subcommand(1);
    Options o;
    std::vector<std::unique_ptr<std::string>> storage;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out_dir, "output directory")->capture_default_str();
        sub->add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off")->capture_default_str();
    };

    CLI::App* infer = app.add_subcommand("infer", "stream a dataset and maintain embeddings");
    add_dataset_options(infer, o);
    add_plan_options(infer, o, storage);
    add_common(infer);
    infer->add_flag("--oracle-check", o.oracle_check, "compare against a batch forward pass");

    CLI::App* train = app.add_subcommand("train", "stream a labelled dataset with coordinated training");
    add_dataset_options(train, o);
    add_plan_options(train, o, storage);
    add_common(train);

    CLI::App* partition = app.add_subcommand("partition", "replay edges through the partitioner only");
    add_dataset_options(partition, o);
    add_plan_options(partition, o, storage);
    add_common(partition);

    CLI::App* bench = app.add_subcommand("bench", "run a configuration matrix and compare");
    add_dataset_options(bench, o);
    add_plan_options(bench, o, storage);
    add_common(bench);
    bench->add_option("--matrix", o.matrix, "file of cases, one 'name key=value ...' per line");
    bench->add_option("--sweep", o.sweeps, "key=v1,v2,... (repeatable, cartesian product)");
    bench->add_option("--wcount", o.wcount, "release fixed batches of this many edges");
    bench->add_option("--csv", o.csv, "comparison table path (default <out>/bench.csv)");

    CLI::App* generate = app.add_subcommand("generate", "write a synthetic trace in the tagged format");
    generate->add_option("--shape", o.shape, "er, powerlaw, hub or two-cluster")->capture_default_str();
    generate->add_option("--vertices", o.trace.vertices)->capture_default_str();
    generate->add_option("--edges", o.trace.edges)->capture_default_str();
    generate->add_option("--feature-dim", o.trace.feature_dim)->capture_default_str();
    generate->add_option("--seed", o.trace.seed)->capture_default_str();
    generate->add_option("--edges-per-ms", o.trace.edges_per_ms)->capture_default_str();
    generate->add_option("--hub-fraction", o.trace.hub_fraction)->capture_default_str();
    generate->add_option("--delete-fraction", o.trace.delete_fraction)->capture_default_str();
    generate->add_flag("--labels", o.trace.labels, "emit labels and train masks");
    generate->add_option("--label-position", o.trace.label_position, "label block position in [0, 1]")
        ->capture_default_str();
    generate->add_option("--output,-o", o.output, "output path, '-' for stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        emit_error(err, "usage", e.what(), std::nullopt);
        return 2;
    }

    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("flowgnn", sink);
    logger->set_pattern("[%l] %v");
    auto previous = spdlog::default_logger();
    spdlog::set_default_logger(logger);
    struct Restore {
        std::shared_ptr<spdlog::logger> prev;
        ~Restore() { spdlog::set_default_logger(prev); }
    } restore{previous};

    try {
        spdlog::set_level(spdlog::level::from_str(o.log_level));
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "generate") return cmd_generate(o, out);
        const Json invocation = invocation_json(name, args, sub);
        if (name == "infer") return cmd_infer(o, invocation, out);
        if (name == "train") return cmd_train(o, invocation, out);
        if (name == "partition") return cmd_partition(o, invocation, out);
        return cmd_bench(o, invocation, out);
    } catch (const OracleMismatch& e) {
        emit_error(err, e.kind(), e.what(), std::nullopt);
        return 3;
    } catch (const ParseError& e) {
        emit_error(err, e.kind(), e.what(), e.line());
        return 1;
    } catch (const Error& e) {
        emit_error(err, e.kind(), e.what(), std::nullopt);
        return 1;
    } catch (const std::exception& e) {
        emit_error(err, "internal", e.what(), std::nullopt);
        return 1;
    }
}

}  // namespace flowgnn::cli
