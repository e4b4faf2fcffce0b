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

#include "flowgnn/cli/export.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "flowgnn/config.hpp"
#include "flowgnn/errors.hpp"

namespace flowgnn::cli {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

double percentile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

Json stats_json(const ChannelStats& s) {
    return Json{{"count", s.count}, {"bytes", s.bytes}, {"remote_count", s.remote_count}, {"remote_bytes", s.remote_bytes}};
}

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Source: return "source";
        case Stage::Partitioner: return "partitioner";
        case Stage::Splitter: return "splitter";
        case Stage::Storage: return "storage";
        case Stage::Coordinator: return "coordinator";
    }
    return "storage";
}

Json tensor_json(const Tensor& t) {
    if (t.rank() == 2) {
        Json rows = Json::array();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < t.cols(); ++c) row.push_back(t.at(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    }
    return Json(t.storage());
}

void flatten(const Json& j, const std::string& prefix, std::ofstream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (!j.is_array()) {
        out << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

}  // namespace

LatencySummary summarize_latencies(std::vector<double> samples) {
    LatencySummary s;
    if (samples.empty()) return s;
    std::sort(samples.begin(), samples.end());
    s.count = samples.size();
    const double sum = std::accumulate(samples.begin(), samples.end(), 0.0);
    s.mean = sum / static_cast<double>(s.count);
    double sq = 0.0;
    for (double x : samples) sq += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(s.count));
    s.min = samples.front();
    s.max = samples.back();
    s.p50 = percentile(samples, 0.50);
    s.p95 = percentile(samples, 0.95);
    s.p99 = percentile(samples, 0.99);
    return s;
}

ThroughputSummary summarize_throughput(const RunMetrics& m) {
    ThroughputSummary t;
    if (m.virtual_runtime_ms > 0.0) {
        t.mean_eps = static_cast<double>(m.embeddings_emitted) / (m.virtual_runtime_ms / 1000.0);
    }
    std::uint64_t best = 0;
    for (auto b : m.throughput_buckets) best = std::max(best, b);
    if (m.bucket_ms > 0) t.max_eps = static_cast<double>(best) / (static_cast<double>(m.bucket_ms) / 1000.0);
    return t;
}

Json metrics_json(const RunMetrics& m) {
    const LatencySummary lat = summarize_latencies(m.latencies_ms);
    const ThroughputSummary tp = summarize_throughput(m);
    Json layers = Json::array();
    for (std::uint32_t l = 1; l <= m.gnn_layers() + 1; ++l) {
        layers.push_back(Json{{"layer", l},
                              {"applied_events", m.applied_per_layer[l - 1]},
                              {"imbalance", m.layer_imbalance(l)},
                              {"aggregator_messages", m.aggregator_traffic(l).count},
                              {"iterative_messages", m.iterative_traffic(l).count},
                              {"iterative_bytes", m.iterative_traffic(l).bytes}});
    }
    Json channels = Json::object();
    for (const auto& [k, v] : m.channels) channels[k] = stats_json(v);
    Json ops = Json::array();
    for (const auto& op : m.operators) {
        ops.push_back(Json{{"name", op.name},
                           {"stage", stage_name(op.stage)},
                           {"layer", op.layer},
                           {"index", op.index},
                           {"busy_ms", op.busy_ms},
                           {"handled", op.handled},
                           {"timers_fired", op.timers_fired},
                           {"blocked_windows", op.blocked_windows},
                           {"max_inbox", op.max_inbox}});
    }
    return Json{
        {"events", Json{{"ingested", m.ingested_events},
                        {"routed", m.routed_events},
                        {"dropped", m.dropped_events},
                        {"expected_applications", m.expected_applications},
                        {"applied_applications", m.applied_applications},
                        {"stale_applications", m.stale_applications}}},
        {"time", Json{{"virtual_runtime_ms", m.virtual_runtime_ms},
                      {"end_time_ms", m.end_time_ms},
                      {"probes", m.probes},
                      {"windows", m.windows}}},
        {"throughput", Json{{"embeddings_emitted", m.embeddings_emitted},
                            {"mean_eps", tp.mean_eps},
                            {"max_eps", tp.max_eps},
                            {"bucket_ms", m.bucket_ms}}},
        {"latency_ms", Json{{"count", lat.count},
                            {"mean", lat.mean},
                            {"stddev", lat.stddev},
                            {"min", lat.min},
                            {"p50", lat.p50},
                            {"p95", lat.p95},
                            {"p99", lat.p99},
                            {"max", lat.max}}},
        {"imbalance", m.gnn_layers() > 0 ? m.imbalance() : 1.0},
        {"windowing", Json{{"windowed_reduces", m.windowed_reduces}, {"max_reduces_per_window", m.max_reduces_per_window}}},
        {"messages", Json{{"total", m.total_messages()}}},
        {"training_rounds", m.training_rounds},
        {"layers", std::move(layers)},
        {"channels", std::move(channels)},
        {"operators", std::move(ops)},
    };
}

Json plan_json(const PipelinePlan& plan) {
    Json j = Json::object();
    const auto settings = describe_plan(plan);
    for (const auto& [k, v] : settings) j[k] = v;
    j["layer_parallelism"] = plan.layer_parallelism();
    j["output_parallelism_effective"] = plan.output_subops();
    return j;
}

Json training_json(const TrainingReport& report) {
    Json rounds = Json::array();
    for (const auto& r : report.rounds) {
        rounds.push_back(Json{{"total_examples", r.total_examples},
                              {"batch", r.batch},
                              {"stale_applications", r.stale_applications},
                              {"final_loss", r.final_loss},
                              {"final_accuracy", r.final_accuracy},
                              {"started_ms", r.started_ms},
                              {"finished_ms", r.finished_ms}});
    }
    return Json{{"rounds", std::move(rounds)}, {"epochs", report.epochs.size()}, {"warnings", report.warnings}};
}

Json partition_json(const PartitionerState& state) {
    const auto loads = state.loads();
    const auto masters = state.master_counts();
    auto spread = [](const std::vector<std::int64_t>& v) {
        double mean = 0.0;
        for (auto x : v) mean += static_cast<double>(x);
        mean /= static_cast<double>(std::max<std::size_t>(v.size(), 1));
        double sq = 0.0;
        for (auto x : v) sq += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        const double mx = v.empty() ? 0.0 : static_cast<double>(*hi);
        return Json{{"min", v.empty() ? 0 : *lo},
                    {"max", v.empty() ? 0 : *hi},
                    {"mean", mean},
                    {"stddev", std::sqrt(sq / static_cast<double>(std::max<std::size_t>(v.size(), 1)))},
                    {"max_over_mean", mean > 0.0 ? mx / mean : 1.0},
                    {"per_part", v}};
    };
    return Json{{"algorithm", std::string(partition_algorithm_name(state.config().algorithm))},
                {"num_partitions", state.num_partitions()},
                {"vertices", state.vertex_count()},
                {"edges", state.total_edges()},
                {"replication_factor", state.vertex_count() > 0 ? state.replication_factor() : 0.0},
                {"edge_load", spread(loads)},
                {"masters", spread(masters)}};
}

Json model_json(const Pipeline& pipeline) {
    Json layers = Json::array();
    const std::uint32_t L = pipeline.plan().num_layers;
    for (std::uint32_t l = 1; l <= L + 1; ++l) {
        const LayerModel& m = pipeline.model(l);
        layers.push_back(Json{{"layer", l == L + 1 ? std::string("head") : std::to_string(l)},
                              {"activation", m.activation == Activation::ReLU ? "relu" : "identity"},
                              {"in_dim", m.in_dim()},
                              {"out_dim", m.out_dim()},
                              {"weight", tensor_json(m.weight)},
                              {"bias", tensor_json(m.bias)}});
    }
    return Json{{"layers", std::move(layers)}};
}

void write_embeddings(const std::string& prefix, const std::map<VertexId, Tensor>& embeddings,
                      const VertexInterner* names) {
    auto bin = open_out(prefix + ".bin", std::ios::out | std::ios::binary);
    auto ids = open_out(prefix + ".ids");
    for (const auto& [v, t] : embeddings) {
        for (double x : t.storage()) {
            auto bits = std::bit_cast<std::uint64_t>(x);
            if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
            bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
        ids << (names && v < names->size() ? names->name(v) : std::to_string(v)) << '\n';
    }
}

EmbeddingTable read_embeddings(const std::string& prefix) {
    EmbeddingTable t;
    std::ifstream ids(prefix + ".ids");
    std::ifstream bin(prefix + ".bin", std::ios::binary);
    if (!ids || !bin) throw ConfigError("cannot read embeddings '" + prefix + "'");
    for (std::string line; std::getline(ids, line);) t.ids.push_back(line);
    std::uint64_t bits = 0;
    while (bin.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        t.values.push_back(std::bit_cast<double>(bits));
    }
    if (!t.ids.empty()) {
        if (t.values.size() % t.ids.size() != 0) throw StateError("embedding matrix does not match its id index");
        t.dim = t.values.size() / t.ids.size();
    }
    return t;
}

void write_flat_csv(const std::string& path, const Json& doc) {
    auto out = open_out(path);
    out << "metric,value\n";
    flatten(doc, "", out);
}

void write_operators_csv(const std::string& path, const RunMetrics& m) {
    auto out = open_out(path);
    out << "name,stage,layer,index,busy_ms,handled,timers_fired,blocked_windows,max_inbox\n";
    for (const auto& op : m.operators) {
        out << op.name << ',' << stage_name(op.stage) << ',' << op.layer << ',' << op.index << ','
            << Json(op.busy_ms).dump() << ',' << op.handled << ',' << op.timers_fired << ',' << op.blocked_windows << ','
            << op.max_inbox << '\n';
    }
}

void write_latencies_csv(const std::string& path, const RunMetrics& m) {
    auto out = open_out(path);
    out << "sample,latency_ms\n";
    for (std::size_t i = 0; i < m.latencies_ms.size(); ++i) out << i << ',' << Json(m.latencies_ms[i]).dump() << '\n';
}

void write_json(const std::string& path, const Json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

}  // namespace flowgnn::cli
