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

#include "flowgnn/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "flowgnn/errors.hpp"

namespace flowgnn {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T to_integer(const std::string& key, const std::string& value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("setting '" + key + "' expects an integer, got '" + value + "'");
    }
    return out;
}

double to_real(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
        throw ConfigError("setting '" + key + "' expects a number, got '" + value + "'");
    }
    return v;
}

std::string real_string(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

struct Key {
    const char* name;
    std::function<void(PipelinePlan&, const std::string&, const std::string&)> set;
    std::function<std::string(const PipelinePlan&)> get;
};

#define FLOWGNN_INT_KEY(NAME, FIELD)                                                                          \
    Key {                                                                                                     \
        NAME, [](PipelinePlan& p, const std::string& k, const std::string& v) {                               \
            p.FIELD = to_integer<std::decay_t<decltype(p.FIELD)>>(k, v);                                      \
        },                                                                                                    \
            [](const PipelinePlan& p) { return std::to_string(p.FIELD); }                                     \
    }
#define FLOWGNN_REAL_KEY(NAME, FIELD)                                                                         \
    Key {                                                                                                     \
        NAME, [](PipelinePlan& p, const std::string& k, const std::string& v) { p.FIELD = to_real(k, v); },   \
            [](const PipelinePlan& p) { return real_string(p.FIELD); }                                        \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        FLOWGNN_INT_KEY("layers", num_layers),
        FLOWGNN_INT_KEY("parallelism", base_parallelism),
        FLOWGNN_REAL_KEY("explosion_factor", explosion_factor),
        FLOWGNN_INT_KEY("max_parallelism", max_parallelism),
        FLOWGNN_INT_KEY("num_partitions", num_partitions),
        FLOWGNN_INT_KEY("output_parallelism", output_parallelism),
        FLOWGNN_INT_KEY("partitioner_parallelism", partitioner_parallelism),
        Key{"window",
            [](PipelinePlan& p, const std::string&, const std::string& v) { p.window.kind = parse_window_kind(v); },
            [](const PipelinePlan& p) { return std::string(window_kind_name(p.window.kind)); }},
        FLOWGNN_INT_KEY("window_ms", window.window_ms),
        FLOWGNN_INT_KEY("session_gap_ms", window.session_gap_ms),
        FLOWGNN_REAL_KEY("adaptive_alpha", window.adaptive_alpha),
        FLOWGNN_REAL_KEY("adaptive_c", window.adaptive_c),
        FLOWGNN_INT_KEY("adaptive_min_ms", window.adaptive_min_ms),
        FLOWGNN_INT_KEY("adaptive_max_ms", window.adaptive_max_ms),
        FLOWGNN_INT_KEY("coalesce_ms", window.coalesce_ms),
        FLOWGNN_INT_KEY("sketch_depth", window.sketch_depth),
        FLOWGNN_INT_KEY("sketch_width", window.sketch_width),
        FLOWGNN_INT_KEY("sketch_decay_ms", window.sketch_decay_ms),
        Key{"partitioner",
            [](PipelinePlan& p, const std::string&, const std::string& v) {
                p.partitioner.algorithm = parse_partition_algorithm(v);
            },
            [](const PipelinePlan& p) { return std::string(partition_algorithm_name(p.partitioner.algorithm)); }},
        FLOWGNN_REAL_KEY("hdrf_theta", partitioner.theta),
        FLOWGNN_REAL_KEY("hdrf_epsilon", partitioner.epsilon),
        FLOWGNN_INT_KEY("partition_seed", partitioner.seed),
        FLOWGNN_INT_KEY("feature_dim", model.feature_dim),
        FLOWGNN_INT_KEY("hidden_dim", model.hidden_dim),
        FLOWGNN_INT_KEY("embedding_dim", model.embedding_dim),
        FLOWGNN_INT_KEY("num_classes", model.num_classes),
        FLOWGNN_INT_KEY("seed", model.seed),
        FLOWGNN_REAL_KEY("learning_rate", model.learning_rate),
        FLOWGNN_INT_KEY("train_trigger_labels", training.train_trigger_labels),
        FLOWGNN_INT_KEY("epochs", training.epochs),
        FLOWGNN_INT_KEY("batch_cap", training.batch_cap),
        FLOWGNN_REAL_KEY("hop_latency_ms", cost.hop_latency_ms),
        FLOWGNN_REAL_KEY("envelope_cost_us", cost.per_envelope_us),
        FLOWGNN_REAL_KEY("flop_cost_us", cost.per_flop_us),
        FLOWGNN_INT_KEY("queue_capacity", queue_capacity),
        FLOWGNN_INT_KEY("probe_interval_ms", probe_interval_ms),
        FLOWGNN_INT_KEY("horizon_ms", horizon_ms),
        Key{"scheduler",
            [](PipelinePlan& p, const std::string& k, const std::string& v) {
                if (v == "sequential") p.scheduler = SchedulerMode::Sequential;
                else if (v == "parallel") p.scheduler = SchedulerMode::Parallel;
                else throw ConfigError("setting '" + k + "' expects sequential or parallel, got '" + v + "'");
            },
            [](const PipelinePlan& p) {
                return std::string(p.scheduler == SchedulerMode::Sequential ? "sequential" : "parallel");
            }},
        FLOWGNN_INT_KEY("worker_threads", worker_threads),
        FLOWGNN_INT_KEY("throughput_bucket_ms", throughput_bucket_ms),
        FLOWGNN_REAL_KEY("throttle_eps", throttle_eps),
    };
    return table;
}

#undef FLOWGNN_INT_KEY
#undef FLOWGNN_REAL_KEY

}  // namespace

Settings parse_settings(std::string_view text) {
    Settings out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        out[std::move(key)] = std::move(value);
    }
    return out;
}

Settings read_settings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_settings(buf.str());
}

void apply_setting(PipelinePlan& plan, const std::string& key, const std::string& value) {
    const std::string& name = key == "lambda" ? std::string("explosion_factor") : key;
    for (const auto& k : keys()) {
        if (name == k.name) {
            k.set(plan, name, value);
            return;
        }
    }
    throw ConfigError("unknown setting '" + key + "'");
}

void apply_settings(PipelinePlan& plan, const Settings& settings) {
    for (const auto& [k, v] : settings) apply_setting(plan, k, v);
}

Settings describe_plan(const PipelinePlan& plan) {
    Settings out;
    for (const auto& k : keys()) out[k.name] = k.get(plan);
    return out;
}

std::vector<std::string> plan_keys() {
    std::vector<std::string> out;
    for (const auto& k : keys()) out.emplace_back(k.name);
    return out;
}

}  // namespace flowgnn
