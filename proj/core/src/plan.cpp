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

#include "flowgnn/plan.hpp"

#include <cmath>

#include "flowgnn/errors.hpp"

namespace flowgnn {

WindowKind parse_window_kind(std::string_view name) {
    if (name == "streaming") return WindowKind::Streaming;
    if (name == "tumbling") return WindowKind::Tumbling;
    if (name == "session") return WindowKind::Session;
    if (name == "adaptive") return WindowKind::Adaptive;
    throw ConfigError("unknown window policy '" + std::string(name) + "' (expected streaming|tumbling|session|adaptive)");
}

std::string_view window_kind_name(WindowKind kind) noexcept {
    switch (kind) {
        case WindowKind::Streaming: return "streaming";
        case WindowKind::Tumbling: return "tumbling";
        case WindowKind::Session: return "session";
        case WindowKind::Adaptive: return "adaptive";
    }
    return "?";
}

std::vector<std::uint32_t> PipelinePlan::layer_parallelism() const {
    std::vector<std::uint32_t> out;
    out.reserve(num_layers);
    for (std::uint32_t i = 1; i <= num_layers; ++i) {
        const double raw = std::round(static_cast<double>(base_parallelism) * std::pow(explosion_factor, i - 1.0));
        const double clamped = std::min(std::max(raw, 1.0), static_cast<double>(max_parallelism));
        out.push_back(static_cast<std::uint32_t>(clamped));
    }
    return out;
}

std::uint32_t PipelinePlan::output_subops() const {
    if (output_parallelism != 0) return output_parallelism;
    return layer_parallelism().back();
}

const WindowPolicy& PipelinePlan::window_for(std::uint32_t layer) const {
    if (!layer_windows.empty() && layer >= 1 && layer <= layer_windows.size()) return layer_windows[layer - 1];
    return window;
}

std::size_t PipelinePlan::layer_in_dim(std::uint32_t layer) const {
    return layer == 1 ? model.feature_dim : model.hidden_dim;
}

std::size_t PipelinePlan::layer_out_dim(std::uint32_t layer) const {
    return layer == num_layers ? model.embedding_dim : model.hidden_dim;
}

void PipelinePlan::validate() const {
    if (num_layers < 1) throw ConfigError("layers must be at least 1");
    if (base_parallelism < 1) throw ConfigError("parallelism must be at least 1");
    if (!(explosion_factor > 0.0)) throw ConfigError("lambda must be positive");
    if (max_parallelism < 1) throw ConfigError("max_parallelism must be at least 1");
    if (base_parallelism > max_parallelism) throw ConfigError("parallelism exceeds max_parallelism");
    if (output_parallelism > max_parallelism) throw ConfigError("output parallelism exceeds max_parallelism");
    if (partitioner_parallelism < 1) throw ConfigError("partitioner parallelism must be at least 1");
    if (!layer_windows.empty() && layer_windows.size() != num_layers) {
        throw ConfigError("per-layer window list must have one entry per layer");
    }
    auto check_window = [](const WindowPolicy& w) {
        if (w.window_ms <= 0 || w.session_gap_ms <= 0) throw ConfigError("window intervals must be positive");
        if (w.coalesce_ms <= 0) throw ConfigError("timer coalescing interval must be positive");
        if (w.adaptive_min_ms <= 0 || w.adaptive_min_ms > w.adaptive_max_ms) {
            throw ConfigError("adaptive clamp must satisfy 0 < min <= max");
        }
        if (!(w.adaptive_alpha > 0.0 && w.adaptive_alpha <= 1.0)) throw ConfigError("adaptive_alpha must be in (0,1]");
        if (!(w.adaptive_c > 0.0)) throw ConfigError("adaptive_c must be positive");
        if (w.sketch_depth == 0 || w.sketch_width == 0 || w.sketch_decay_ms <= 0) {
            throw ConfigError("sketch dimensions must be positive");
        }
    };
    check_window(window);
    for (const auto& w : layer_windows) check_window(w);
    if (model.feature_dim == 0 || model.hidden_dim == 0 || model.embedding_dim == 0) {
        throw ConfigError("model dimensions must be positive");
    }
    if (model.num_classes < 2) throw ConfigError("num_classes must be at least 2");
    if (!(model.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (!(cost.hop_latency_ms > 0.0)) throw ConfigError("hop latency must be positive");
    if (cost.per_envelope_us < 0.0 || cost.per_flop_us < 0.0) throw ConfigError("costs must be non-negative");
    if (static_cast<double>(probe_interval_ms) <= cost.hop_latency_ms) {
        throw ConfigError("probe interval must exceed the hop latency");
    }
    if (queue_capacity == 0) throw ConfigError("queue capacity must be positive");
    if (horizon_ms <= 0) throw ConfigError("horizon must be positive");
    if (throughput_bucket_ms <= 0) throw ConfigError("throughput bucket must be positive");
    if (throttle_eps < 0.0) throw ConfigError("throttle must be non-negative");
    if (training.train_trigger_labels < 0 || training.batch_cap < 0) throw ConfigError("training counts must be >= 0");
}

}  // namespace flowgnn
