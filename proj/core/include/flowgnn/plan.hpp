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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "flowgnn/graph.hpp"
#include "flowgnn/partitioner.hpp"

namespace flowgnn {

/// Virtual simulation time in nanoseconds.
using SimTime = std::int64_t;
inline constexpr SimTime kNanosPerMilli = 1'000'000;
constexpr SimTime millis(double ms) { return static_cast<SimTime>(ms * static_cast<double>(kNanosPerMilli)); }
constexpr double to_millis(SimTime t) { return static_cast<double>(t) / static_cast<double>(kNanosPerMilli); }

enum class WindowKind { Streaming, Tumbling, Session, Adaptive };
WindowKind parse_window_kind(std::string_view name);
std::string_view window_kind_name(WindowKind kind) noexcept;

struct WindowPolicy {
    WindowKind kind = WindowKind::Streaming;
    EventTime window_ms = 20;       // tumbling interval
    EventTime session_gap_ms = 20;  // session inactivity gap, also the adaptive fallback
    double adaptive_alpha = 0.5;
    double adaptive_c = 2.0;
    EventTime adaptive_min_ms = 5;
    EventTime adaptive_max_ms = 500;
    EventTime coalesce_ms = 10;
    std::uint32_t sketch_depth = 4;
    std::uint32_t sketch_width = 1024;
    EventTime sketch_decay_ms = 10'000;

    bool windowed() const noexcept { return kind != WindowKind::Streaming; }
};

enum class TaskKind { NodeEmbedding, NodeClassification };
enum class SchedulerMode { Sequential, Parallel };

/// Declared virtual cost model; handler cost = per_envelope_us + per_flop_us * flops.
struct CostModel {
    double hop_latency_ms = 1.0;
    double per_envelope_us = 5.0;
    double per_flop_us = 0.001;
};

struct ModelConfig {
    std::size_t feature_dim = 64;
    std::size_t hidden_dim = 64;
    std::size_t embedding_dim = 64;
    std::size_t num_classes = 2;
    std::uint64_t seed = 42;
    double learning_rate = 0.01;
};

struct TrainingConfig {
    /// Labels a single output sub-operator must hold before it votes; 0 disables training.
    std::int64_t train_trigger_labels = 0;
    std::uint32_t epochs = 5;
    /// Upper bound on the global batch; 0 means all labelled vertices.
    std::int64_t batch_cap = 0;
};

/// Operator chain description: Source -> Partitioner -> Splitter -> GraphStorage x L -> Output.
struct PipelinePlan {
    std::uint32_t num_layers = 2;
    std::uint32_t base_parallelism = 1;
    double explosion_factor = 1.0;
    std::uint32_t max_parallelism = 128;
    /// Logical parts; 0 means max_parallelism.
    std::uint32_t num_partitions = 0;
    /// 0 means the parallelism of the last GNN layer.
    std::uint32_t output_parallelism = 0;
    std::uint32_t partitioner_parallelism = 1;
    WindowPolicy window;
    /// Optional per-layer override; empty means `window` everywhere.
    std::vector<WindowPolicy> layer_windows;
    TaskKind task = TaskKind::NodeEmbedding;
    PartitionerConfig partitioner;
    ModelConfig model;
    TrainingConfig training;
    CostModel cost;
    std::size_t queue_capacity = 4096;
    EventTime probe_interval_ms = 50;
    EventTime horizon_ms = 100'000'000;
    SchedulerMode scheduler = SchedulerMode::Sequential;
    std::uint32_t worker_threads = 0;  // parallel mode; 0 = hardware concurrency
    EventTime throughput_bucket_ms = 100;
    /// Ingestion pacing at the source in edges (events) per virtual second; 0 = event timestamps only.
    double throttle_eps = 0.0;

    std::uint32_t partitions() const noexcept { return num_partitions == 0 ? max_parallelism : num_partitions; }
    /// p_i = round(p * lambda^(i-1)) clamped to [1, max_parallelism], for i = 1..L.
    std::vector<std::uint32_t> layer_parallelism() const;
    std::uint32_t output_subops() const;
    const WindowPolicy& window_for(std::uint32_t layer) const;
    std::size_t layer_in_dim(std::uint32_t layer) const;
    std::size_t layer_out_dim(std::uint32_t layer) const;
    /// Throws ConfigError describing the first problem found.
    void validate() const;
};

}  // namespace flowgnn
