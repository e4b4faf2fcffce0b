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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "flowgnn/envelope.hpp"

namespace flowgnn {

struct ChannelStats {
    std::uint64_t count = 0;
    std::uint64_t bytes = 0;
    std::uint64_t remote_count = 0;
    std::uint64_t remote_bytes = 0;

    ChannelStats& operator+=(const ChannelStats& o) noexcept {
        count += o.count;
        bytes += o.bytes;
        remote_count += o.remote_count;
        remote_bytes += o.remote_bytes;
        return *this;
    }
};

struct SubOperatorMetrics {
    std::string name;
    Stage stage = Stage::Storage;
    std::uint32_t layer = 0;
    std::uint32_t index = 0;
    double busy_ms = 0.0;
    std::uint64_t handled = 0;
    std::uint64_t timers_fired = 0;
    std::uint64_t blocked_windows = 0;
    std::uint64_t max_inbox = 0;
};

/// max / mean; 1.0 when every entry is zero. Throws ArgumentError on an empty span.
double imbalance_factor(std::span<const double> busy);

struct RunMetrics {
    std::vector<SubOperatorMetrics> operators;
    /// Keyed "<destination>.<kind>", e.g. "layer2.reduce", "layer1.sync", "output.forward".
    std::map<std::string, ChannelStats> channels;
    std::vector<double> latencies_ms;
    std::vector<std::uint64_t> throughput_buckets;
    EventTime bucket_ms = 100;
    std::uint64_t embeddings_emitted = 0;

    std::uint64_t ingested_events = 0;
    std::uint64_t routed_events = 0;
    std::uint64_t dropped_events = 0;
    std::uint64_t expected_applications = 0;
    std::uint64_t applied_applications = 0;
    /// External applications per storage layer, index 0 is layer 1; the last entry is the output.
    std::vector<std::uint64_t> applied_per_layer;

    /// Batched reduce envelopes received and the largest count for one (holding part, destination,
    /// eviction) triple.
    std::uint64_t windowed_reduces = 0;
    std::uint64_t max_reduces_per_window = 0;

    double virtual_runtime_ms = 0.0;
    double end_time_ms = 0.0;
    std::uint64_t probes = 0;
    std::uint64_t windows = 0;
    std::uint32_t training_rounds = 0;
    std::uint64_t stale_applications = 0;

    /// Busy-time imbalance of one storage layer (1..L); the output layer is L+1.
    double layer_imbalance(std::uint32_t layer) const;
    /// Largest per-layer imbalance over the GNN layers.
    double imbalance() const;
    std::uint32_t gnn_layers() const noexcept;
    ChannelStats channel(const std::string& key) const;
    /// Envelopes that update layer-`l` aggregators: reduce, replace, remove and batch reduce.
    ChannelStats aggregator_traffic(std::uint32_t layer) const;
    /// Intra-layer and feedback traffic of layer `l`: aggregator RMIs, syncs, gradients, parameters.
    ChannelStats iterative_traffic(std::uint32_t layer) const;
    std::uint64_t total_messages() const;
};

}  // namespace flowgnn
