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

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "flowgnn/graph.hpp"

namespace flowgnn {

enum class PartitionAlgorithm { HDRF, CLDA, Random };

PartitionAlgorithm parse_partition_algorithm(std::string_view name);
std::string_view partition_algorithm_name(PartitionAlgorithm a) noexcept;

struct PartitionerConfig {
    PartitionAlgorithm algorithm = PartitionAlgorithm::HDRF;
    std::uint32_t num_partitions = 128;
    double theta = 2.0;    // weight of the balance term
    double epsilon = 1.0;  // load smoothing
    std::uint64_t seed = 0;
};

/// Online vertex-cut partitioner state: partial degrees, replica sets, part loads (edges) and the
/// write-once master part table.
///
/// Safe to share between partitioner workers: every call touching a vertex holds that vertex's shard
/// lock, and edges lock both endpoint shards in ascending shard order.
class PartitionerState {
  public:
    explicit PartitionerState(PartitionerConfig config);
    PartitionerState(const PartitionerState&) = delete;
    PartitionerState& operator=(const PartitionerState&) = delete;

    const PartitionerConfig& config() const noexcept { return config_; }
    std::uint32_t num_partitions() const noexcept { return config_.num_partitions; }

    /// Chooses a logical part for the edge src->dst and records it. Masters of first-seen endpoints
    /// are assigned to the returned part.
    PartId assign_part(VertexId src, VertexId dst);
    /// First part ever recorded for `v` becomes its immutable master; returns the stored master.
    PartId assign_master(VertexId v, PartId part);
    /// Placement of a vertex-only event: the existing master or, for unseen vertices, the part with the
    /// fewest masters (Random: uniform).
    PartId place_vertex(VertexId v);
    /// Part holding the most recent live copy of src->dst, consumed by a delete. Empty if unknown.
    std::optional<PartId> take_edge(VertexId src, VertexId dst);

    std::optional<PartId> master_of(VertexId v) const;
    std::vector<PartId> vertex_parts(VertexId v) const;
    std::int64_t partial_degree(VertexId v) const;
    std::int64_t part_load(PartId p) const { return loads_[p].load(std::memory_order_relaxed); }
    std::int64_t total_edges() const noexcept { return total_edges_.load(std::memory_order_relaxed); }
    std::size_t vertex_count() const;
    std::vector<std::int64_t> loads() const;
    std::vector<std::int64_t> master_counts() const;

    /// Mean number of parts per seen vertex. Throws StateError when no vertex was seen.
    double replication_factor() const;

  private:
    struct VertexInfo {
        std::int64_t degree = 0;
        std::vector<PartId> parts;  // sorted
        PartId master = kUnsetPart;
    };
    struct Shard {
        mutable std::mutex mutex;
        std::unordered_map<VertexId, VertexInfo> vertices;
    };
    static constexpr std::size_t kShards = 64;

    std::size_t shard_of(VertexId v) const noexcept { return (v * 0x9E3779B1u) % kShards; }
    PartId choose(VertexInfo& u, VertexInfo& v);
    PartId random_part();
    PartId assign_master_locked(VertexInfo& info, PartId part);
    static void add_part(VertexInfo& info, PartId p);

    PartitionerConfig config_;
    std::unique_ptr<Shard[]> shards_;
    std::unique_ptr<std::atomic<std::int64_t>[]> loads_;
    std::unique_ptr<std::atomic<std::int64_t>[]> masters_;
    std::atomic<std::int64_t> total_edges_{0};
    std::mutex rng_mutex_;
    std::mt19937_64 rng_;
    std::mutex edges_mutex_;
    std::unordered_map<std::uint64_t, std::vector<PartId>> edge_parts_;
};

/// Folds a logical part onto one of `parallelism` sub-operators:
/// key_group = logical % max_parallelism; physical = key_group * parallelism / max_parallelism.
std::uint32_t compute_physical_part(std::uint32_t logical_part, std::uint32_t parallelism,
                                    std::uint32_t max_parallelism);

}  // namespace flowgnn
