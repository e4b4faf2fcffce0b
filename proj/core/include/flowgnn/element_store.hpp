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
#include <optional>
#include <unordered_map>
#include <vector>

#include "flowgnn/graph.hpp"

namespace flowgnn {

enum class ReplicaState { Master, Replica };

struct VertexRecord {
    VertexId id = 0;
    PartId master_part = kUnsetPart;
    ReplicaState state = ReplicaState::Replica;
    std::optional<Tensor> feature;
    // Halo features below live only on the master copy.
    std::optional<AggregatorState> aggregator;
    std::optional<std::int64_t> label;
    bool train = true;
    std::vector<VertexId> out_edges;  // multigraph: duplicates are kept
    std::vector<VertexId> in_edges;
    std::vector<PartId> replica_parts;  // sorted, master only

    bool is_master() const noexcept { return state == ReplicaState::Master; }
};

enum class ChangeKind { VertexAdded, VertexRemoved, EdgeAdded, EdgeRemoved, FeatureCreated, FeatureUpdated, LabelSet };

/// Local change notification emitted by ElementStore::apply for plugins to react to.
struct Change {
    ChangeKind kind;
    VertexId vertex = 0;
    VertexId other = 0;  // edge destination
    Tensor old_value;    // FeatureUpdated only
};

/// Storage of one logical part: vertex table, in/out adjacency and feature tables.
class ElementStore {
  public:
    explicit ElementStore(PartId part) : part_(part) {}

    PartId part() const noexcept { return part_; }

    /// Applies one external or forwarded event and reports what changed. Duplicate vertex creation is a no-op;
    /// deletes of unknown elements are logged and ignored.
    std::vector<Change> apply(const GraphEvent& event);

    const VertexRecord* find(VertexId id) const;
    VertexRecord* find(VertexId id);
    const VertexRecord& at(VertexId id) const;
    VertexRecord& at(VertexId id);
    bool contains(VertexId id) const { return find(id) != nullptr; }

    /// Creates the vertex if missing; returns the record and whether it was created.
    std::pair<VertexRecord*, bool> ensure_vertex(VertexId id, PartId master);
    void add_edge(VertexId src, VertexId dst);
    bool remove_edge(VertexId src, VertexId dst);
    /// Sets the raw feature and returns the resulting notification (created or updated with old value).
    Change set_feature(VertexId id, Tensor value);
    /// Records `part` as a replica holder. Returns false if it was already known.
    bool register_replica(VertexId id, PartId part);

    std::size_t vertex_count() const noexcept { return records_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    std::vector<VertexId> vertex_ids() const;  // ascending
    template <typename F>
    void for_each_vertex(F&& fn) const {
        for (const auto& r : records_) fn(r);
    }
    template <typename F>
    void for_each_vertex(F&& fn) {
        for (auto& r : records_) fn(r);
    }

    /// Number of external events applied so far.
    std::uint64_t applied_events() const noexcept { return applied_; }

  private:
    PartId part_;
    std::vector<VertexRecord> records_;
    std::unordered_map<VertexId, std::uint32_t> index_;
    std::size_t edge_count_ = 0;
    std::uint64_t applied_ = 0;
};

}  // namespace flowgnn
