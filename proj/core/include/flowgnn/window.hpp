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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flowgnn/graph.hpp"
#include "flowgnn/plan.hpp"

namespace flowgnn {

/// Count-min sketch of vertex arrivals with periodic halving, plus a per-vertex exponential moving
/// average of inter-arrival gaps. A vertex whose sketch estimate has decayed to zero is treated as
/// unseen and restarts its average.
///
/// Shared by all sub-operators of a layer; every member function is linearizable.
class FrequencySketch {
  public:
    explicit FrequencySketch(const WindowPolicy& policy);

    void observe(VertexId v, SimTime now);
    std::uint32_t estimate(VertexId v) const;
    /// Mean observed gap in ms, empty for cold vertices.
    std::optional<double> mean_gap_ms(VertexId v) const;
    /// clamp(c * mean_gap, min, max); the configured session gap for cold vertices.
    double session_gap_ms(VertexId v) const;
    std::uint64_t decays() const noexcept { return decays_; }

  private:
    struct Gap {
        SimTime last = 0;
        double ema_ms = 0.0;
        bool has_ema = false;
    };
    std::size_t cell(std::uint32_t row, VertexId v) const noexcept;
    std::uint32_t estimate_locked(VertexId v) const;
    void decay_until(SimTime now);

    WindowPolicy policy_;
    mutable std::mutex mutex_;
    std::vector<std::uint32_t> counters_;  // depth x width
    std::vector<std::uint64_t> row_seeds_;
    SimTime next_decay_;
    std::uint64_t decays_ = 0;
    std::unordered_map<VertexId, Gap> gaps_;
};

/// Eviction time for an element arriving at `now` under `policy`. `current` is the existing
/// entry's eviction time: tumbling keeps it, sessions postpone it.
SimTime eviction_time(const WindowPolicy& policy, std::optional<SimTime> current, SimTime now, double session_gap_ms);
/// Rounds up to the next multiple of the timer coalescing interval.
SimTime coalesce(const WindowPolicy& policy, SimTime t);

struct PendingForward {
    SimTime evict_at = 0;
    SimTime origin = 0;
};

struct PendingReduce {
    SimTime evict_at = 0;
    SimTime origin = 0;
    std::vector<VertexId> sources;  // one entry per delayed edge
};

/// Part-local batches of windowed inference: vertices waiting for a forward and
/// edges (grouped by destination) waiting for a batched reduce.
class WindowState {
  public:
    explicit WindowState(WindowPolicy policy) : policy_(policy) {}

    const WindowPolicy& policy() const noexcept { return policy_; }
    /// Adds or refreshes a vertex; returns its eviction time.
    SimTime add_forward(VertexId v, SimTime now, SimTime origin, FrequencySketch* sketch);
    /// Parks the edge src->dst; returns the destination entry's eviction time.
    SimTime add_reduce(VertexId dst, VertexId src, SimTime now, SimTime origin, FrequencySketch* sketch);
    /// Drops one parked src->dst edge, if any.
    bool remove_reduce_edge(VertexId dst, VertexId src);
    /// True when `v` is an endpoint of any parked edge.
    bool touches(VertexId v) const;

    /// Entries with eviction time <= ts, ascending by vertex id; removed from the batch.
    std::vector<std::pair<VertexId, PendingForward>> take_forward(SimTime ts);
    std::vector<std::pair<VertexId, PendingReduce>> take_reduce(SimTime ts);

    std::size_t forward_size() const noexcept { return forward_.size(); }
    std::size_t reduce_size() const noexcept { return reduce_.size(); }
    bool empty() const noexcept { return forward_.empty() && reduce_.empty(); }
    std::optional<SimTime> forward_eviction(VertexId v) const;
    std::optional<SimTime> reduce_eviction(VertexId dst) const;

  private:
    double gap_for(VertexId v, SimTime now, FrequencySketch* sketch) const;

    WindowPolicy policy_;
    std::map<VertexId, PendingForward> forward_;
    std::map<VertexId, PendingReduce> reduce_;
};

}  // namespace flowgnn
