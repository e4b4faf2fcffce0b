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
#include <optional>
#include <unordered_map>
#include <vector>

#include "flowgnn/element_store.hpp"
#include "flowgnn/envelope.hpp"
#include "flowgnn/nn.hpp"
#include "flowgnn/partitioner.hpp"
#include "flowgnn/plan.hpp"
#include "flowgnn/scheduler.hpp"
#include "flowgnn/window.hpp"

namespace flowgnn::detail {

class SourceNode final : public Node {
  public:
    SourceNode(const PipelinePlan& plan, std::uint32_t partitioners) : plan_(plan), partitioners_(partitioners) {}

    void append(std::vector<GraphEvent> events, SimTime not_before);
    void set_gate(std::int64_t count) { gate_ = count; }
    void handle(Envelope&&, NodeContext&) override {}
    std::optional<SimTime> next_emission() const override;
    void emit_next(NodeContext& ctx) override;

    std::uint64_t released() const noexcept { return next_; }
    bool exhausted() const noexcept { return next_ >= events_.size(); }

  private:
    const PipelinePlan& plan_;
    std::uint32_t partitioners_;
    std::vector<GraphEvent> events_;
    std::vector<SimTime> release_;
    std::size_t next_ = 0;
    std::int64_t gate_ = -1;
};

class PartitionerNode final : public Node {
  public:
    PartitionerNode(const PipelinePlan& plan, PartitionerState& state) : plan_(plan), state_(state) {}
    void handle(Envelope&& env, NodeContext& ctx) override;
    std::uint64_t dropped() const noexcept { return dropped_; }

  private:
    const PipelinePlan& plan_;
    PartitionerState& state_;
    std::uint64_t dropped_ = 0;
};

class SplitterNode final : public Node {
  public:
    explicit SplitterNode(const PipelinePlan& plan) : plan_(plan) {}
    void handle(Envelope&& env, NodeContext& ctx) override;
    bool paused() const override { return paused_; }
    void set_paused(bool p) noexcept { paused_ = p; }
    std::uint64_t routed() const noexcept { return routed_; }
    std::uint64_t expected() const noexcept { return expected_; }

  private:
    const PipelinePlan& plan_;
    bool paused_ = false;
    std::uint64_t routed_ = 0;
    std::uint64_t expected_ = 0;
};

struct AggGrad {
    VertexId vertex = 0;
    Tensor grad;
    std::int64_t count = 0;
};

struct PartState {
    explicit PartState(PartId p, const WindowPolicy& w) : store(p), window(w) {}
    ElementStore store;
    WindowState window;
    std::map<VertexId, Tensor> grad_accum;
    std::vector<AggGrad> agg_grads;
    std::map<VertexId, Tensor> input_grads;
};

/// One sub-operator of a storage layer: owns the logical parts folded onto it, runs the inference
/// plugin for GNN layers and the training-phase handlers. Layer num_layers+1 is the output layer.
class StorageNode final : public Node {
  public:
    StorageNode(const PipelinePlan& plan, std::uint32_t layer, std::uint32_t index, std::uint32_t subops,
                LayerModel model, FrequencySketch* sketch);

    void handle(Envelope&& env, NodeContext& ctx) override;
    void on_timer(PartId part, SimTime at, NodeContext& ctx) override;

    bool is_output() const noexcept { return output_; }
    std::uint32_t layer() const noexcept { return layer_; }
    const std::map<PartId, PartState>& parts() const noexcept { return parts_; }
    const LayerModel& model() const noexcept { return model_; }
    void set_model(const LayerModel& m) { model_ = m; }
    const ParamGrads& grads() const noexcept { return grads_; }
    bool training() const noexcept { return training_; }

    std::uint64_t applied_external() const noexcept { return applied_external_; }
    std::uint64_t stale_applications() const noexcept { return stale_; }
    std::uint64_t embeddings_emitted() const noexcept { return emitted_; }
    const std::vector<double>& latencies_ms() const noexcept { return latencies_; }
    const std::vector<std::uint64_t>& buckets() const noexcept { return buckets_; }
    std::uint64_t windowed_reduces() const noexcept { return windowed_reduces_; }
    std::uint64_t max_reduces_per_window() const noexcept { return max_per_window_; }
    SimTime last_work() const noexcept { return last_work_; }

  private:
    PartState& part(PartId p);
    void on_event(const GraphEvent& ev, SimTime origin, NodeContext& ctx);
    void on_change(PartState& ps, const Change& c, SimTime origin, NodeContext& ctx);
    void on_rmi(PartId p, RmiCall&& call, SimTime origin, NodeContext& ctx);
    void on_control(const ControlSignal& sig, NodeContext& ctx);

    bool upd_ready(const VertexRecord& r) const noexcept;
    void ensure_aggregator(VertexRecord& r) const;
    void emit_message(PartState& ps, VertexId src, VertexId dst, SimTime origin, NodeContext& ctx);
    void forward(PartState& ps, VertexRecord& r, SimTime origin, NodeContext& ctx);
    void emit_update(PartState& ps, const VertexRecord& r, SimTime origin, NodeContext& ctx);
    void sync_replicas(PartState& ps, const VertexRecord& r, SimTime origin, NodeContext& ctx);
    void send_rmi(NodeContext& ctx, PartId dest, RmiCall call, SimTime origin) const;
    void reply(NodeContext& ctx, ControlSignal sig) const;

    // training handlers
    void output_backprop(const ControlSignal& sig, NodeContext& ctx, bool train);
    void phase1(NodeContext& ctx);
    void phase2(NodeContext& ctx);
    void model_sync_start(NodeContext& ctx);
    void aggregate_reduce(NodeContext& ctx);
    void update_all(NodeContext& ctx);

    const PipelinePlan& plan_;
    std::uint32_t layer_;
    std::uint32_t index_;
    std::uint32_t subops_;
    bool output_;
    std::size_t in_dim_;
    WindowPolicy window_;
    FrequencySketch* sketch_;
    LayerModel model_;
    ParamGrads grads_;
    std::map<PartId, PartState> parts_;

    bool training_ = false;
    bool voted_ = false;
    std::int64_t new_labels_ = 0;
    std::map<std::uint32_t, std::pair<Tensor, Tensor>> received_params_;

    std::uint64_t applied_external_ = 0;
    std::uint64_t stale_ = 0;
    std::uint64_t emitted_ = 0;
    std::vector<double> latencies_;
    std::vector<std::uint64_t> buckets_;
    std::uint64_t windowed_reduces_ = 0;
    std::uint64_t max_per_window_ = 0;
    struct WindowKey {
        PartId from;
        VertexId target;
        SimTime stamp;
        bool operator==(const WindowKey&) const = default;
    };
    struct WindowKeyHash {
        std::size_t operator()(const WindowKey& k) const noexcept {
            return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(k.from) << 32 | k.target) ^
                                              static_cast<std::uint64_t>(k.stamp) * 0x9E3779B97F4A7C15ull);
        }
    };
    std::unordered_map<WindowKey, std::uint32_t, WindowKeyHash> reduce_audit_;
    SimTime last_work_ = 0;
};

}  // namespace flowgnn::detail
