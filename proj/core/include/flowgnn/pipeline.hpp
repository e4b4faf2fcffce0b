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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flowgnn/element_store.hpp"
#include "flowgnn/metrics.hpp"
#include "flowgnn/nn.hpp"
#include "flowgnn/partitioner.hpp"
#include "flowgnn/plan.hpp"
#include "flowgnn/window.hpp"

namespace flowgnn {

/// Storage layers an already partitioned event is delivered to. GNN layers are 1..L, the output
/// layer is L+1.
std::vector<std::uint32_t> splitter_route(const GraphEvent& event, const PipelinePlan& plan);

struct EpochLog {
    std::uint32_t round = 0;
    std::uint32_t epoch = 0;
    double loss_sum = 0.0;
    double loss = 0.0;  // loss_sum / batch
    double accuracy = 0.0;
    double grad_norm = 0.0;
    std::int64_t batch = 0;
    std::int64_t skipped = 0;
    /// Summed parameter gradients over all sub-operators, index l-1 for layer l; the last entry is the head.
    std::vector<ParamGrads> grads;
    /// Virtual milliseconds spent per step name.
    std::map<std::string, double> phase_ms;
};

struct TrainingRound {
    std::int64_t total_examples = 0;
    std::int64_t batch = 0;
    std::uint64_t stale_applications = 0;
    double final_loss = 0.0;
    double final_accuracy = 0.0;
    double started_ms = 0.0;
    double finished_ms = 0.0;
};

struct TrainingReport {
    std::vector<TrainingRound> rounds;
    std::vector<EpochLog> epochs;
    std::vector<std::string> warnings;
};

/// Snapshot of one logical part of one storage layer.
struct PartView {
    std::uint32_t layer = 0;
    PartId part = 0;
    std::uint32_t subop = 0;
    const ElementStore* store = nullptr;
    const WindowState* window = nullptr;
};

/// The simulated operator chain: Source -> Partitioner -> Splitter -> GraphStorage x L -> Output,
/// driven by the discrete-event scheduler and the training coordinator.
class Pipeline {
  public:
    explicit Pipeline(PipelinePlan plan);
    ~Pipeline();
    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    const PipelinePlan& plan() const noexcept;
    std::vector<std::uint32_t> layer_parallelism() const;

    /// Appends events to the source; they are released in timestamp order (stable).
    void ingest(std::vector<GraphEvent> events);
    /// Releases at most `count` further source events before the next quiescence; used by the
    /// fixed-size batch driver. A negative count removes the gate.
    void set_release_gate(std::int64_t count);
    /// Drives the scheduler until every head is quiet and the source is exhausted or gated.
    RunMetrics run_until_quiescent();
    /// Starts a training round at the next quiescence regardless of votes.
    void request_training();
    RunMetrics collect_metrics() const;

    /// Final-layer embeddings held by output masters, ascending by id.
    std::map<VertexId, Tensor> embeddings() const;
    std::vector<PartView> parts(std::uint32_t layer) const;
    /// Model replica held by one sub-operator of `layer` (L+1 is the prediction head).
    const LayerModel& model(std::uint32_t layer, std::uint32_t subop = 0) const;
    /// Overwrites the model on every sub-operator of `layer`; only valid before ingestion.
    void set_model(std::uint32_t layer, const LayerModel& model);
    const PartitionerState& partitioner() const;
    const TrainingReport& training_report() const;

    bool queues_empty() const;
    bool timers_pending() const;
    bool windows_empty() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace flowgnn
