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
#include <limits>
#include <string_view>
#include <variant>
#include <vector>

#include "flowgnn/graph.hpp"
#include "flowgnn/plan.hpp"

namespace flowgnn {

enum class EnvelopeKind { ElementEvent, Rmi, Control };
enum class Direction { Forward, Feedback };

/// Operator stages of the chain. Storage covers GNN layers 1..L and the output layer L+1.
enum class Stage : std::uint8_t { Source, Partitioner, Splitter, Storage, Coordinator };

enum class RmiMethod : std::uint8_t {
    Reduce,
    Replace,
    Remove,
    SyncRequest,
    SyncFeature,
    BatchReduce,
    EmbeddingGrad,
    AggregatorGrad,
    ModelParams,
};
std::string_view rmi_method_name(RmiMethod m) noexcept;

/// Remote method call on a vertex's copy in some logical part.
struct RmiCall {
    RmiMethod method = RmiMethod::Reduce;
    VertexId target = 0;
    PartId from_part = kUnsetPart;
    std::int64_t count = 1;
    Tensor a;  // message / new message / feature / gradient / weight
    Tensor b;  // old message / aggregate value / bias
    /// Window eviction time that produced a reduce, -1 when not windowed.
    SimTime batch_stamp = -1;
    std::uint32_t sender = 0;  // sub-operator index for parameter broadcasts
};

enum class ControlKind : std::uint8_t { Vote, Command, Done };

enum class TrainCommand : std::uint8_t {
    Freeze,
    ReportSizes,
    OutputBackprop,
    BackpropPhase1,
    BackpropPhase2,
    ModelSync,
    AggregateReset,
    AggregateReduce,
    Update,
    Evaluate,
    Stop,
};
std::string_view train_command_name(TrainCommand c) noexcept;

struct ControlSignal {
    ControlKind kind = ControlKind::Command;
    TrainCommand command = TrainCommand::Freeze;
    std::uint32_t layer = 0;
    std::uint32_t sender = 0;
    std::int64_t batch_total = 0;
    std::vector<std::int64_t> values;  // per-part quotas (commands) or per-part sizes (replies)
    double loss_sum = 0.0;
    std::int64_t correct = 0;
    std::int64_t examples = 0;
    std::int64_t skipped = 0;
};

inline constexpr std::uint32_t kByPart = std::numeric_limits<std::uint32_t>::max();

struct Envelope {
    EnvelopeKind kind = EnvelopeKind::ElementEvent;
    Direction direction = Direction::Forward;
    Stage stage = Stage::Storage;
    std::uint32_t layer = 0;        // storage layer for Stage::Storage
    PartId part = kUnsetPart;       // destination logical part
    std::uint32_t subop = kByPart;  // explicit sub-operator index, overrides part routing
    std::variant<GraphEvent, RmiCall, ControlSignal> payload;
    /// Ingestion time of the source event this envelope descends from.
    SimTime origin = 0;

    /// Proxy byte volume: 8 bytes per tensor element plus a fixed 32-byte header.
    std::size_t logical_bytes() const noexcept;
};

}  // namespace flowgnn
