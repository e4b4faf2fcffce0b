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
#include <string>
#include <string_view>
#include <variant>

#include "flowgnn/tensor.hpp"

namespace flowgnn {

using VertexId = std::uint32_t;
using PartId = std::uint32_t;
/// Event time in integer milliseconds.
using EventTime = std::int64_t;

inline constexpr PartId kUnsetPart = std::numeric_limits<PartId>::max();

enum class EventOp { Create, Update, Delete };
enum class ElementKind { Vertex, Edge, Feature };

/// Closed set of feature names. Aggregators, labels and train masks are halo features.
enum class FeatureName { Embedding, Aggregator, Label, TrainMask };

FeatureName parse_feature_name(std::string_view name);
std::string_view feature_name_string(FeatureName name) noexcept;
constexpr bool is_halo(FeatureName name) noexcept { return name != FeatureName::Embedding; }

struct VertexElement {
    VertexId id = 0;
    PartId master = kUnsetPart;
};

struct EdgeElement {
    VertexElement src;
    VertexElement dst;
};

struct FeatureElement {
    VertexElement owner;
    FeatureName name = FeatureName::Embedding;
    Tensor value;           // Embedding
    std::int64_t label = 0;  // Label class index, or TrainMask 0/1
};

using Element = std::variant<VertexElement, EdgeElement, FeatureElement>;

/// The unit of ingestion and of inter-operator element traffic.
struct GraphEvent {
    EventOp op = EventOp::Create;
    Element element;
    EventTime timestamp = 0;
    PartId logical_part = kUnsetPart;

    ElementKind kind() const noexcept { return static_cast<ElementKind>(element.index()); }

    static GraphEvent vertex(EventOp op, VertexId id, EventTime ts);
    static GraphEvent edge(EventOp op, VertexId src, VertexId dst, EventTime ts);
    static GraphEvent feature(EventOp op, VertexId owner, Tensor value, EventTime ts);
    static GraphEvent label(VertexId owner, std::int64_t label, EventTime ts);
    static GraphEvent train_mask(VertexId owner, bool train, EventTime ts);
};

/// Invertible mean synopsis: running sum plus message count.
class AggregatorState {
  public:
    AggregatorState() = default;
    explicit AggregatorState(std::size_t dim) : sum_(Tensor::zeros(dim)) {}
    AggregatorState(Tensor sum, std::int64_t count);

    /// Adds `msg`, the pre-summed contribution of `count` messages.
    AggregatorState& reduce(const Tensor& msg, std::int64_t count = 1);
    AggregatorState& replace(const Tensor& msg_new, const Tensor& msg_old);
    AggregatorState& remove(const Tensor& msg, std::int64_t count = 1);
    /// Back to count 0 with an all-zero sum of the current dimension.
    void reset() noexcept;

    const Tensor& sum() const noexcept { return sum_; }
    std::int64_t count() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    /// sum / max(count, 1)
    Tensor value() const;

  private:
    Tensor sum_;
    std::int64_t count_ = 0;
};

}  // namespace flowgnn
