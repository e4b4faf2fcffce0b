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

#include "flowgnn/graph.hpp"

#include "flowgnn/errors.hpp"

namespace flowgnn {

FeatureName parse_feature_name(std::string_view name) {
    if (name == "f") return FeatureName::Embedding;
    if (name == "agg") return FeatureName::Aggregator;
    if (name == "label") return FeatureName::Label;
    if (name == "train_mask") return FeatureName::TrainMask;
    throw ArgumentError("unknown feature name '" + std::string(name) + "'");
}

std::string_view feature_name_string(FeatureName name) noexcept {
    switch (name) {
        case FeatureName::Embedding: return "f";
        case FeatureName::Aggregator: return "agg";
        case FeatureName::Label: return "label";
        case FeatureName::TrainMask: return "train_mask";
    }
    return "?";
}

GraphEvent GraphEvent::vertex(EventOp op, VertexId id, EventTime ts) {
    return GraphEvent{op, VertexElement{id, kUnsetPart}, ts, kUnsetPart};
}

GraphEvent GraphEvent::edge(EventOp op, VertexId src, VertexId dst, EventTime ts) {
    return GraphEvent{op, EdgeElement{{src, kUnsetPart}, {dst, kUnsetPart}}, ts, kUnsetPart};
}

GraphEvent GraphEvent::feature(EventOp op, VertexId owner, Tensor value, EventTime ts) {
    return GraphEvent{op, FeatureElement{{owner, kUnsetPart}, FeatureName::Embedding, std::move(value), 0}, ts,
                      kUnsetPart};
}

GraphEvent GraphEvent::label(VertexId owner, std::int64_t label, EventTime ts) {
    return GraphEvent{EventOp::Create, FeatureElement{{owner, kUnsetPart}, FeatureName::Label, Tensor{}, label}, ts,
                      kUnsetPart};
}

GraphEvent GraphEvent::train_mask(VertexId owner, bool train, EventTime ts) {
    return GraphEvent{EventOp::Create, FeatureElement{{owner, kUnsetPart}, FeatureName::TrainMask, Tensor{}, train},
                      ts, kUnsetPart};
}

AggregatorState::AggregatorState(Tensor sum, std::int64_t count) : sum_(std::move(sum)), count_(count) {
    if (count_ < 0) throw StateError("aggregator count must be non-negative");
}

AggregatorState& AggregatorState::reduce(const Tensor& msg, std::int64_t count) {
    if (count < 1) throw ArgumentError("reduce: count must be positive");
    if (sum_.empty()) {
        sum_ = msg;
    } else {
        sum_ += msg;
    }
    count_ += count;
    return *this;
}

AggregatorState& AggregatorState::replace(const Tensor& msg_new, const Tensor& msg_old) {
    if (count_ == 0) throw StateError("replace on an empty aggregator");
    if (!msg_new.same_shape(msg_old) || !msg_new.same_shape(sum_)) {
        throw DimensionError("replace: message shape " + msg_new.shape_string() + " vs " + sum_.shape_string());
    }
    for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += msg_new[i] - msg_old[i];
    return *this;
}

AggregatorState& AggregatorState::remove(const Tensor& msg, std::int64_t count) {
    if (count < 1) throw ArgumentError("remove: count must be positive");
    if (count_ < count) {
        throw StateError("remove underflow: count " + std::to_string(count_) + " < " + std::to_string(count));
    }
    sum_ -= msg;
    count_ -= count;
    if (count_ == 0) sum_.fill(0.0);
    return *this;
}

void AggregatorState::reset() noexcept {
    sum_.fill(0.0);
    count_ = 0;
}

Tensor AggregatorState::value() const {
    if (count_ <= 1) return sum_;
    Tensor out = sum_;
    const double n = static_cast<double>(count_);
    for (double& v : out.values()) v /= n;
    return out;
}

}  // namespace flowgnn
