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

#include <map>
#include <vector>

#include "flowgnn/graph.hpp"
#include "flowgnn/nn.hpp"

namespace flowgnn {

/// Final state of a replayed event stream: raw features and the in-edge multiset.
struct GraphSnapshot {
    std::map<VertexId, Tensor> features;
    std::multimap<VertexId, VertexId> in_edges;  // dst -> src
};

GraphSnapshot snapshot_of(const std::vector<GraphEvent>& events);

/// Full-graph mean-aggregation forward pass through `layers`; vertices without an input feature
/// carry no representation and send no messages.
std::map<VertexId, Tensor> batch_forward(const GraphSnapshot& graph, const std::vector<LayerModel>& layers);

/// Largest per-vertex normwise relative error; infinite when the vertex sets differ.
double max_relative_error(const std::map<VertexId, Tensor>& got, const std::map<VertexId, Tensor>& want);

}  // namespace flowgnn
