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
#include <string_view>
#include <vector>

#include "flowgnn/graph.hpp"

namespace flowgnn {

enum class GraphShape { ErdosRenyi, PowerLaw, HubHeavy, TwoCluster };

GraphShape parse_graph_shape(std::string_view name);
std::string_view graph_shape_name(GraphShape s) noexcept;

struct TraceOptions {
    GraphShape shape = GraphShape::ErdosRenyi;
    std::size_t vertices = 100;
    std::size_t edges = 1000;
    std::size_t feature_dim = 8;
    std::uint64_t seed = 1;
    /// Edges released per virtual millisecond.
    double edges_per_ms = 1.0;
    /// Zipf exponent of the destination distribution for PowerLaw.
    double zipf_exponent = 1.2;
    /// Share of edges incident to vertex 0 for HubHeavy.
    double hub_fraction = 0.3;
    /// Share of those hub edges leaving vertex 0 rather than entering it.
    double hub_out_share = 0.5;
    /// Probability that a TwoCluster edge stays inside its cluster.
    double intra_cluster = 0.95;
    /// Fraction of edge creates later deleted again (uniformly after their creation).
    double delete_fraction = 0.0;
    /// Emit labels and train masks (TwoCluster: cluster index; otherwise vertex id mod 2).
    bool labels = false;
    /// Position of the label block in the stream as a fraction of the edge timeline.
    double label_position = 1.0;
};

/// Seeded synthetic trace: one feature per vertex at t=0, then edges in timestamp order.
std::vector<GraphEvent> generate_trace(const TraceOptions& options);

}  // namespace flowgnn
