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

#include "flowgnn/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "flowgnn/errors.hpp"

namespace flowgnn {

GraphShape parse_graph_shape(std::string_view name) {
    if (name == "er") return GraphShape::ErdosRenyi;
    if (name == "powerlaw") return GraphShape::PowerLaw;
    if (name == "hub") return GraphShape::HubHeavy;
    if (name == "two-cluster") return GraphShape::TwoCluster;
    throw ConfigError("unknown graph shape '" + std::string(name) + "' (expected er, powerlaw, hub or two-cluster)");
}

std::string_view graph_shape_name(GraphShape s) noexcept {
    switch (s) {
        case GraphShape::ErdosRenyi: return "er";
        case GraphShape::PowerLaw: return "powerlaw";
        case GraphShape::HubHeavy: return "hub";
        case GraphShape::TwoCluster: return "two-cluster";
    }
    return "er";
}

std::vector<GraphEvent> generate_trace(const TraceOptions& o) {
    if (o.vertices < 2) throw ArgumentError("a trace needs at least two vertices");
    if (o.edges_per_ms <= 0.0) throw ArgumentError("edges_per_ms must be positive");
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<VertexId> uniform(0, static_cast<VertexId>(o.vertices - 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.5);

    auto cluster = [](VertexId v) { return static_cast<std::int64_t>(v % 2); };
    std::vector<GraphEvent> events;
    for (VertexId v = 0; v < o.vertices; ++v) {
        std::vector<double> f(o.feature_dim);
        if (o.shape == GraphShape::TwoCluster) {
            const double centre = cluster(v) == 0 ? -1.0 : 1.0;
            for (auto& x : f) x = centre + noise(rng);
        } else {
            for (auto& x : f) x = 2.0 * unit(rng) - 1.0;
        }
        events.push_back(GraphEvent::feature(EventOp::Create, v, Tensor::vector(std::move(f)), 0));
    }

    std::vector<double> zipf;
    std::discrete_distribution<VertexId> zipf_pick;
    if (o.shape == GraphShape::PowerLaw) {
        for (std::size_t r = 0; r < o.vertices; ++r) zipf.push_back(1.0 / std::pow(static_cast<double>(r + 1), o.zipf_exponent));
        zipf_pick = std::discrete_distribution<VertexId>(zipf.begin(), zipf.end());
    }
    const VertexId half = static_cast<VertexId>(o.vertices / 2);

    auto time_of = [&](std::size_t i) { return 1 + static_cast<EventTime>(std::floor(static_cast<double>(i) / o.edges_per_ms)); };
    std::vector<std::pair<VertexId, VertexId>> created;
    for (std::size_t i = 0; i < o.edges; ++i) {
        VertexId s = uniform(rng);
        VertexId d = uniform(rng);
        switch (o.shape) {
            case GraphShape::ErdosRenyi:
                break;
            case GraphShape::PowerLaw:
                d = zipf_pick(rng);
                break;
            case GraphShape::HubHeavy:
                if (unit(rng) < o.hub_fraction) {
                    const VertexId other = 1 + static_cast<VertexId>(rng() % (o.vertices - 1));
                    if (unit(rng) < o.hub_out_share) {
                        s = 0;
                        d = other;
                    } else {
                        s = other;
                        d = 0;
                    }
                } else if (s == 0 || d == 0) {
                    if (s == 0) s = 1 + static_cast<VertexId>(rng() % (o.vertices - 1));
                    if (d == 0) d = 1 + static_cast<VertexId>(rng() % (o.vertices - 1));
                }
                break;
            case GraphShape::TwoCluster: {
                const bool inside = unit(rng) < o.intra_cluster;
                const std::int64_t want = inside ? cluster(s) : 1 - cluster(s);
                d = static_cast<VertexId>(2 * (rng() % std::max<VertexId>(half, 1)) + want);
                if (d >= o.vertices) d = static_cast<VertexId>(want);
                break;
            }
        }
        events.push_back(GraphEvent::edge(EventOp::Create, s, d, time_of(i)));
        created.emplace_back(s, d);
    }

    const EventTime end = time_of(o.edges);
    if (o.delete_fraction > 0.0) {
        for (std::size_t i = 0; i < created.size(); ++i) {
            if (unit(rng) >= o.delete_fraction) continue;
            const EventTime born = time_of(i);
            const EventTime at = born + 1 + static_cast<EventTime>(unit(rng) * static_cast<double>(end - born));
            events.push_back(GraphEvent::edge(EventOp::Delete, created[i].first, created[i].second, at));
        }
    }
    if (o.labels) {
        const EventTime at = static_cast<EventTime>(std::round(o.label_position * static_cast<double>(end)));
        for (VertexId v = 0; v < o.vertices; ++v) {
            events.push_back(GraphEvent::train_mask(v, true, at));
            events.push_back(GraphEvent::label(v, cluster(v), at));
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const GraphEvent& a, const GraphEvent& b) { return a.timestamp < b.timestamp; });
    return events;
}

}  // namespace flowgnn
