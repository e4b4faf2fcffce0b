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

#include "flowgnn/reference.hpp"

#include <algorithm>
#include <limits>

namespace flowgnn {

GraphSnapshot snapshot_of(const std::vector<GraphEvent>& input) {
    std::vector<const GraphEvent*> order;
    order.reserve(input.size());
    for (const auto& e : input) order.push_back(&e);
    std::stable_sort(order.begin(), order.end(),
                     [](const GraphEvent* a, const GraphEvent* b) { return a->timestamp < b->timestamp; });
    GraphSnapshot g;
    for (const GraphEvent* ev : order) {
        if (const auto* e = std::get_if<EdgeElement>(&ev->element)) {
            if (ev->op == EventOp::Create) {
                g.in_edges.emplace(e->dst.id, e->src.id);
            } else if (ev->op == EventOp::Delete) {
                auto [lo, hi] = g.in_edges.equal_range(e->dst.id);
                auto it = std::find_if(lo, hi, [&](const auto& kv) { return kv.second == e->src.id; });
                if (it != hi) g.in_edges.erase(it);
            }
        } else if (const auto* f = std::get_if<FeatureElement>(&ev->element)) {
            if (f->name == FeatureName::Embedding) g.features[f->owner.id] = f->value;
        }
    }
    return g;
}

std::map<VertexId, Tensor> batch_forward(const GraphSnapshot& graph, const std::vector<LayerModel>& layers) {
    std::map<VertexId, Tensor> h = graph.features;
    for (const auto& model : layers) {
        std::map<VertexId, Tensor> next;
        for (const auto& [v, hv] : h) {
            AggregatorState agg(hv.size());
            auto [lo, hi] = graph.in_edges.equal_range(v);
            for (auto it = lo; it != hi; ++it) {
                auto hu = h.find(it->second);
                if (hu != h.end()) agg.reduce(hu->second);
            }
            next.emplace(v, dense_forward_concat(model, hv, agg.value()));
        }
        h = std::move(next);
    }
    return h;
}

double max_relative_error(const std::map<VertexId, Tensor>& got, const std::map<VertexId, Tensor>& want) {
    if (got.size() != want.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& [v, w] : want) {
        auto it = got.find(v);
        if (it == got.end() || !it->second.same_shape(w)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, relative_error(it->second, w));
    }
    return worst;
}

}  // namespace flowgnn
