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

// Reference batch computations written with plain loops, independent of the engine's kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "flowgnn/graph.hpp"
#include "flowgnn/nn.hpp"

namespace flowgnn::oracle {

using Vec = std::vector<double>;

struct Snapshot {
    std::map<VertexId, Vec> features;
    std::multimap<VertexId, VertexId> in_edges;  // dst -> src
    std::map<VertexId, std::int64_t> labels;
    std::map<VertexId, bool> train;
};

inline Vec to_vec(const Tensor& t) { return Vec(t.storage().begin(), t.storage().end()); }

/// Replays events in timestamp order (stable) onto a plain multigraph.
inline Snapshot replay(std::vector<GraphEvent> events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const GraphEvent& a, const GraphEvent& b) { return a.timestamp < b.timestamp; });
    Snapshot s;
    for (const auto& ev : events) {
        if (const auto* e = std::get_if<EdgeElement>(&ev.element)) {
            if (ev.op == EventOp::Create) {
                s.in_edges.emplace(e->dst.id, e->src.id);
            } else if (ev.op == EventOp::Delete) {
                auto [lo, hi] = s.in_edges.equal_range(e->dst.id);
                for (auto it = lo; it != hi; ++it) {
                    if (it->second == e->src.id) {
                        s.in_edges.erase(it);
                        break;
                    }
                }
            }
        } else if (const auto* f = std::get_if<FeatureElement>(&ev.element)) {
            if (f->name == FeatureName::Embedding) s.features[f->owner.id] = to_vec(f->value);
            if (f->name == FeatureName::Label) s.labels[f->owner.id] = f->label;
            if (f->name == FeatureName::TrainMask) s.train[f->owner.id] = f->label != 0;
        }
    }
    return s;
}

struct DenseLayer {
    std::vector<Vec> weight;  // rows
    Vec bias;
    bool relu = false;
};

inline DenseLayer dense_of(const LayerModel& m) {
    DenseLayer d;
    for (std::size_t r = 0; r < m.weight.rows(); ++r) {
        Vec row(m.weight.cols());
        for (std::size_t c = 0; c < m.weight.cols(); ++c) row[c] = m.weight.at(r, c);
        d.weight.push_back(std::move(row));
    }
    d.bias = to_vec(m.bias);
    d.relu = m.activation == Activation::ReLU;
    return d;
}

inline Vec apply_dense(const DenseLayer& d, const Vec& x) {
    Vec y(d.bias);
    for (std::size_t r = 0; r < y.size(); ++r) {
        for (std::size_t c = 0; c < x.size(); ++c) y[r] += d.weight[r][c] * x[c];
        if (d.relu && y[r] < 0.0) y[r] = 0.0;
    }
    return y;
}

/// One mean-aggregation GraphSAGE layer over every vertex holding a representation.
inline std::map<VertexId, Vec> sage_layer(const std::map<VertexId, Vec>& h,
                                          const std::multimap<VertexId, VertexId>& in_edges, const DenseLayer& d) {
    std::map<VertexId, Vec> out;
    for (const auto& [v, hv] : h) {
        Vec agg(hv.size(), 0.0);
        std::size_t n = 0;
        auto [lo, hi] = in_edges.equal_range(v);
        for (auto it = lo; it != hi; ++it) {
            auto hu = h.find(it->second);
            if (hu == h.end()) continue;
            for (std::size_t i = 0; i < agg.size(); ++i) agg[i] += hu->second[i];
            ++n;
        }
        if (n > 0)
            for (auto& a : agg) a /= static_cast<double>(n);
        Vec x(hv);
        x.insert(x.end(), agg.begin(), agg.end());
        out[v] = apply_dense(d, x);
    }
    return out;
}

inline std::map<VertexId, Vec> batch_forward(const Snapshot& s, const std::vector<DenseLayer>& layers) {
    std::map<VertexId, Vec> h = s.features;
    for (const auto& d : layers) h = sage_layer(h, s.in_edges, d);
    return h;
}

/// max over vertices of max|a - b| / max(max|b|, 1e-12); +inf when the vertex sets differ.
inline double max_relative_error(const std::map<VertexId, Vec>& a, const std::map<VertexId, Vec>& b) {
    if (a.size() != b.size()) return INFINITY;
    double worst = 0.0;
    for (const auto& [v, bv] : b) {
        auto it = a.find(v);
        if (it == a.end() || it->second.size() != bv.size()) return INFINITY;
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < bv.size(); ++i) {
            num = std::max(num, std::fabs(it->second[i] - bv[i]));
            den = std::max(den, std::fabs(bv[i]));
        }
        worst = std::max(worst, num / std::max(den, 1e-12));
    }
    return worst;
}

}  // namespace flowgnn::oracle
