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

#include <cmath>
#include <functional>
#include <utility>

#include "batch_oracle.hpp"

namespace flowgnn::oracle {

inline double cross_entropy(const Vec& logits, std::int64_t label) {
    double hi = logits[0];
    for (double z : logits) hi = std::max(hi, z);
    double s = 0.0;
    for (double z : logits) s += std::exp(z - hi);
    return hi + std::log(s) - logits[static_cast<std::size_t>(label)];
}

/// Mean loss over train-masked, labelled vertices that hold an embedding.
inline double full_loss(const Snapshot& snap, const std::vector<DenseLayer>& layers, const DenseLayer& head) {
    const auto h = batch_forward(snap, layers);
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& [v, label] : snap.labels) {
        auto t = snap.train.find(v);
        if (t != snap.train.end() && !t->second) continue;
        auto it = h.find(v);
        if (it == h.end()) continue;
        total += cross_entropy(apply_dense(head, it->second), label);
        ++n;
    }
    return n == 0 ? 0.0 : total / static_cast<double>(n);
}

/// Central differences over every weight (row-major) and bias entry of one dense layer.
inline std::pair<Vec, Vec> numeric_grads(DenseLayer& target, const std::function<double()>& loss, double eps) {
    auto probe = [&](double& x) {
        const double keep = x;
        x = keep + eps;
        const double up = loss();
        x = keep - eps;
        const double down = loss();
        x = keep;
        return (up - down) / (2 * eps);
    };
    Vec gw;
    for (auto& row : target.weight)
        for (auto& w : row) gw.push_back(probe(w));
    Vec gb;
    for (auto& b : target.bias) gb.push_back(probe(b));
    return {gw, gb};
}

/// max|got - want| / max(max|want|, 1e-12)
inline double rel_error(const Vec& got, const Vec& want) {
    if (got.size() != want.size()) return INFINITY;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        num = std::max(num, std::fabs(got[i] - want[i]));
        den = std::max(den, std::fabs(want[i]));
    }
    return num / std::max(den, 1e-12);
}

}  // namespace flowgnn::oracle
