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

#include "flowgnn/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "flowgnn/errors.hpp"

namespace flowgnn {

double imbalance_factor(std::span<const double> busy) {
    if (busy.empty()) throw ArgumentError("imbalance of an empty set of sub-operators");
    const double total = std::accumulate(busy.begin(), busy.end(), 0.0);
    if (total <= 0.0) return 1.0;
    const double mean = total / static_cast<double>(busy.size());
    return *std::max_element(busy.begin(), busy.end()) / mean;
}

double RunMetrics::layer_imbalance(std::uint32_t layer) const {
    std::vector<double> busy;
    for (const auto& op : operators) {
        if (op.stage == Stage::Storage && op.layer == layer) busy.push_back(op.busy_ms);
    }
    if (busy.empty()) throw ArgumentError("no sub-operators in layer " + std::to_string(layer));
    return imbalance_factor(busy);
}

double RunMetrics::imbalance() const {
    double worst = 1.0;
    for (std::uint32_t l = 1; l <= gnn_layers(); ++l) worst = std::max(worst, layer_imbalance(l));
    return worst;
}

std::uint32_t RunMetrics::gnn_layers() const noexcept {
    return applied_per_layer.empty() ? 0 : static_cast<std::uint32_t>(applied_per_layer.size() - 1);
}

ChannelStats RunMetrics::channel(const std::string& key) const {
    const auto it = channels.find(key);
    return it == channels.end() ? ChannelStats{} : it->second;
}

ChannelStats RunMetrics::aggregator_traffic(std::uint32_t layer) const {
    const std::string prefix = "layer" + std::to_string(layer) + ".";
    ChannelStats s;
    for (const char* kind : {"reduce", "replace", "remove", "batch_reduce"}) s += channel(prefix + kind);
    return s;
}

ChannelStats RunMetrics::iterative_traffic(std::uint32_t layer) const {
    const std::string prefix = "layer" + std::to_string(layer) + ".";
    ChannelStats s = aggregator_traffic(layer);
    for (const char* kind : {"sync_request", "sync", "grad_embedding", "grad_aggregator", "model_params"}) {
        s += channel(prefix + kind);
    }
    return s;
}

std::uint64_t RunMetrics::total_messages() const {
    std::uint64_t n = 0;
    for (const auto& [k, v] : channels) n += v.count;
    return n;
}

}  // namespace flowgnn
