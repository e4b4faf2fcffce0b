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

#include "flowgnn/envelope.hpp"

namespace flowgnn {

std::string_view rmi_method_name(RmiMethod m) noexcept {
    switch (m) {
        case RmiMethod::Reduce: return "reduce";
        case RmiMethod::Replace: return "replace";
        case RmiMethod::Remove: return "remove";
        case RmiMethod::SyncRequest: return "sync_request";
        case RmiMethod::SyncFeature: return "sync";
        case RmiMethod::BatchReduce: return "batch_reduce";
        case RmiMethod::EmbeddingGrad: return "grad_embedding";
        case RmiMethod::AggregatorGrad: return "grad_aggregator";
        case RmiMethod::ModelParams: return "model_params";
    }
    return "unknown";
}

std::string_view train_command_name(TrainCommand c) noexcept {
    switch (c) {
        case TrainCommand::Freeze: return "freeze";
        case TrainCommand::ReportSizes: return "report_sizes";
        case TrainCommand::OutputBackprop: return "output_backprop";
        case TrainCommand::BackpropPhase1: return "backprop_phase1";
        case TrainCommand::BackpropPhase2: return "backprop_phase2";
        case TrainCommand::ModelSync: return "model_sync";
        case TrainCommand::AggregateReset: return "aggregate_reset";
        case TrainCommand::AggregateReduce: return "aggregate_reduce";
        case TrainCommand::Update: return "update";
        case TrainCommand::Evaluate: return "evaluate";
        case TrainCommand::Stop: return "stop";
    }
    return "unknown";
}

std::size_t Envelope::logical_bytes() const noexcept {
    constexpr std::size_t kHeader = 32;
    std::size_t elems = 0;
    if (const auto* ev = std::get_if<GraphEvent>(&payload)) {
        if (const auto* f = std::get_if<FeatureElement>(&ev->element)) elems = f->value.size();
    } else if (const auto* rmi = std::get_if<RmiCall>(&payload)) {
        elems = rmi->a.size() + rmi->b.size();
    } else if (const auto* sig = std::get_if<ControlSignal>(&payload)) {
        elems = sig->values.size();
    }
    return 8 * elems + kHeader;
}

}  // namespace flowgnn
