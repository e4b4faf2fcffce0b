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

#include <benchmark/benchmark.h>

#include <spdlog/spdlog.h>

#include "flowgnn/datagen.hpp"
#include "flowgnn/pipeline.hpp"

using namespace flowgnn;

namespace {

const std::vector<GraphEvent>& hub_trace() {
    static const std::vector<GraphEvent> trace = [] {
        TraceOptions o;
        o.shape = GraphShape::HubHeavy;
        o.vertices = 1000;
        o.edges = 6000;
        o.feature_dim = 8;
        o.edges_per_ms = 10.0;
        return generate_trace(o);
    }();
    return trace;
}

// Wall time per full replay; counters report the virtual-time view of the same run.
void BM_HubReplay(benchmark::State& state) {
    spdlog::set_level(spdlog::level::err);
    PipelinePlan plan;
    plan.base_parallelism = static_cast<std::uint32_t>(state.range(1));
    plan.max_parallelism = 8;
    plan.window.kind = static_cast<WindowKind>(state.range(0));
    plan.model.feature_dim = 8;
    plan.model.hidden_dim = 8;
    plan.model.embedding_dim = 8;
    RunMetrics m;
    for (auto _ : state) {
        Pipeline p(plan);
        p.ingest(hub_trace());
        m = p.run_until_quiescent();
    }
    state.SetLabel(std::string(window_kind_name(plan.window.kind)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(hub_trace().size()));
    state.counters["virtual_ms"] = m.virtual_runtime_ms;
    state.counters["layer2_agg_msgs"] = static_cast<double>(m.aggregator_traffic(2).count);
    state.counters["imbalance"] = m.imbalance();
}
BENCHMARK(BM_HubReplay)
    ->ArgsProduct({{static_cast<int>(WindowKind::Streaming), static_cast<int>(WindowKind::Tumbling),
                    static_cast<int>(WindowKind::Session), static_cast<int>(WindowKind::Adaptive)},
                   {2, 8}})
    ->Unit(benchmark::kMillisecond);

void BM_ExplosionFactor(benchmark::State& state) {
    spdlog::set_level(spdlog::level::err);
    TraceOptions o;
    o.vertices = 300;
    o.edges = 2000;
    o.edges_per_ms = 10.0;
    const auto trace = generate_trace(o);
    PipelinePlan plan;
    plan.num_layers = 3;
    plan.base_parallelism = 2;
    plan.explosion_factor = static_cast<double>(state.range(0));
    plan.max_parallelism = 32;
    plan.model.feature_dim = 8;
    plan.model.hidden_dim = 8;
    plan.model.embedding_dim = 8;
    RunMetrics m;
    for (auto _ : state) {
        Pipeline p(plan);
        p.ingest(trace);
        m = p.run_until_quiescent();
    }
    state.counters["virtual_ms"] = m.virtual_runtime_ms;
}
BENCHMARK(BM_ExplosionFactor)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Training(benchmark::State& state) {
    spdlog::set_level(spdlog::level::err);
    TraceOptions o;
    o.shape = GraphShape::TwoCluster;
    o.vertices = 200;
    o.edges = 1500;
    o.feature_dim = 8;
    o.labels = true;
    const auto trace = generate_trace(o);
    PipelinePlan plan;
    plan.base_parallelism = static_cast<std::uint32_t>(state.range(0));
    plan.max_parallelism = 8;
    plan.task = TaskKind::NodeClassification;
    plan.training.epochs = 5;
    plan.model.feature_dim = 8;
    plan.model.hidden_dim = 16;
    plan.model.embedding_dim = 8;
    for (auto _ : state) {
        Pipeline p(plan);
        p.ingest(trace);
        p.run_until_quiescent();
        p.request_training();
        p.run_until_quiescent();
        benchmark::DoNotOptimize(p.training_report().epochs.size());
    }
}
BENCHMARK(BM_Training)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
