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

#include <vector>

#include "flowgnn/datagen.hpp"
#include "flowgnn/partitioner.hpp"

using namespace flowgnn;

namespace {

std::vector<std::pair<VertexId, VertexId>> edges_of(GraphShape shape, std::size_t edges) {
    TraceOptions o;
    o.shape = shape;
    o.vertices = edges / 5;
    o.edges = edges;
    o.feature_dim = 1;
    std::vector<std::pair<VertexId, VertexId>> out;
    for (const auto& ev : generate_trace(o))
        if (const auto* e = std::get_if<EdgeElement>(&ev.element)) out.emplace_back(e->src.id, e->dst.id);
    return out;
}

void run(benchmark::State& state, PartitionAlgorithm alg, GraphShape shape) {
    const auto edges = edges_of(shape, 20'000);
    PartitionerConfig c;
    c.algorithm = alg;
    c.num_partitions = static_cast<std::uint32_t>(state.range(0));
    double rf = 0.0;
    for (auto _ : state) {
        PartitionerState s(c);
        for (const auto& [u, v] : edges) benchmark::DoNotOptimize(s.assign_part(u, v));
        rf = s.replication_factor();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(edges.size()));
    state.counters["replication_factor"] = rf;
}

void BM_HdrfPowerLaw(benchmark::State& state) { run(state, PartitionAlgorithm::HDRF, GraphShape::PowerLaw); }
void BM_CldaPowerLaw(benchmark::State& state) { run(state, PartitionAlgorithm::CLDA, GraphShape::PowerLaw); }
void BM_RandomPowerLaw(benchmark::State& state) { run(state, PartitionAlgorithm::Random, GraphShape::PowerLaw); }
void BM_HdrfHub(benchmark::State& state) { run(state, PartitionAlgorithm::HDRF, GraphShape::HubHeavy); }

BENCHMARK(BM_HdrfPowerLaw)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CldaPowerLaw)->Arg(8)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomPowerLaw)->Arg(8)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HdrfHub)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PhysicalMapping(benchmark::State& state) {
    std::uint32_t acc = 0;
    for (auto _ : state)
        for (std::uint32_t k = 0; k < 128; ++k) acc += compute_physical_part(k, 12, 128);
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(BM_PhysicalMapping);

}  // namespace
