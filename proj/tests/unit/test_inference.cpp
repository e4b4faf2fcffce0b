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

#include <map>
#include <set>

#include <gtest/gtest.h>

#include "flowgnn/errors.hpp"
#include "flowgnn/pipeline.hpp"
#include "pipeline_support.hpp"

using namespace flowgnn;
using namespace flowgnn::oracle;

namespace {

GraphEvent feature(VertexId v, std::vector<double> x, EventTime ts) {
    return GraphEvent::feature(EventOp::Create, v, Tensor::vector(std::move(x)), ts);
}

GraphEvent edge(VertexId s, VertexId d, EventTime ts, EventOp op = EventOp::Create) {
    return GraphEvent::edge(op, s, d, ts);
}

std::vector<GraphEvent> four_vertex_graph() {
    return {feature(0, {1, 0, 0, 1}, 0), feature(1, {0, 1, 0, -1}, 0), feature(2, {0, 0, 1, 2}, 0),
            feature(3, {1, 1, 1, 1}, 0), edge(0, 1, 1), edge(0, 2, 2), edge(1, 2, 3), edge(2, 3, 4)};
}

std::set<VertexId> changed(const std::map<VertexId, Vec>& before, const std::map<VertexId, Vec>& after) {
    std::set<VertexId> out;
    for (const auto& [v, x] : after) {
        auto it = before.find(v);
        if (it == before.end() || it->second != x) out.insert(v);
    }
    return out;
}

const WindowKind kModes[] = {WindowKind::Streaming, WindowKind::Tumbling, WindowKind::Session, WindowKind::Adaptive};

}  // namespace

TEST(SplitterRoute, ByEventClass) {
    PipelinePlan plan = small_plan();
    plan.task = TaskKind::NodeClassification;
    EXPECT_EQ(splitter_route(edge(1, 2, 0), plan), (std::vector<std::uint32_t>{1, 2}));
    EXPECT_EQ(splitter_route(GraphEvent::vertex(EventOp::Create, 1, 0), plan), (std::vector<std::uint32_t>{1, 2}));
    EXPECT_EQ(splitter_route(feature(1, {1, 2, 3, 4}, 0), plan), (std::vector<std::uint32_t>{1}));
    EXPECT_EQ(splitter_route(GraphEvent::label(1, 0, 0), plan), (std::vector<std::uint32_t>{3}));
    EXPECT_EQ(splitter_route(GraphEvent::train_mask(1, true, 0), plan), (std::vector<std::uint32_t>{3}));
}

TEST(Pipeline, EmptyRunTerminatesWithoutTraffic) {
    Pipeline p(small_plan());
    const RunMetrics m = p.run_until_quiescent();
    EXPECT_EQ(m.total_messages(), 0u);
    EXPECT_EQ(m.embeddings_emitted, 0u);
    EXPECT_TRUE(p.queues_empty());
    EXPECT_TRUE(p.embeddings().empty());
}

TEST(Pipeline, SingleEdgeCascadesThroughBothLayers) {
    Pipeline p(small_plan());
    p.ingest({feature(0, {1, 2, 3, 4}, 0), feature(1, {4, 3, 2, 1}, 0), edge(0, 1, 1)});
    const RunMetrics m = p.run_until_quiescent();
    EXPECT_GE(m.channel("layer2.forward").count + m.channel("output.forward").count, 2u);
    EXPECT_EQ(p.embeddings().size(), 2u);
    EXPECT_TRUE(p.queues_empty());
    EXPECT_FALSE(p.timers_pending());
}

TEST(Inference, NewEdgeUpdatesExactlyTheTwoHopNeighbourhood) {
    for (auto mode : kModes) {
        Pipeline p(small_plan(1, mode));
        p.ingest(four_vertex_graph());
        p.run_until_quiescent();
        const auto before = embeddings_of(p);
        ASSERT_EQ(before.size(), 4u);
        std::vector<GraphEvent> all = four_vertex_graph();
        all.push_back(edge(3, 0, 100));
        p.ingest({all.back()});
        p.run_until_quiescent();
        const auto after = embeddings_of(p);
        EXPECT_EQ(changed(before, after), (std::set<VertexId>{0, 1, 2})) << window_kind_name(mode);
        EXPECT_LT(oracle_error(p, all), 1e-9);
    }
}

TEST(Inference, EdgeWithoutSourceFeatureIsDeferred) {
    Pipeline p(small_plan());
    p.ingest({feature(1, {1, 1, 1, 1}, 0), edge(0, 1, 1)});
    p.run_until_quiescent();
    auto emb = p.embeddings();
    EXPECT_EQ(emb.count(0), 0u);
    ASSERT_EQ(emb.count(1), 1u);
    std::vector<GraphEvent> all{feature(1, {1, 1, 1, 1}, 0), edge(0, 1, 1)};
    EXPECT_LT(oracle_error(p, all), 1e-12);

    all.push_back(feature(0, {2, 0, 0, 2}, 10));
    p.ingest({all.back()});
    p.run_until_quiescent();
    EXPECT_EQ(p.embeddings().size(), 2u);
    EXPECT_LT(oracle_error(p, all), 1e-12);
    for (std::uint32_t layer = 1; layer <= 2; ++layer) {
        for (const auto& view : p.parts(layer)) {
            if (const VertexRecord* r = view.store->find(1); r && r->is_master()) {
                ASSERT_TRUE(r->aggregator.has_value());
                EXPECT_EQ(r->aggregator->count(), 1) << "layer " << layer;
            }
        }
    }
}

TEST(Inference, OracleEquivalenceAcrossModesAndParallelism) {
    const auto trace = random_trace(3, 40, 250);
    for (auto mode : kModes) {
        for (std::uint32_t par : {1u, 2u, 4u}) {
            Pipeline p(small_plan(par, mode));
            p.ingest(trace);
            const RunMetrics m = p.run_until_quiescent();
            EXPECT_LT(oracle_error(p, trace), 1e-9) << window_kind_name(mode) << " p=" << par;
            EXPECT_TRUE(p.windows_empty());
            EXPECT_TRUE(p.queues_empty());
            EXPECT_FALSE(p.timers_pending());
            EXPECT_EQ(m.applied_applications, m.expected_applications);
            if (mode != WindowKind::Streaming) EXPECT_LE(m.max_reduces_per_window, 1u);
        }
    }
}

TEST(Inference, ThreeLayerModelMatchesOracle) {
    const auto trace = random_trace(8, 30, 150);
    for (auto mode : {WindowKind::Streaming, WindowKind::Tumbling}) {
        Pipeline p(small_plan(2, mode, 3));
        p.ingest(trace);
        p.run_until_quiescent();
        EXPECT_LT(oracle_error(p, trace), 1e-9) << window_kind_name(mode);
    }
}

TEST(Inference, DeletesKeepAggregatorsExact) {
    const auto trace = random_trace(5, 30, 200, 4, 0.3);
    std::size_t deletes = 0;
    for (const auto& ev : trace) deletes += ev.op == EventOp::Delete;
    ASSERT_GT(deletes, 0u);
    for (auto mode : kModes) {
        Pipeline p(small_plan(2, mode));
        p.ingest(trace);
        p.run_until_quiescent();
        EXPECT_LT(oracle_error(p, trace), 1e-9) << window_kind_name(mode);
    }
}

TEST(Inference, AggregatorCountsMatchReadyInDegree) {
    const auto trace = random_trace(11, 50, 300);
    const Snapshot snap = replay(trace);
    Pipeline p(small_plan(4));
    p.ingest(trace);
    p.run_until_quiescent();
    for (const auto& view : p.parts(1)) {
        view.store->for_each_vertex([&](const VertexRecord& r) {
            if (!r.is_master()) return;
            const auto n = static_cast<std::int64_t>(snap.in_edges.count(r.id));
            ASSERT_TRUE(r.aggregator.has_value());
            EXPECT_EQ(r.aggregator->count(), n) << "vertex " << r.id;
        });
    }
}

TEST(Inference, HaloDisciplineAndReplicaConsistency) {
    const auto trace = random_trace(12, 50, 300);
    Pipeline p(small_plan(4));
    p.ingest(trace);
    p.run_until_quiescent();
    for (std::uint32_t layer = 1; layer <= 2; ++layer) {
        std::map<VertexId, Tensor> master_features;
        std::map<VertexId, std::size_t> masters;
        const auto views = p.parts(layer);
        for (const auto& view : views) {
            view.store->for_each_vertex([&](const VertexRecord& r) {
                if (r.is_master()) {
                    ++masters[r.id];
                    if (r.feature) master_features[r.id] = *r.feature;
                    EXPECT_EQ(r.master_part, view.part);
                } else {
                    EXPECT_FALSE(r.aggregator.has_value()) << "aggregator on replica " << r.id;
                    EXPECT_FALSE(r.label.has_value());
                }
            });
        }
        for (const auto& [v, n] : masters) EXPECT_EQ(n, 1u) << "vertex " << v;
        for (const auto& view : views) {
            view.store->for_each_vertex([&](const VertexRecord& r) {
                if (r.is_master() || !r.feature) return;
                ASSERT_TRUE(master_features.count(r.id));
                EXPECT_EQ(*r.feature, master_features.at(r.id)) << "layer " << layer << " vertex " << r.id;
            });
        }
    }
}

TEST(Inference, EachEdgeStoredInExactlyOnePart) {
    const auto trace = random_trace(13, 40, 200);
    Pipeline p(small_plan(2));
    p.ingest(trace);
    p.run_until_quiescent();
    std::size_t stored = 0;
    for (const auto& view : p.parts(1)) stored += view.store->edge_count();
    EXPECT_EQ(stored, replay(trace).in_edges.size());
}

TEST(Inference, RescaleLeavesLogicalPartsUnchanged) {
    const auto trace = random_trace(14, 40, 250);
    auto contents = [&](std::uint32_t par) {
        Pipeline p(small_plan(par));
        p.ingest(trace);
        p.run_until_quiescent();
        std::map<std::pair<std::uint32_t, PartId>, std::map<VertexId, std::pair<std::vector<VertexId>, Vec>>> out;
        for (std::uint32_t layer = 1; layer <= 2; ++layer) {
            for (const auto& view : p.parts(layer)) {
                auto& part = out[{layer, view.part}];
                view.store->for_each_vertex([&](const VertexRecord& r) {
                    auto edges = r.out_edges;
                    std::sort(edges.begin(), edges.end());
                    part[r.id] = {edges, r.feature ? to_vec(*r.feature) : Vec{}};
                });
            }
        }
        return out;
    };
    const auto two = contents(2);
    const auto four = contents(4);
    ASSERT_EQ(two.size(), four.size());
    for (const auto& [key, verts] : two) {
        const auto& other = four.at(key);
        ASSERT_EQ(verts.size(), other.size());
        for (const auto& [v, data] : verts) {
            EXPECT_EQ(data.first, other.at(v).first);
            const Vec& a = data.second;
            const Vec& b = other.at(v).second;
            ASSERT_EQ(a.size(), b.size());
            for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
        }
    }
}

TEST(Inference, ParallelismDoesNotChangeEmbeddings) {
    const auto trace = random_trace(21, 60, 200);
    Pipeline one(small_plan(1));
    Pipeline four(small_plan(4));
    one.ingest(trace);
    four.ingest(trace);
    one.run_until_quiescent();
    four.run_until_quiescent();
    EXPECT_LT(max_relative_error(embeddings_of(four), embeddings_of(one)), 1e-12);
}

TEST(Inference, SequentialRunsAreBitIdentical) {
    const auto trace = random_trace(22, 60, 300);
    auto run = [&] {
        Pipeline p(small_plan(3, WindowKind::Adaptive));
        p.ingest(trace);
        const RunMetrics m = p.run_until_quiescent();
        std::map<std::string, std::uint64_t> counts;
        for (const auto& [k, c] : m.channels) counts[k] = c.count;
        return std::make_tuple(counts, embeddings_of(p), m.virtual_runtime_ms);
    };
    EXPECT_EQ(run(), run());
}

TEST(Inference, ParallelSchedulerMatchesOracle) {
    const auto trace = random_trace(23, 50, 250);
    for (auto mode : {WindowKind::Streaming, WindowKind::Session}) {
        PipelinePlan plan = small_plan(4, mode);
        plan.scheduler = SchedulerMode::Parallel;
        plan.worker_threads = 3;
        Pipeline p(plan);
        p.ingest(trace);
        const RunMetrics m = p.run_until_quiescent();
        EXPECT_LT(oracle_error(p, trace), 1e-9);
        EXPECT_EQ(m.applied_applications, m.expected_applications);
    }
}

TEST(Inference, WindowingCutsReduceTrafficOnHubs) {
    TraceOptions o;
    o.shape = GraphShape::HubHeavy;
    o.vertices = 100;
    o.edges = 1500;
    o.feature_dim = 4;
    o.edges_per_ms = 5;
    const auto trace = generate_trace(o);
    auto reduces = [&](WindowKind mode) {
        PipelinePlan plan = small_plan(2, mode);
        plan.window.window_ms = 20;
        Pipeline p(plan);
        p.ingest(trace);
        const RunMetrics m = p.run_until_quiescent();
        EXPECT_LT(oracle_error(p, trace), 1e-9);
        return m.aggregator_traffic(2).count;
    };
    EXPECT_LT(reduces(WindowKind::Tumbling), reduces(WindowKind::Streaming));
}

TEST(Inference, SetModelRejectsWrongShape) {
    Pipeline p(small_plan());
    EXPECT_THROW(p.set_model(1, LayerModel::create(3, 5, Activation::ReLU, 0.01, 1)), DimensionError);
    const LayerModel m = LayerModel::create(8, 5, Activation::ReLU, 0.01, 99);
    p.set_model(1, m);
    EXPECT_EQ(p.model(1), m);
}

TEST(Metrics, ImbalanceFactor) {
    const std::vector<double> busy{2, 4, 6};
    EXPECT_DOUBLE_EQ(imbalance_factor(busy), 1.5);
    const std::vector<double> idle{0, 0};
    EXPECT_DOUBLE_EQ(imbalance_factor(idle), 1.0);
    EXPECT_THROW(imbalance_factor(std::span<const double>{}), ArgumentError);
}

TEST(Metrics, LogicalBytesProxy) {
    Envelope e;
    e.kind = EnvelopeKind::Rmi;
    RmiCall c;
    c.a = Tensor::zeros(5);
    c.b = Tensor::zeros(3);
    e.payload = c;
    EXPECT_EQ(e.logical_bytes(), 8u * 8u + 32u);
}

TEST(Metrics, NoEventLossAndBusyTimes) {
    const auto trace = random_trace(30, 40, 200);
    Pipeline p(small_plan(2));
    p.ingest(trace);
    const RunMetrics m = p.run_until_quiescent();
    EXPECT_EQ(m.ingested_events, trace.size());
    EXPECT_EQ(m.dropped_events, 0u);
    EXPECT_EQ(m.applied_applications, m.expected_applications);
    EXPECT_GE(m.imbalance(), 1.0);
    EXPECT_GT(m.virtual_runtime_ms, 0.0);
    EXPECT_EQ(m.latencies_ms.size(), m.embeddings_emitted);
    for (double l : m.latencies_ms) EXPECT_GE(l, 0.0);
}
