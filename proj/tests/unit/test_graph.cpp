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

#include <algorithm>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "flowgnn/element_store.hpp"
#include "flowgnn/errors.hpp"
#include "flowgnn/graph.hpp"

using namespace flowgnn;

namespace {

GraphEvent edge_at(VertexId s, VertexId d, PartId ms, PartId md, EventOp op = EventOp::Create) {
    GraphEvent e = GraphEvent::edge(op, s, d, 0);
    auto& el = std::get<EdgeElement>(e.element);
    el.src.master = ms;
    el.dst.master = md;
    return e;
}

GraphEvent vertex_at(VertexId v, PartId m, EventOp op = EventOp::Create) {
    GraphEvent e = GraphEvent::vertex(op, v, 0);
    std::get<VertexElement>(e.element).master = m;
    return e;
}

void expect_near(const Tensor& a, const Tensor& b, double tol) {
    ASSERT_TRUE(a.same_shape(b)) << a.shape_string() << " vs " << b.shape_string();
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "entry " << i;
}

}  // namespace

TEST(Aggregator, ReduceSingle) {
    AggregatorState s(2);
    s.reduce(Tensor::vector({1, 2}));
    EXPECT_EQ(s.count(), 1);
    EXPECT_EQ(s.value(), Tensor::vector({1, 2}));
}

TEST(Aggregator, ReduceMean) {
    AggregatorState s(Tensor::vector({1, 2}), 1);
    s.reduce(Tensor::vector({3, 0}));
    EXPECT_EQ(s.value(), Tensor::vector({2, 1}));
}

TEST(Aggregator, ReducePartialSum) {
    AggregatorState s(2);
    s.reduce(Tensor::vector({6, 6}), 3);
    EXPECT_EQ(s.count(), 3);
    EXPECT_EQ(s.value(), Tensor::vector({2, 2}));
}

TEST(Aggregator, Replace) {
    AggregatorState s(Tensor::vector({4, 4}), 2);
    s.replace(Tensor::vector({3, 3}), Tensor::vector({1, 2}));
    EXPECT_EQ(s.sum(), Tensor::vector({6, 5}));
    EXPECT_EQ(s.value(), Tensor::vector({3, 2.5}));
    const Tensor m = Tensor::vector({0.25, -7});
    s.replace(m, m);
    EXPECT_EQ(s.sum(), Tensor::vector({6, 5}));
    EXPECT_EQ(s.count(), 2);
}

TEST(Aggregator, ReplaceSequenceEquivalence) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-1, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const Tensor a = Tensor::vector({d(rng), d(rng), d(rng)});
        const Tensor b = Tensor::vector({d(rng), d(rng), d(rng)});
        const Tensor b2 = Tensor::vector({d(rng), d(rng), d(rng)});
        AggregatorState x(3);
        x.reduce(a).reduce(b).replace(b2, b);
        AggregatorState y(3);
        y.reduce(a).reduce(b2);
        expect_near(x.value(), y.value(), 1e-12);
        EXPECT_EQ(x.count(), y.count());
    }
}

TEST(Aggregator, RemoveInverts) {
    AggregatorState s(Tensor::vector({2, 2}), 1);
    s.remove(Tensor::vector({2, 2}));
    EXPECT_TRUE(s.empty());
    EXPECT_EQ(s.sum(), Tensor::vector({0, 0}));
    EXPECT_EQ(s.value(), Tensor::vector({0, 0}));
}

TEST(Aggregator, Errors) {
    AggregatorState s(2);
    EXPECT_THROW(s.replace(Tensor::vector({1, 1}), Tensor::vector({1, 1})), StateError);
    EXPECT_THROW(s.remove(Tensor::vector({1, 1})), StateError);
    EXPECT_THROW(s.reduce(Tensor::vector({1, 2, 3})), DimensionError);
    s.reduce(Tensor::vector({1, 1}));
    EXPECT_THROW(s.remove(Tensor::vector({1, 1}), 2), StateError);
}

TEST(AggregatorProperty, InterleavingsMatchMultisetMean) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> d(-10, 10);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 1 + rng() % 5;
        AggregatorState s(dim);
        std::vector<Tensor> live;
        const int ops = 1 + static_cast<int>(rng() % 100);
        for (int i = 0; i < ops; ++i) {
            const int choice = static_cast<int>(rng() % 3);
            if (choice == 0 || live.empty()) {
                std::vector<double> v(dim);
                for (auto& x : v) x = d(rng);
                live.push_back(Tensor::vector(v));
                s.reduce(live.back());
            } else if (choice == 1) {
                const std::size_t k = rng() % live.size();
                s.remove(live[k]);
                live.erase(live.begin() + static_cast<std::ptrdiff_t>(k));
            } else {
                const std::size_t k = rng() % live.size();
                std::vector<double> v(dim);
                for (auto& x : v) x = d(rng);
                Tensor fresh = Tensor::vector(v);
                s.replace(fresh, live[k]);
                live[k] = fresh;
            }
        }
        std::vector<double> mean(dim, 0.0);
        for (const auto& m : live)
            for (std::size_t j = 0; j < dim; ++j) mean[j] += m[j];
        for (auto& x : mean) x /= static_cast<double>(std::max<std::size_t>(live.size(), 1));
        EXPECT_EQ(s.count(), static_cast<std::int64_t>(live.size()));
        expect_near(s.value(), Tensor::vector(mean), 1e-9);
    }
}

TEST(AggregatorProperty, OrderIndependent) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(-1, 1);
    std::vector<Tensor> msgs;
    for (int i = 0; i < 100; ++i) msgs.push_back(Tensor::vector({d(rng), d(rng)}));
    AggregatorState ref(2);
    for (const auto& m : msgs) ref.reduce(m);
    for (int perm = 0; perm < 20; ++perm) {
        std::shuffle(msgs.begin(), msgs.end(), rng);
        AggregatorState s(2);
        for (const auto& m : msgs) s.reduce(m);
        expect_near(s.value(), ref.value(), 1e-9);
    }
}

TEST(FeatureNames, ClosedSet) {
    EXPECT_EQ(parse_feature_name("f"), FeatureName::Embedding);
    EXPECT_EQ(parse_feature_name("agg"), FeatureName::Aggregator);
    EXPECT_EQ(parse_feature_name("label"), FeatureName::Label);
    EXPECT_EQ(parse_feature_name("train_mask"), FeatureName::TrainMask);
    EXPECT_THROW(parse_feature_name("colour"), ArgumentError);
    EXPECT_FALSE(is_halo(FeatureName::Embedding));
    EXPECT_TRUE(is_halo(FeatureName::Aggregator));
}

TEST(ElementStore, EdgeCreateUpdatesBothLists) {
    ElementStore s(0);
    s.apply(vertex_at(1, 0));
    s.apply(vertex_at(2, 0));
    const auto changes = s.apply(edge_at(1, 2, 0, 0));
    ASSERT_EQ(changes.size(), 1u);
    EXPECT_EQ(changes[0].kind, ChangeKind::EdgeAdded);
    EXPECT_EQ(s.at(1).out_edges, std::vector<VertexId>{2});
    EXPECT_EQ(s.at(2).in_edges, std::vector<VertexId>{1});
    EXPECT_EQ(s.edge_count(), 1u);
}

TEST(ElementStore, DuplicateVertexCreateIsNoOp) {
    ElementStore s(0);
    EXPECT_EQ(s.apply(vertex_at(1, 0)).size(), 1u);
    EXPECT_TRUE(s.apply(vertex_at(1, 0)).empty());
    EXPECT_EQ(s.vertex_count(), 1u);
}

TEST(ElementStore, MasterAndReplicaState) {
    ElementStore s(3);
    s.apply(edge_at(1, 2, 3, 5));
    EXPECT_TRUE(s.at(1).is_master());
    EXPECT_FALSE(s.at(2).is_master());
    EXPECT_EQ(s.at(2).master_part, 5u);
    EXPECT_TRUE(s.register_replica(1, 4));
    EXPECT_FALSE(s.register_replica(1, 4));
    EXPECT_THROW(s.register_replica(2, 4), RoutingError);
}

TEST(ElementStore, MissingDeletesAreIgnored) {
    ElementStore s(0);
    s.apply(edge_at(1, 2, 0, 0));
    EXPECT_TRUE(s.apply(edge_at(2, 1, 0, 0, EventOp::Delete)).empty());
    EXPECT_TRUE(s.apply(vertex_at(9, 0, EventOp::Delete)).empty());
    EXPECT_EQ(s.edge_count(), 1u);
}

TEST(ElementStore, VertexDeleteRequiresNoEdges) {
    ElementStore s(0);
    s.apply(edge_at(1, 2, 0, 0));
    EXPECT_THROW(s.apply(vertex_at(1, 0, EventOp::Delete)), StateError);
    s.apply(edge_at(1, 2, 0, 0, EventOp::Delete));
    const auto c = s.apply(vertex_at(1, 0, EventOp::Delete));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].kind, ChangeKind::VertexRemoved);
    EXPECT_FALSE(s.contains(1));
    EXPECT_TRUE(s.contains(2));
}

TEST(ElementStore, FeatureNotifications) {
    ElementStore s(0);
    s.apply(vertex_at(1, 0));
    GraphEvent f = GraphEvent::feature(EventOp::Create, 1, Tensor::vector({1, 2}), 0);
    std::get<FeatureElement>(f.element).owner.master = 0;
    auto c = s.apply(f);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].kind, ChangeKind::FeatureCreated);
    std::get<FeatureElement>(f.element).value = Tensor::vector({3, 4});
    c = s.apply(f);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].kind, ChangeKind::FeatureUpdated);
    EXPECT_EQ(c[0].old_value, Tensor::vector({1, 2}));
    EXPECT_EQ(*s.at(1).feature, Tensor::vector({3, 4}));
}

TEST(ElementStore, HaloFeaturesOnlyAtMaster) {
    ElementStore s(0);
    s.apply(edge_at(1, 2, 0, 7));
    GraphEvent l = GraphEvent::label(2, 1, 0);
    std::get<FeatureElement>(l.element).owner.master = 7;
    EXPECT_THROW(s.apply(l), RoutingError);
    GraphEvent ok = GraphEvent::label(1, 1, 0);
    std::get<FeatureElement>(ok.element).owner.master = 0;
    s.apply(ok);
    EXPECT_EQ(s.at(1).label, 1);
    GraphEvent agg = GraphEvent::feature(EventOp::Create, 1, Tensor::vector({1}), 0);
    auto& fe = std::get<FeatureElement>(agg.element);
    fe.owner.master = 0;
    fe.name = FeatureName::Aggregator;
    EXPECT_THROW(s.apply(agg), ArgumentError);
}

TEST(ElementStore, ReplayMatchesBatchAdjacency) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        ElementStore s(0);
        std::multimap<VertexId, VertexId> out;
        std::vector<std::pair<VertexId, VertexId>> live;
        for (int i = 0; i < 50; ++i) {
            if (!live.empty() && rng() % 5 == 0) {
                const auto k = rng() % live.size();
                const auto [a, b] = live[k];
                live.erase(live.begin() + static_cast<std::ptrdiff_t>(k));
                s.apply(edge_at(a, b, 0, 0, EventOp::Delete));
                continue;
            }
            const VertexId a = static_cast<VertexId>(rng() % 10);
            const VertexId b = static_cast<VertexId>(rng() % 10);
            live.emplace_back(a, b);
            s.apply(edge_at(a, b, 0, 0));
        }
        std::map<VertexId, std::vector<VertexId>> want_out;
        std::map<VertexId, std::vector<VertexId>> want_in;
        for (const auto& [a, b] : live) {
            want_out[a].push_back(b);
            want_in[b].push_back(a);
        }
        EXPECT_EQ(s.edge_count(), live.size());
        s.for_each_vertex([&](const VertexRecord& r) {
            auto o = r.out_edges;
            auto in = r.in_edges;
            std::sort(o.begin(), o.end());
            std::sort(in.begin(), in.end());
            auto wo = want_out[r.id];
            auto wi = want_in[r.id];
            std::sort(wo.begin(), wo.end());
            std::sort(wi.begin(), wi.end());
            EXPECT_EQ(o, wo) << "seed " << seed << " vertex " << r.id;
            EXPECT_EQ(in, wi) << "seed " << seed << " vertex " << r.id;
        });
    }
}

TEST(ElementStore, MultigraphKeepsDuplicates) {
    ElementStore s(0);
    s.apply(edge_at(1, 2, 0, 0));
    s.apply(edge_at(1, 2, 0, 0));
    EXPECT_EQ(s.at(2).in_edges.size(), 2u);
    s.apply(edge_at(1, 2, 0, 0, EventOp::Delete));
    EXPECT_EQ(s.at(2).in_edges.size(), 1u);
}
