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

#include "flowgnn/element_store.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "flowgnn/errors.hpp"

namespace flowgnn {

namespace {

bool erase_one(std::vector<VertexId>& list, VertexId value) {
    auto it = std::find(list.rbegin(), list.rend(), value);
    if (it == list.rend()) return false;
    list.erase(std::next(it).base());
    return true;
}

}  // namespace

const VertexRecord* ElementStore::find(VertexId id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &records_[it->second];
}

VertexRecord* ElementStore::find(VertexId id) {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &records_[it->second];
}

const VertexRecord& ElementStore::at(VertexId id) const {
    const VertexRecord* r = find(id);
    if (!r) throw RoutingError("vertex " + std::to_string(id) + " not stored in part " + std::to_string(part_));
    return *r;
}

VertexRecord& ElementStore::at(VertexId id) {
    VertexRecord* r = find(id);
    if (!r) throw RoutingError("vertex " + std::to_string(id) + " not stored in part " + std::to_string(part_));
    return *r;
}

std::pair<VertexRecord*, bool> ElementStore::ensure_vertex(VertexId id, PartId master) {
    if (VertexRecord* r = find(id)) return {r, false};
    if (master == kUnsetPart) throw RoutingError("vertex " + std::to_string(id) + " arrived without a master part");
    VertexRecord rec;
    rec.id = id;
    rec.master_part = master;
    rec.state = master == part_ ? ReplicaState::Master : ReplicaState::Replica;
    index_.emplace(id, static_cast<std::uint32_t>(records_.size()));
    records_.push_back(std::move(rec));
    return {&records_.back(), true};
}

void ElementStore::add_edge(VertexId src, VertexId dst) {
    at(src).out_edges.push_back(dst);
    at(dst).in_edges.push_back(src);
    ++edge_count_;
}

bool ElementStore::remove_edge(VertexId src, VertexId dst) {
    VertexRecord* s = find(src);
    VertexRecord* d = find(dst);
    if (!s || !d) return false;
    if (!erase_one(s->out_edges, dst)) return false;
    erase_one(d->in_edges, src);
    --edge_count_;
    return true;
}

Change ElementStore::set_feature(VertexId id, Tensor value) {
    VertexRecord& r = at(id);
    Change c{ChangeKind::FeatureCreated, id, 0, {}};
    if (r.feature) {
        c.kind = ChangeKind::FeatureUpdated;
        c.old_value = std::move(*r.feature);
    }
    r.feature = std::move(value);
    return c;
}

bool ElementStore::register_replica(VertexId id, PartId part) {
    VertexRecord& r = at(id);
    if (!r.is_master()) throw RoutingError("replica registration at non-master copy of " + std::to_string(id));
    auto it = std::lower_bound(r.replica_parts.begin(), r.replica_parts.end(), part);
    if (it != r.replica_parts.end() && *it == part) return false;
    r.replica_parts.insert(it, part);
    return true;
}

std::vector<VertexId> ElementStore::vertex_ids() const {
    std::vector<VertexId> ids;
    ids.reserve(records_.size());
    for (const auto& r : records_) ids.push_back(r.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<Change> ElementStore::apply(const GraphEvent& event) {
    ++applied_;
    std::vector<Change> changes;
    auto add_vertex = [&](const VertexElement& v) {
        auto [rec, created] = ensure_vertex(v.id, v.master);
        if (created) changes.push_back({ChangeKind::VertexAdded, v.id, 0, {}});
        return rec;
    };

    switch (event.kind()) {
        case ElementKind::Vertex: {
            const auto& v = std::get<VertexElement>(event.element);
            if (event.op == EventOp::Delete) {
                VertexRecord* r = find(v.id);
                if (!r) {
                    spdlog::warn("part {}: delete of unknown vertex {}", part_, v.id);
                    break;
                }
                if (!r->in_edges.empty() || !r->out_edges.empty()) {
                    throw StateError("vertex " + std::to_string(v.id) + " still has incident edges");
                }
                const std::uint32_t idx = index_.at(v.id);
                if (idx + 1 != records_.size()) {
                    records_[idx] = std::move(records_.back());
                    index_[records_[idx].id] = idx;
                }
                records_.pop_back();
                index_.erase(v.id);
                changes.push_back({ChangeKind::VertexRemoved, v.id, 0, {}});
            } else {
                add_vertex(v);
            }
            break;
        }
        case ElementKind::Edge: {
            const auto& e = std::get<EdgeElement>(event.element);
            if (event.op == EventOp::Delete) {
                if (!remove_edge(e.src.id, e.dst.id)) {
                    spdlog::warn("part {}: delete of unknown edge {}->{}", part_, e.src.id, e.dst.id);
                    break;
                }
                changes.push_back({ChangeKind::EdgeRemoved, e.src.id, e.dst.id, {}});
            } else if (event.op == EventOp::Create) {
                add_vertex(e.src);
                add_vertex(e.dst);
                add_edge(e.src.id, e.dst.id);
                changes.push_back({ChangeKind::EdgeAdded, e.src.id, e.dst.id, {}});
            }
            // Edge features are not used by the mean-aggregation model; updates carry nothing to store.
            break;
        }
        case ElementKind::Feature: {
            const auto& f = std::get<FeatureElement>(event.element);
            if (f.name == FeatureName::Aggregator) throw ArgumentError("aggregators are internal features");
            if (event.op == EventOp::Delete) throw ArgumentError("feature deletion is not supported");
            VertexRecord* rec = add_vertex(f.owner);
            if (f.name == FeatureName::Embedding) {
                if (!f.value.all_finite()) throw NumericError("non-finite feature for vertex " + std::to_string(f.owner.id));
                changes.push_back(set_feature(f.owner.id, f.value));
            } else {
                if (!rec->is_master()) {
                    throw RoutingError("halo feature for vertex " + std::to_string(f.owner.id) + " at replica part " +
                                       std::to_string(part_));
                }
                if (f.name == FeatureName::Label) {
                    if (f.label < 0) throw ArgumentError("labels must be non-negative");
                    rec->label = f.label;
                    changes.push_back({ChangeKind::LabelSet, f.owner.id, 0, {}});
                } else {
                    rec->train = f.label != 0;
                }
            }
            break;
        }
    }
    return changes;
}

}  // namespace flowgnn
