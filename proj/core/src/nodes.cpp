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

#include "nodes.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "flowgnn/errors.hpp"
#include "flowgnn/pipeline.hpp"

namespace flowgnn::detail {

namespace {

Envelope element_envelope(Stage stage, std::uint32_t layer, PartId part, GraphEvent ev, SimTime origin) {
    Envelope env;
    env.kind = EnvelopeKind::ElementEvent;
    env.direction = Direction::Forward;
    env.stage = stage;
    env.layer = layer;
    env.part = part;
    env.payload = std::move(ev);
    env.origin = origin;
    return env;
}

EventTime event_time(SimTime now) { return now / kNanosPerMilli; }

}  // namespace

void SourceNode::append(std::vector<GraphEvent> events, SimTime not_before) {
    std::stable_sort(events.begin(), events.end(),
                     [](const GraphEvent& a, const GraphEvent& b) { return a.timestamp < b.timestamp; });
    const SimTime pace = plan_.throttle_eps > 0.0 ? static_cast<SimTime>(std::llround(1e9 / plan_.throttle_eps)) : 0;
    std::optional<SimTime> last;
    if (!release_.empty()) last = release_.back();
    for (auto& ev : events) {
        SimTime r = std::max(millis(static_cast<double>(ev.timestamp)), not_before);
        if (last) r = std::max(r, *last + pace);
        last = r;
        release_.push_back(r);
        events_.push_back(std::move(ev));
    }
}

std::optional<SimTime> SourceNode::next_emission() const {
    if (next_ >= events_.size() || gate_ == 0) return std::nullopt;
    return release_[next_];
}

void SourceNode::emit_next(NodeContext& ctx) {
    Envelope env = element_envelope(Stage::Partitioner, 0, kUnsetPart, std::move(events_[next_]), ctx.now());
    env.subop = static_cast<std::uint32_t>(next_ % partitioners_);
    ++next_;
    if (gate_ > 0) --gate_;
    ctx.send(std::move(env));
}

void PartitionerNode::handle(Envelope&& env, NodeContext& ctx) {
    GraphEvent ev = std::get<GraphEvent>(std::move(env.payload));
    switch (ev.kind()) {
        case ElementKind::Edge: {
            auto& e = std::get<EdgeElement>(ev.element);
            if (ev.op == EventOp::Create) {
                ev.logical_part = state_.assign_part(e.src.id, e.dst.id);
                ctx.add_flops(8.0 * plan_.partitions());
            } else if (ev.op == EventOp::Delete) {
                auto p = state_.take_edge(e.src.id, e.dst.id);
                if (!p) {
                    spdlog::warn("partitioner: delete of unknown edge {}->{} dropped", e.src.id, e.dst.id);
                    ++dropped_;
                    return;
                }
                ev.logical_part = *p;
            } else {
                ++dropped_;  // edge attributes are not part of the model
                return;
            }
            e.src.master = *state_.master_of(e.src.id);
            e.dst.master = *state_.master_of(e.dst.id);
            break;
        }
        case ElementKind::Vertex: {
            auto& v = std::get<VertexElement>(ev.element);
            v.master = state_.place_vertex(v.id);
            ev.logical_part = v.master;
            break;
        }
        case ElementKind::Feature: {
            auto& f = std::get<FeatureElement>(ev.element);
            f.owner.master = state_.place_vertex(f.owner.id);
            ev.logical_part = f.owner.master;
            break;
        }
    }
    ctx.send(element_envelope(Stage::Splitter, 0, ev.logical_part, std::move(ev), env.origin));
}

void SplitterNode::handle(Envelope&& env, NodeContext& ctx) {
    const GraphEvent& ev = std::get<GraphEvent>(env.payload);
    const auto layers = splitter_route(ev, plan_);
    ++routed_;
    expected_ += layers.size();
    for (std::uint32_t l : layers) ctx.send(element_envelope(Stage::Storage, l, ev.logical_part, ev, env.origin));
}

StorageNode::StorageNode(const PipelinePlan& plan, std::uint32_t layer, std::uint32_t index, std::uint32_t subops,
                         LayerModel model, FrequencySketch* sketch)
    : plan_(plan),
      layer_(layer),
      index_(index),
      subops_(subops),
      output_(layer == plan.num_layers + 1),
      in_dim_(output_ ? plan.model.embedding_dim : plan.layer_in_dim(layer)),
      window_(output_ ? WindowPolicy{} : plan.window_for(layer)),
      sketch_(sketch),
      model_(std::move(model)),
      grads_(model_.zero_grads()) {}

PartState& StorageNode::part(PartId p) {
    auto it = parts_.find(p);
    if (it == parts_.end()) it = parts_.emplace(p, PartState(p, window_)).first;
    return it->second;
}

bool StorageNode::upd_ready(const VertexRecord& r) const noexcept {
    return !output_ && r.is_master() && r.feature.has_value() && r.aggregator.has_value();
}

void StorageNode::ensure_aggregator(VertexRecord& r) const {
    if (!output_ && r.is_master() && !r.aggregator) r.aggregator = AggregatorState(in_dim_);
}

void StorageNode::handle(Envelope&& env, NodeContext& ctx) {
    last_work_ = ctx.now();
    switch (env.kind) {
        case EnvelopeKind::ElementEvent:
            on_event(std::get<GraphEvent>(env.payload), env.origin, ctx);
            break;
        case EnvelopeKind::Rmi:
            on_rmi(env.part, std::get<RmiCall>(std::move(env.payload)), env.origin, ctx);
            break;
        case EnvelopeKind::Control:
            on_control(std::get<ControlSignal>(env.payload), ctx);
            break;
    }
}

void StorageNode::on_event(const GraphEvent& ev, SimTime origin, NodeContext& ctx) {
    PartState& ps = part(ev.logical_part);
    const bool forwarded = ev.kind() == ElementKind::Feature &&
                           std::get<FeatureElement>(ev.element).name == FeatureName::Embedding && layer_ > 1;
    if (!forwarded) {
        ++applied_external_;
        if (training_) ++stale_;
    }
    if (ev.kind() == ElementKind::Edge && ev.op == EventOp::Delete && window_.windowed()) {
        const auto& e = std::get<EdgeElement>(ev.element);
        if (ps.window.remove_reduce_edge(e.dst.id, e.src.id)) return;
    }
    if (ev.kind() == ElementKind::Vertex && ev.op == EventOp::Delete &&
        ps.window.touches(std::get<VertexElement>(ev.element).id)) {
        throw StateError("vertex " + std::to_string(std::get<VertexElement>(ev.element).id) +
                         " still has incident edges waiting in a window");
    }
    const auto changes = ps.store.apply(ev);
    if (output_ && forwarded && !training_) {
        ++emitted_;
        latencies_.push_back(to_millis(ctx.now() - origin));
        const auto bucket = static_cast<std::size_t>(ctx.now() / millis(static_cast<double>(plan_.throughput_bucket_ms)));
        if (buckets_.size() <= bucket) buckets_.resize(bucket + 1, 0);
        ++buckets_[bucket];
    }
    for (const auto& c : changes) on_change(ps, c, origin, ctx);
}

void StorageNode::on_change(PartState& ps, const Change& c, SimTime origin, NodeContext& ctx) {
    switch (c.kind) {
        case ChangeKind::VertexAdded: {
            if (output_) return;
            VertexRecord& r = ps.store.at(c.vertex);
            if (r.is_master()) {
                ensure_aggregator(r);
            } else {
                RmiCall call;
                call.method = RmiMethod::SyncRequest;
                call.target = r.id;
                call.from_part = ps.store.part();
                send_rmi(ctx, r.master_part, std::move(call), origin);
            }
            return;
        }
        case ChangeKind::VertexRemoved:
            return;
        case ChangeKind::EdgeAdded: {
            if (output_ || training_) return;
            if (ps.store.at(c.vertex).feature) emit_message(ps, c.vertex, c.other, origin, ctx);
            return;
        }
        case ChangeKind::EdgeRemoved: {
            if (output_) return;
            const VertexRecord& src = ps.store.at(c.vertex);
            if (!src.feature) return;
            RmiCall call;
            call.method = RmiMethod::Remove;
            call.target = c.other;
            call.from_part = ps.store.part();
            call.a = *src.feature;
            send_rmi(ctx, ps.store.at(c.other).master_part, std::move(call), origin);
            return;
        }
        case ChangeKind::FeatureCreated:
        case ChangeKind::FeatureUpdated: {
            VertexRecord& r = ps.store.at(c.vertex);
            if (r.is_master()) sync_replicas(ps, r, origin, ctx);
            if (output_ || training_) return;
            if (upd_ready(r)) forward(ps, r, origin, ctx);
            const std::vector<VertexId> outs = ps.store.at(c.vertex).out_edges;
            if (c.kind == ChangeKind::FeatureCreated) {
                for (VertexId w : outs) emit_message(ps, c.vertex, w, origin, ctx);
            } else {
                const Tensor& fresh = *ps.store.at(c.vertex).feature;
                for (VertexId w : outs) {
                    RmiCall call;
                    call.method = RmiMethod::Replace;
                    call.target = w;
                    call.from_part = ps.store.part();
                    call.a = fresh;
                    call.b = c.old_value;
                    send_rmi(ctx, ps.store.at(w).master_part, std::move(call), origin);
                }
            }
            return;
        }
        case ChangeKind::LabelSet: {
            if (!output_) return;
            ++new_labels_;
            const auto trigger = plan_.training.train_trigger_labels;
            if (trigger > 0 && !voted_ && new_labels_ >= trigger) {
                voted_ = true;
                ControlSignal vote;
                vote.kind = ControlKind::Vote;
                reply(ctx, std::move(vote));
            }
            return;
        }
    }
}

void StorageNode::emit_message(PartState& ps, VertexId src, VertexId dst, SimTime origin, NodeContext& ctx) {
    const PartId master = ps.store.at(dst).master_part;
    if (!window_.windowed()) {
        RmiCall call;
        call.method = RmiMethod::Reduce;
        call.target = dst;
        call.from_part = ps.store.part();
        call.a = *ps.store.at(src).feature;
        send_rmi(ctx, master, std::move(call), origin);
        return;
    }
    ps.store.remove_edge(src, dst);
    const SimTime e = ps.window.add_reduce(dst, src, ctx.now(), origin, sketch_);
    ctx.set_timer(ps.store.part(), coalesce(window_, e));
}

void StorageNode::forward(PartState& ps, VertexRecord& r, SimTime origin, NodeContext& ctx) {
    if (!window_.windowed()) {
        emit_update(ps, r, origin, ctx);
        return;
    }
    const SimTime e = ps.window.add_forward(r.id, ctx.now(), origin, sketch_);
    ctx.set_timer(ps.store.part(), coalesce(window_, e));
}

void StorageNode::emit_update(PartState& ps, const VertexRecord& r, SimTime origin, NodeContext& ctx) {
    Tensor y = dense_forward_concat(model_, *r.feature, r.aggregator->value());
    ctx.add_flops(2.0 * static_cast<double>(model_.weight.size()));
    GraphEvent ev = GraphEvent::feature(EventOp::Update, r.id, std::move(y), event_time(ctx.now()));
    std::get<FeatureElement>(ev.element).owner.master = ps.store.part();
    ev.logical_part = ps.store.part();
    ctx.send(element_envelope(Stage::Storage, layer_ + 1, ps.store.part(), std::move(ev), origin));
}

void StorageNode::sync_replicas(PartState& ps, const VertexRecord& r, SimTime origin, NodeContext& ctx) {
    for (PartId rp : r.replica_parts) {
        RmiCall call;
        call.method = RmiMethod::SyncFeature;
        call.target = r.id;
        call.from_part = ps.store.part();
        call.a = *r.feature;
        send_rmi(ctx, rp, std::move(call), origin);
    }
}

void StorageNode::send_rmi(NodeContext& ctx, PartId dest, RmiCall call, SimTime origin) const {
    Envelope env;
    env.kind = EnvelopeKind::Rmi;
    env.direction = Direction::Feedback;
    env.stage = Stage::Storage;
    env.layer = layer_;
    env.part = dest;
    env.payload = std::move(call);
    env.origin = origin;
    ctx.send(std::move(env));
}

void StorageNode::reply(NodeContext& ctx, ControlSignal sig) const {
    sig.sender = index_;
    sig.layer = layer_;
    Envelope env;
    env.kind = EnvelopeKind::Control;
    env.direction = Direction::Feedback;
    env.stage = Stage::Coordinator;
    env.payload = std::move(sig);
    env.origin = ctx.now();
    ctx.send(std::move(env));
}

void StorageNode::on_rmi(PartId p, RmiCall&& call, SimTime origin, NodeContext& ctx) {
    PartState& ps = part(p);
    switch (call.method) {
        case RmiMethod::Reduce:
        case RmiMethod::Replace:
        case RmiMethod::Remove:
        case RmiMethod::BatchReduce: {
            auto [r, created] = ps.store.ensure_vertex(call.target, p);
            if (!r->is_master()) {
                throw RoutingError("aggregator call for vertex " + std::to_string(call.target) + " at replica part " +
                                   std::to_string(p));
            }
            ensure_aggregator(*r);
            ctx.add_flops(static_cast<double>(call.a.size()) * (call.method == RmiMethod::Replace ? 2.0 : 1.0));
            if (call.method == RmiMethod::Replace) {
                r->aggregator->replace(call.a, call.b);
            } else if (call.method == RmiMethod::Remove) {
                r->aggregator->remove(call.a, call.count);
            } else {
                r->aggregator->reduce(call.a, call.count);
            }
            if (call.method == RmiMethod::Reduce && call.batch_stamp >= 0) {
                ++windowed_reduces_;
                const auto n = ++reduce_audit_[WindowKey{call.from_part, call.target, call.batch_stamp}];
                max_per_window_ = std::max<std::uint64_t>(max_per_window_, n);
            }
            if (call.method != RmiMethod::BatchReduce && !training_ && upd_ready(*r)) forward(ps, *r, origin, ctx);
            return;
        }
        case RmiMethod::SyncRequest: {
            auto [r, created] = ps.store.ensure_vertex(call.target, p);
            if (!r->is_master()) {
                throw RoutingError("sync request for vertex " + std::to_string(call.target) + " at replica part " +
                                   std::to_string(p));
            }
            ensure_aggregator(*r);
            ps.store.register_replica(call.target, call.from_part);
            if (r->feature) {
                RmiCall reply_call;
                reply_call.method = RmiMethod::SyncFeature;
                reply_call.target = call.target;
                reply_call.from_part = p;
                reply_call.a = *r->feature;
                send_rmi(ctx, call.from_part, std::move(reply_call), origin);
            }
            return;
        }
        case RmiMethod::SyncFeature: {
            ps.store.ensure_vertex(call.target, call.from_part);
            const Change c = ps.store.set_feature(call.target, std::move(call.a));
            on_change(ps, c, origin, ctx);
            return;
        }
        case RmiMethod::EmbeddingGrad: {
            auto& g = ps.grad_accum[call.target];
            if (g.empty()) {
                g = std::move(call.a);
            } else {
                g += call.a;
            }
            return;
        }
        case RmiMethod::AggregatorGrad:
            ps.agg_grads.push_back(AggGrad{call.target, std::move(call.a), call.count});
            return;
        case RmiMethod::ModelParams: {
            received_params_[call.sender] = {std::move(call.a), std::move(call.b)};
            if (received_params_.size() < subops_) return;
            Tensor w(model_.weight.shape());
            Tensor b(model_.bias.shape());
            for (const auto& [sender, params] : received_params_) {
                w += params.first;
                b += params.second;
            }
            const double inv = 1.0 / static_cast<double>(subops_);
            w *= inv;
            b *= inv;
            model_.weight = std::move(w);
            model_.bias = std::move(b);
            received_params_.clear();
            ControlSignal done;
            done.kind = ControlKind::Done;
            done.command = TrainCommand::ModelSync;
            reply(ctx, std::move(done));
            return;
        }
    }
}

void StorageNode::on_control(const ControlSignal& sig, NodeContext& ctx) {
    if (sig.kind != ControlKind::Command) throw ProtocolError("storage operators only accept commands");
    ControlSignal done;
    done.kind = ControlKind::Done;
    done.command = sig.command;
    switch (sig.command) {
        case TrainCommand::Freeze:
            training_ = true;
            break;
        case TrainCommand::ReportSizes:
            for (const auto& [p, ps] : parts_) {
                std::int64_t n = 0;
                ps.store.for_each_vertex([&](const VertexRecord& r) {
                    if (r.is_master() && r.label && r.train && r.feature) ++n;
                });
                done.values.push_back(p);
                done.values.push_back(n);
            }
            break;
        case TrainCommand::OutputBackprop:
        case TrainCommand::Evaluate:
            output_backprop(sig, ctx, sig.command == TrainCommand::OutputBackprop);
            return;
        case TrainCommand::BackpropPhase1:
            phase1(ctx);
            break;
        case TrainCommand::BackpropPhase2:
            phase2(ctx);
            break;
        case TrainCommand::ModelSync:
            model_sync_start(ctx);
            return;
        case TrainCommand::AggregateReset:
            for (auto& [p, ps] : parts_) {
                ps.store.for_each_vertex([](VertexRecord& r) {
                    if (r.is_master() && r.aggregator) r.aggregator->reset();
                });
            }
            break;
        case TrainCommand::AggregateReduce:
            aggregate_reduce(ctx);
            break;
        case TrainCommand::Update:
            update_all(ctx);
            break;
        case TrainCommand::Stop:
            training_ = false;
            voted_ = false;
            new_labels_ = 0;
            grads_ = model_.zero_grads();
            for (auto& [p, ps] : parts_) {
                ps.grad_accum.clear();
                ps.agg_grads.clear();
            }
            break;
    }
    reply(ctx, std::move(done));
}

void StorageNode::output_backprop(const ControlSignal& sig, NodeContext& ctx, bool train) {
    if (!output_) throw ProtocolError("output backprop sent to a GNN layer");
    std::map<PartId, std::int64_t> quota;
    for (std::size_t i = 0; i + 1 < sig.values.size(); i += 2) {
        quota[static_cast<PartId>(sig.values[i])] = sig.values[i + 1];
    }
    const double scale = sig.batch_total > 0 ? 1.0 / static_cast<double>(sig.batch_total) : 0.0;
    ControlSignal done;
    done.kind = ControlKind::Done;
    done.command = sig.command;
    for (auto& [p, ps] : parts_) {
        auto q = quota.find(p);
        if (q == quota.end() || q->second <= 0) continue;
        std::int64_t taken = 0;
        for (VertexId id : ps.store.vertex_ids()) {
            if (taken >= q->second) break;
            const VertexRecord& r = ps.store.at(id);
            if (!r.is_master() || !r.label || !r.train) continue;
            if (!r.feature) {
                ++done.skipped;
                continue;
            }
            ++taken;
            const Tensor logits = dense_forward(model_, *r.feature);
            const LossResult loss = cross_entropy_loss(logits, static_cast<std::size_t>(*r.label));
            ctx.add_flops(2.0 * static_cast<double>(model_.weight.size()));
            done.loss_sum += loss.loss;
            done.examples += 1;
            if (argmax(logits) == static_cast<std::size_t>(*r.label)) done.correct += 1;
            if (!train) continue;
            DenseGradients dg = dense_backward(model_, *r.feature, loss.logit_grad * scale);
            ctx.add_flops(4.0 * static_cast<double>(model_.weight.size()));
            grads_ += dg.params;
            RmiCall call;
            call.method = RmiMethod::EmbeddingGrad;
            call.target = id;
            call.from_part = p;
            call.a = std::move(dg.input);
            Envelope env;
            env.kind = EnvelopeKind::Rmi;
            env.direction = Direction::Feedback;
            env.stage = Stage::Storage;
            env.layer = layer_ - 1;
            env.part = p;
            env.payload = std::move(call);
            env.origin = ctx.now();
            ctx.send(std::move(env));
        }
    }
    reply(ctx, std::move(done));
}

void StorageNode::phase1(NodeContext& ctx) {
    for (auto& [p, ps] : parts_) {
        for (auto& [v, g] : ps.grad_accum) {
            const VertexRecord* r = ps.store.find(v);
            if (!r || !r->is_master() || !r->feature || !r->aggregator) {
                throw ProtocolError("gradient for vertex " + std::to_string(v) + " without frozen forward state at layer " +
                                    std::to_string(layer_) + " part " + std::to_string(p));
            }
            const Tensor agg = r->aggregator->value();
            DenseGradients dg = dense_backward(model_, concat(*r->feature, agg), g);
            ctx.add_flops(4.0 * static_cast<double>(model_.weight.size()));
            grads_ += dg.params;
            const auto in = dg.input.values();
            Tensor self_grad = Tensor::vector(std::vector<double>(in.begin(), in.begin() + in_dim_));
            Tensor agg_grad = Tensor::vector(std::vector<double>(in.begin() + in_dim_, in.end()));
            if (layer_ > 1) {
                RmiCall call;
                call.method = RmiMethod::EmbeddingGrad;
                call.target = v;
                call.from_part = p;
                call.a = std::move(self_grad);
                Envelope env;
                env.kind = EnvelopeKind::Rmi;
                env.direction = Direction::Feedback;
                env.stage = Stage::Storage;
                env.layer = layer_ - 1;
                env.part = p;
                env.payload = std::move(call);
                env.origin = ctx.now();
                ctx.send(std::move(env));
            } else {
                auto& slot = ps.input_grads[v];
                if (slot.empty()) {
                    slot = std::move(self_grad);
                } else {
                    slot += self_grad;
                }
            }
            const std::int64_t count = r->aggregator->count();
            if (count == 0) continue;
            for (PartId rp : r->replica_parts) {
                RmiCall call;
                call.method = RmiMethod::AggregatorGrad;
                call.target = v;
                call.from_part = p;
                call.count = count;
                call.a = agg_grad;
                call.b = agg;
                send_rmi(ctx, rp, std::move(call), ctx.now());
            }
            ps.agg_grads.push_back(AggGrad{v, std::move(agg_grad), count});
        }
        ps.grad_accum.clear();
    }
}

void StorageNode::phase2(NodeContext& ctx) {
    for (auto& [p, ps] : parts_) {
        std::stable_sort(ps.agg_grads.begin(), ps.agg_grads.end(),
                         [](const AggGrad& a, const AggGrad& b) { return a.vertex < b.vertex; });
        std::map<VertexId, Tensor> message_grads;
        for (const AggGrad& ag : ps.agg_grads) {
            const VertexRecord* r = ps.store.find(ag.vertex);
            if (!r) {
                throw ProtocolError("aggregator gradient for vertex " + std::to_string(ag.vertex) + " unknown at part " +
                                    std::to_string(p));
            }
            const double inv = 1.0 / static_cast<double>(ag.count);
            for (VertexId u : r->in_edges) {
                const VertexRecord& ru = ps.store.at(u);
                if (!ru.feature) continue;
                auto& slot = message_grads[u];
                if (slot.empty()) slot = Tensor::zeros(ag.grad.size());
                slot.axpy(inv, ag.grad);
                ctx.add_flops(static_cast<double>(ag.grad.size()));
            }
        }
        ps.agg_grads.clear();
        for (auto& [u, g] : message_grads) {
            if (layer_ > 1) {
                RmiCall call;
                call.method = RmiMethod::EmbeddingGrad;
                call.target = u;
                call.from_part = p;
                call.a = std::move(g);
                Envelope env;
                env.kind = EnvelopeKind::Rmi;
                env.direction = Direction::Feedback;
                env.stage = Stage::Storage;
                env.layer = layer_ - 1;
                env.part = ps.store.at(u).master_part;
                env.payload = std::move(call);
                env.origin = ctx.now();
                ctx.send(std::move(env));
            } else {
                auto& slot = ps.input_grads[u];
                if (slot.empty()) {
                    slot = std::move(g);
                } else {
                    slot += g;
                }
            }
        }
    }
}

void StorageNode::model_sync_start(NodeContext& ctx) {
    ParamGrads scaled = grads_;
    scaled *= static_cast<double>(subops_);
    optimizer_step(model_, scaled);
    grads_ = model_.zero_grads();
    for (std::uint32_t j = 0; j < subops_; ++j) {
        RmiCall call;
        call.method = RmiMethod::ModelParams;
        call.sender = index_;
        call.a = model_.weight;
        call.b = model_.bias;
        Envelope env;
        env.kind = EnvelopeKind::Rmi;
        env.direction = Direction::Feedback;
        env.stage = Stage::Storage;
        env.layer = layer_;
        env.subop = j;
        env.payload = std::move(call);
        env.origin = ctx.now();
        ctx.send(std::move(env));
    }
}

void StorageNode::aggregate_reduce(NodeContext& ctx) {
    for (auto& [p, ps] : parts_) {
        std::map<VertexId, std::pair<Tensor, std::int64_t>> partial;
        ps.store.for_each_vertex([&](const VertexRecord& r) {
            for (VertexId u : r.in_edges) {
                const VertexRecord& ru = ps.store.at(u);
                if (!ru.feature) continue;
                auto& slot = partial[r.id];
                if (slot.first.empty()) slot.first = Tensor::zeros(in_dim_);
                slot.first += *ru.feature;
                ++slot.second;
            }
        });
        for (auto& [v, sum_count] : partial) {
            ctx.add_flops(static_cast<double>(sum_count.second * static_cast<std::int64_t>(in_dim_)));
            RmiCall call;
            call.method = RmiMethod::BatchReduce;
            call.target = v;
            call.from_part = p;
            call.count = sum_count.second;
            call.a = std::move(sum_count.first);
            send_rmi(ctx, ps.store.at(v).master_part, std::move(call), ctx.now());
        }
    }
}

void StorageNode::update_all(NodeContext& ctx) {
    for (auto& [p, ps] : parts_) {
        for (VertexId id : ps.store.vertex_ids()) {
            const VertexRecord& r = ps.store.at(id);
            if (upd_ready(r)) emit_update(ps, r, ctx.now(), ctx);
        }
    }
}

void StorageNode::on_timer(PartId p, SimTime at, NodeContext& ctx) {
    last_work_ = ctx.now();
    PartState& ps = part(p);
    for (auto& [dst, pending] : ps.window.take_reduce(at)) {
        Tensor sum = Tensor::zeros(in_dim_);
        std::int64_t count = 0;
        for (VertexId src : pending.sources) {
            ps.store.add_edge(src, dst);
            sum += *ps.store.at(src).feature;
            ++count;
        }
        ctx.add_flops(static_cast<double>(count * static_cast<std::int64_t>(in_dim_)));
        RmiCall call;
        call.method = RmiMethod::Reduce;
        call.target = dst;
        call.from_part = p;
        call.count = count;
        call.a = std::move(sum);
        call.batch_stamp = at;
        send_rmi(ctx, ps.store.at(dst).master_part, std::move(call), pending.origin);
    }
    for (auto& [v, pending] : ps.window.take_forward(at)) {
        const VertexRecord* r = ps.store.find(v);
        if (r && upd_ready(*r)) emit_update(ps, *r, pending.origin, ctx);
    }
}

}  // namespace flowgnn::detail
