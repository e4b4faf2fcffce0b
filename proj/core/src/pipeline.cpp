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

#include "flowgnn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <spdlog/spdlog.h>

#include "flowgnn/errors.hpp"
#include "flowgnn/scheduler.hpp"
#include "nodes.hpp"

namespace flowgnn {

using detail::PartitionerNode;
using detail::SourceNode;
using detail::SplitterNode;
using detail::StorageNode;

std::vector<std::uint32_t> splitter_route(const GraphEvent& event, const PipelinePlan& plan) {
    std::vector<std::uint32_t> layers;
    switch (event.kind()) {
        case ElementKind::Vertex:
        case ElementKind::Edge:
            for (std::uint32_t l = 1; l <= plan.num_layers; ++l) layers.push_back(l);
            break;
        case ElementKind::Feature: {
            const auto name = std::get<FeatureElement>(event.element).name;
            if (name == FeatureName::Embedding) {
                layers.push_back(1);
            } else if (name == FeatureName::Label || name == FeatureName::TrainMask) {
                layers.push_back(plan.num_layers + 1);
            } else {
                throw RoutingError("aggregator events cannot be ingested");
            }
            break;
        }
    }
    return layers;
}

namespace {

// Channel kinds: element, forward, control, then one per RMI method.
constexpr std::size_t kKindElement = 0;
constexpr std::size_t kKindForward = 1;
constexpr std::size_t kKindControl = 2;
constexpr std::size_t kRmiKinds = 9;
constexpr std::size_t kKinds = 3 + kRmiKinds;

std::string kind_name(std::size_t k) {
    if (k == kKindElement) return "element";
    if (k == kKindForward) return "forward";
    if (k == kKindControl) return "control";
    return std::string(rmi_method_name(static_cast<RmiMethod>(k - 3)));
}

}  // namespace

struct Pipeline::Impl {
    enum class Phase { Inference, Flushing, Training };
    struct Step {
        TrainCommand command;
        std::uint32_t layer;  // 0 = every storage layer
        std::uint32_t epoch;
    };

    PipelinePlan plan;
    std::vector<std::uint32_t> par;  // storage layers 1..L+1
    std::unique_ptr<PartitionerState> pstate;
    std::vector<std::unique_ptr<FrequencySketch>> sketches;
    std::unique_ptr<Scheduler> sched;
    SourceNode* source = nullptr;
    std::uint32_t source_idx = 0;
    std::vector<PartitionerNode*> partitioners;
    std::vector<std::uint32_t> partitioner_idx;
    SplitterNode* splitter = nullptr;
    std::uint32_t splitter_idx = 0;
    std::vector<std::vector<StorageNode*>> storage;
    std::vector<std::vector<std::uint32_t>> storage_idx;
    std::vector<std::vector<std::uint32_t>> route_table;
    std::vector<ChannelStats> channel_stats;

    Phase phase = Phase::Inference;
    bool forced = false;
    std::set<std::uint32_t> votes;
    std::vector<Step> steps;
    std::size_t step_index = 0;
    SimTime step_started = 0;
    std::size_t expected_replies = 0;
    std::vector<ControlSignal> replies;
    std::vector<std::int64_t> quota_values;
    std::int64_t batch = 0;
    TrainingRound round;
    std::uint64_t stale_at_start = 0;
    EpochLog epoch;
    TrainingReport report;

    explicit Impl(PipelinePlan p);
    std::uint32_t route(const Envelope& env) const;
    void observe(std::uint32_t src, const Envelope& env);
    void on_coordinator(Envelope&& env);
    bool on_quiescent(SimTime now);
    void begin_round(SimTime now);
    void issue_step(SimTime now);
    void finish_step(SimTime now);
    void end_round(SimTime now);
    std::uint64_t stale_total() const;
    std::uint32_t gnn_layers() const noexcept { return plan.num_layers; }
};

Pipeline::Impl::Impl(PipelinePlan p) : plan(std::move(p)) {
    plan.partitioner.num_partitions = plan.partitions();
    plan.validate();
    par = plan.layer_parallelism();
    par.push_back(plan.output_subops());
    pstate = std::make_unique<PartitionerState>(plan.partitioner);
    sched = std::make_unique<Scheduler>(plan);
    const std::uint32_t L = plan.num_layers;

    auto src = std::make_unique<SourceNode>(plan, plan.partitioner_parallelism);
    source = src.get();
    source_idx = sched->add_node(std::move(src), NodeInfo{"source", Stage::Source, 0, 0, true});
    for (std::uint32_t i = 0; i < plan.partitioner_parallelism; ++i) {
        auto node = std::make_unique<PartitionerNode>(plan, *pstate);
        partitioners.push_back(node.get());
        partitioner_idx.push_back(
            sched->add_node(std::move(node), NodeInfo{"partitioner[" + std::to_string(i) + "]", Stage::Partitioner, 0, i, true}));
    }
    auto spl = std::make_unique<SplitterNode>(plan);
    splitter = spl.get();
    splitter_idx = sched->add_node(std::move(spl), NodeInfo{"splitter", Stage::Splitter, 0, 0, true});

    storage.resize(L + 1);
    storage_idx.resize(L + 1);
    route_table.resize(L + 1);
    for (std::uint32_t l = 1; l <= L + 1; ++l) {
        const bool output = l == L + 1;
        FrequencySketch* sketch = nullptr;
        if (!output) {
            sketches.push_back(std::make_unique<FrequencySketch>(plan.window_for(l)));
            sketch = sketches.back().get();
        }
        const LayerModel model =
            output ? LayerModel::create(plan.model.embedding_dim, plan.model.num_classes, Activation::Identity,
                                        plan.model.learning_rate, plan.model.seed + 1009)
                   : LayerModel::create(2 * plan.layer_in_dim(l), plan.layer_out_dim(l),
                                        l == L ? Activation::Identity : Activation::ReLU, plan.model.learning_rate,
                                        plan.model.seed + l);
        for (std::uint32_t j = 0; j < par[l - 1]; ++j) {
            auto node = std::make_unique<StorageNode>(plan, l, j, par[l - 1], model, sketch);
            storage[l - 1].push_back(node.get());
            const std::string name = (output ? std::string("output") : "layer" + std::to_string(l)) + "[" +
                                     std::to_string(j) + "]";
            storage_idx[l - 1].push_back(sched->add_node(std::move(node), NodeInfo{name, Stage::Storage, l, j, false}));
        }
        route_table[l - 1].resize(plan.partitions());
        for (std::uint32_t part = 0; part < plan.partitions(); ++part) {
            route_table[l - 1][part] =
                storage_idx[l - 1][compute_physical_part(part, par[l - 1], plan.max_parallelism)];
        }
    }

    sched->set_forward_targets(source_idx, partitioner_idx);
    for (std::uint32_t idx : partitioner_idx) sched->set_forward_targets(idx, {splitter_idx});
    std::vector<std::uint32_t> all_storage;
    for (const auto& layer : storage_idx) all_storage.insert(all_storage.end(), layer.begin(), layer.end());
    sched->set_forward_targets(splitter_idx, all_storage);
    for (std::uint32_t l = 1; l <= L; ++l) {
        for (std::uint32_t idx : storage_idx[l - 1]) sched->set_forward_targets(idx, storage_idx[l]);
    }
    sched->set_splitter(splitter_idx);
    sched->set_router([this](const Envelope& env) { return route(env); });
    sched->set_observer([this](std::uint32_t s, std::uint32_t, const Envelope& env) { observe(s, env); });
    sched->set_coordinator_inbox([this](Envelope&& env, SimTime) { on_coordinator(std::move(env)); });
    channel_stats.assign((L + 4) * kKinds, ChannelStats{});
}

std::uint32_t Pipeline::Impl::route(const Envelope& env) const {
    switch (env.stage) {
        case Stage::Source:
            return source_idx;
        case Stage::Partitioner:
            return partitioner_idx[(env.subop == kByPart ? 0 : env.subop) % partitioner_idx.size()];
        case Stage::Splitter:
            return splitter_idx;
        case Stage::Coordinator:
            return Scheduler::kCoordinator;
        case Stage::Storage: {
            if (env.layer < 1 || env.layer > plan.num_layers + 1) {
                throw RoutingError("envelope for unknown storage layer " + std::to_string(env.layer));
            }
            const auto& layer = storage_idx[env.layer - 1];
            if (env.subop != kByPart) {
                if (env.subop >= layer.size()) throw RoutingError("sub-operator index out of range");
                return layer[env.subop];
            }
            if (env.part >= plan.partitions()) {
                throw RoutingError("logical part " + std::to_string(env.part) + " out of range");
            }
            return route_table[env.layer - 1][env.part];
        }
    }
    throw RoutingError("unroutable envelope");
}

void Pipeline::Impl::observe(std::uint32_t src, const Envelope& env) {
    std::size_t dest = 0;
    switch (env.stage) {
        case Stage::Source:
        case Stage::Partitioner: dest = 0; break;
        case Stage::Splitter: dest = 1; break;
        case Stage::Storage: dest = 1 + env.layer; break;
        case Stage::Coordinator: dest = plan.num_layers + 3; break;
    }
    std::size_t kind = kKindControl;
    if (env.kind == EnvelopeKind::ElementEvent) {
        const bool from_storage = src != Scheduler::kCoordinator && sched->info(src).stage == Stage::Storage;
        kind = from_storage ? kKindForward : kKindElement;
    } else if (env.kind == EnvelopeKind::Rmi) {
        kind = 3 + static_cast<std::size_t>(std::get<RmiCall>(env.payload).method);
    }
    const std::uint64_t bytes = env.logical_bytes();
    auto& st = channel_stats[dest * kKinds + kind];
    ++st.count;
    st.bytes += bytes;
    const std::uint32_t dst = route(env);
    if (dst != src) {
        ++st.remote_count;
        st.remote_bytes += bytes;
    }
}

std::uint64_t Pipeline::Impl::stale_total() const {
    std::uint64_t n = 0;
    for (const auto& layer : storage)
        for (const auto* node : layer) n += node->stale_applications();
    return n;
}

void Pipeline::Impl::on_coordinator(Envelope&& env) {
    auto& sig = std::get<ControlSignal>(env.payload);
    if (sig.kind == ControlKind::Vote) {
        votes.insert(sig.sender);
        if (phase == Phase::Inference && 2 * votes.size() > par.back()) {
            phase = Phase::Flushing;
            splitter->set_paused(true);
            round = TrainingRound{};
            round.started_ms = to_millis(sched->now());
            spdlog::info("training vote passed ({} of {} output sub-operators); flushing", votes.size(), par.back());
        }
        return;
    }
    if (sig.kind == ControlKind::Done) {
        replies.push_back(std::move(sig));
        return;
    }
    throw ProtocolError("coordinator received a command");
}

bool Pipeline::Impl::on_quiescent(SimTime now) {
    switch (phase) {
        case Phase::Inference:
            if (!forced) return true;
            forced = false;
            splitter->set_paused(true);
            round = TrainingRound{};
            round.started_ms = to_millis(now);
            begin_round(now);
            return false;
        case Phase::Flushing:
            begin_round(now);
            return false;
        case Phase::Training:
            finish_step(now);
            if (phase == Phase::Training) issue_step(now);
            return false;
    }
    return true;
}

void Pipeline::Impl::begin_round(SimTime now) {
    phase = Phase::Training;
    stale_at_start = stale_total();
    const std::uint32_t L = plan.num_layers;
    steps.clear();
    steps.push_back({TrainCommand::Freeze, 0, 0});
    steps.push_back({TrainCommand::ReportSizes, L + 1, 0});
    for (std::uint32_t e = 0; e < plan.training.epochs; ++e) {
        steps.push_back({TrainCommand::OutputBackprop, L + 1, e});
        for (std::uint32_t l = L; l >= 1; --l) {
            steps.push_back({TrainCommand::BackpropPhase1, l, e});
            steps.push_back({TrainCommand::BackpropPhase2, l, e});
        }
        steps.push_back({TrainCommand::ModelSync, L + 1, e});
        for (std::uint32_t l = 1; l <= L; ++l) {
            steps.push_back({TrainCommand::ModelSync, l, e});
            steps.push_back({TrainCommand::AggregateReset, l, e});
            steps.push_back({TrainCommand::AggregateReduce, l, e});
            steps.push_back({TrainCommand::Update, l, e});
        }
    }
    steps.push_back({TrainCommand::Evaluate, L + 1, plan.training.epochs});
    steps.push_back({TrainCommand::Stop, 0, plan.training.epochs});
    step_index = 0;
    issue_step(now);
}

void Pipeline::Impl::issue_step(SimTime now) {
    const Step& step = steps[step_index];
    const std::uint32_t L = plan.num_layers;
    if (step.command == TrainCommand::OutputBackprop && step.layer == L + 1) {
        epoch = EpochLog{};
        epoch.round = static_cast<std::uint32_t>(report.rounds.size());
        epoch.epoch = step.epoch;
        epoch.batch = batch;
        epoch.grads.resize(L + 1);
    }
    if (step.command == TrainCommand::ModelSync) {
        ParamGrads sum = storage[step.layer - 1][0]->model().zero_grads();
        for (const auto* node : storage[step.layer - 1]) sum += node->grads();
        epoch.grad_norm = std::sqrt(epoch.grad_norm * epoch.grad_norm + sum.squared_norm());
        epoch.grads[step.layer - 1] = std::move(sum);
    }
    replies.clear();
    expected_replies = 0;
    step_started = now;
    for (std::uint32_t l = 1; l <= L + 1; ++l) {
        if (step.layer != 0 && step.layer != l) continue;
        for (std::uint32_t j = 0; j < par[l - 1]; ++j) {
            ControlSignal sig;
            sig.kind = ControlKind::Command;
            sig.command = step.command;
            sig.layer = l;
            if (step.command == TrainCommand::OutputBackprop || step.command == TrainCommand::Evaluate) {
                sig.values = quota_values;
                sig.batch_total = batch;
            }
            Envelope env;
            env.kind = EnvelopeKind::Control;
            env.direction = Direction::Feedback;
            env.stage = Stage::Storage;
            env.layer = l;
            env.subop = j;
            env.payload = std::move(sig);
            env.origin = now;
            sched->inject(std::move(env));
            ++expected_replies;
        }
    }
}

void Pipeline::Impl::finish_step(SimTime now) {
    const Step step = steps[step_index];
    if (replies.size() != expected_replies) {
        throw ProtocolError("barrier for " + std::string(train_command_name(step.command)) + " got " +
                            std::to_string(replies.size()) + " of " + std::to_string(expected_replies) + " replies");
    }
    std::string name(train_command_name(step.command));
    if (step.layer != 0) name += "." + std::to_string(step.layer);
    epoch.phase_ms[name] += to_millis(now - step_started);

    switch (step.command) {
        case TrainCommand::ReportSizes: {
            std::map<PartId, std::int64_t> sizes;
            for (const auto& r : replies)
                for (std::size_t i = 0; i + 1 < r.values.size(); i += 2) sizes[static_cast<PartId>(r.values[i])] += r.values[i + 1];
            std::int64_t total = 0;
            for (const auto& [p, n] : sizes) total += n;
            batch = plan.training.batch_cap > 0 ? std::min(plan.training.batch_cap, total) : total;
            round.total_examples = total;
            round.batch = batch;
            quota_values.clear();
            std::map<PartId, std::int64_t> quota;
            if (batch == total) {
                quota = sizes;
            } else if (total > 0) {
                std::vector<std::pair<double, PartId>> remainders;
                std::int64_t assigned = 0;
                for (const auto& [p, n] : sizes) {
                    const double exact = static_cast<double>(batch) * static_cast<double>(n) / static_cast<double>(total);
                    const auto base = static_cast<std::int64_t>(std::floor(exact));
                    quota[p] = base;
                    assigned += base;
                    remainders.emplace_back(exact - static_cast<double>(base), p);
                }
                std::stable_sort(remainders.begin(), remainders.end(),
                                 [](const auto& a, const auto& b) { return a.first > b.first; });
                for (std::size_t i = 0; assigned < batch && i < remainders.size(); ++i) {
                    if (quota[remainders[i].second] < sizes[remainders[i].second]) {
                        ++quota[remainders[i].second];
                        ++assigned;
                    }
                }
            }
            for (const auto& [p, q] : quota) {
                quota_values.push_back(p);
                quota_values.push_back(q);
            }
            if (batch == 0) {
                const std::string msg = "training triggered but no labelled vertex has an embedding; skipping round";
                spdlog::warn(msg);
                report.warnings.push_back(msg);
                step_index = steps.size() - 1;  // jump to Stop
                return;
            }
            break;
        }
        case TrainCommand::OutputBackprop:
        case TrainCommand::Evaluate: {
            double loss = 0.0;
            std::int64_t correct = 0;
            std::int64_t examples = 0;
            std::int64_t skipped = 0;
            for (const auto& r : replies) {
                loss += r.loss_sum;
                correct += r.correct;
                examples += r.examples;
                skipped += r.skipped;
            }
            const double n = examples > 0 ? static_cast<double>(examples) : 1.0;
            if (step.command == TrainCommand::OutputBackprop) {
                epoch.loss_sum = loss;
                epoch.loss = loss / n;
                epoch.accuracy = static_cast<double>(correct) / n;
                epoch.skipped = skipped;
            } else {
                round.final_loss = loss / n;
                round.final_accuracy = static_cast<double>(correct) / n;
            }
            break;
        }
        case TrainCommand::Update:
            if (step.layer == plan.num_layers) {
                spdlog::info(R"({{"round":{},"epoch":{},"loss_sum":{:.9g},"loss":{:.9g},"accuracy":{:.6f},"grad_norm":{:.9g}}})",
                             epoch.round, epoch.epoch, epoch.loss_sum, epoch.loss, epoch.accuracy, epoch.grad_norm);
                report.epochs.push_back(epoch);
            }
            break;
        case TrainCommand::Stop:
            end_round(now);
            return;
        default:
            break;
    }
    ++step_index;
}

void Pipeline::Impl::end_round(SimTime now) {
    round.stale_applications = stale_total() - stale_at_start;
    round.finished_ms = to_millis(now);
    report.rounds.push_back(round);
    phase = Phase::Inference;
    votes.clear();
    splitter->set_paused(false);
    spdlog::info("training round {} finished; streaming resumed", report.rounds.size());
}

Pipeline::Pipeline(PipelinePlan plan) : impl_(std::make_unique<Impl>(std::move(plan))) {}
Pipeline::~Pipeline() = default;

const PipelinePlan& Pipeline::plan() const noexcept { return impl_->plan; }

std::vector<std::uint32_t> Pipeline::layer_parallelism() const { return impl_->plan.layer_parallelism(); }

void Pipeline::ingest(std::vector<GraphEvent> events) { impl_->source->append(std::move(events), impl_->sched->now()); }

void Pipeline::request_training() { impl_->forced = true; }

void Pipeline::set_release_gate(std::int64_t count) { impl_->source->set_gate(count); }

RunMetrics Pipeline::run_until_quiescent() {
    impl_->sched->run([this](SimTime now) { return impl_->on_quiescent(now); });
    return collect_metrics();
}

RunMetrics Pipeline::collect_metrics() const {
    const Impl& m = *impl_;
    RunMetrics out;
    const std::uint32_t L = m.plan.num_layers;
    SimTime runtime = 0;
    for (std::uint32_t i = 0; i < m.sched->node_count(); ++i) {
        const auto& info = m.sched->info(i);
        const auto& st = m.sched->stats(i);
        SubOperatorMetrics om;
        om.name = info.name;
        om.stage = info.stage;
        om.layer = info.layer;
        om.index = info.index;
        om.busy_ms = st.busy_ns / 1e6;
        om.handled = st.handled;
        om.timers_fired = st.timers_fired;
        om.blocked_windows = st.blocked_windows;
        om.max_inbox = st.max_inbox;
        out.operators.push_back(std::move(om));
        if (info.stage != Stage::Source) runtime = std::max(runtime, st.last_finish);
    }
    for (std::size_t dest = 0; dest < L + 4; ++dest) {
        std::string dname;
        if (dest == 0) dname = "partitioner";
        else if (dest == 1) dname = "splitter";
        else if (dest == L + 2) dname = "output";
        else if (dest == L + 3) dname = "coordinator";
        else dname = "layer" + std::to_string(dest - 1);
        for (std::size_t k = 0; k < kKinds; ++k) {
            const auto& st = m.channel_stats[dest * kKinds + k];
            if (st.count == 0) continue;
            out.channels[dname + "." + kind_name(k)] = st;
        }
    }
    out.bucket_ms = m.plan.throughput_bucket_ms;
    out.applied_per_layer.assign(L + 1, 0);
    for (std::uint32_t l = 1; l <= L + 1; ++l) {
        for (const auto* node : m.storage[l - 1]) {
            out.applied_per_layer[l - 1] += node->applied_external();
            out.stale_applications += node->stale_applications();
            out.windowed_reduces += node->windowed_reduces();
            out.max_reduces_per_window = std::max(out.max_reduces_per_window, node->max_reduces_per_window());
            if (node->is_output()) {
                out.embeddings_emitted += node->embeddings_emitted();
                out.latencies_ms.insert(out.latencies_ms.end(), node->latencies_ms().begin(), node->latencies_ms().end());
                const auto& b = node->buckets();
                if (out.throughput_buckets.size() < b.size()) out.throughput_buckets.resize(b.size(), 0);
                for (std::size_t i = 0; i < b.size(); ++i) out.throughput_buckets[i] += b[i];
            }
        }
    }
    for (auto n : out.applied_per_layer) out.applied_applications += n;
    out.ingested_events = m.source->released();
    out.routed_events = m.splitter->routed();
    out.expected_applications = m.splitter->expected();
    for (const auto* p : m.partitioners) out.dropped_events += p->dropped();
    out.virtual_runtime_ms = to_millis(runtime);
    out.end_time_ms = to_millis(m.sched->now());
    out.probes = m.sched->probes();
    out.windows = m.sched->windows();
    out.training_rounds = static_cast<std::uint32_t>(m.report.rounds.size());
    return out;
}

std::map<VertexId, Tensor> Pipeline::embeddings() const {
    std::map<VertexId, Tensor> out;
    for (const auto* node : impl_->storage.back()) {
        for (const auto& [p, ps] : node->parts()) {
            ps.store.for_each_vertex([&](const VertexRecord& r) {
                if (r.is_master() && r.feature) out[r.id] = *r.feature;
            });
        }
    }
    return out;
}

std::vector<PartView> Pipeline::parts(std::uint32_t layer) const {
    if (layer < 1 || layer > impl_->plan.num_layers + 1) throw ArgumentError("no storage layer " + std::to_string(layer));
    std::vector<PartView> out;
    for (std::uint32_t j = 0; j < impl_->storage[layer - 1].size(); ++j) {
        for (const auto& [p, ps] : impl_->storage[layer - 1][j]->parts()) {
            out.push_back(PartView{layer, p, j, &ps.store, &ps.window});
        }
    }
    std::sort(out.begin(), out.end(), [](const PartView& a, const PartView& b) { return a.part < b.part; });
    return out;
}

const LayerModel& Pipeline::model(std::uint32_t layer, std::uint32_t subop) const {
    if (layer < 1 || layer > impl_->plan.num_layers + 1) throw ArgumentError("no storage layer " + std::to_string(layer));
    return impl_->storage[layer - 1].at(subop)->model();
}

void Pipeline::set_model(std::uint32_t layer, const LayerModel& model) {
    if (layer < 1 || layer > impl_->plan.num_layers + 1) throw ArgumentError("no storage layer " + std::to_string(layer));
    const auto& expected = impl_->storage[layer - 1][0]->model();
    if (!model.weight.same_shape(expected.weight) || !model.bias.same_shape(expected.bias)) {
        throw DimensionError("model shape " + model.weight.shape_string() + " does not fit layer " +
                             std::to_string(layer) + " (" + expected.weight.shape_string() + ")");
    }
    for (auto* node : impl_->storage[layer - 1]) node->set_model(model);
}

const PartitionerState& Pipeline::partitioner() const { return *impl_->pstate; }

const TrainingReport& Pipeline::training_report() const { return impl_->report; }

bool Pipeline::queues_empty() const { return impl_->sched->queues_empty(); }

bool Pipeline::timers_pending() const { return impl_->sched->timers_pending(); }

bool Pipeline::windows_empty() const {
    for (const auto& layer : impl_->storage)
        for (const auto* node : layer)
            for (const auto& [p, ps] : node->parts())
                if (!ps.window.empty()) return false;
    return true;
}

}  // namespace flowgnn
