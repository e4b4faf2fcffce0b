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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flowgnn/envelope.hpp"
#include "flowgnn/plan.hpp"

namespace flowgnn {

class NodeContext;

/// A sub-operator serviced by exactly one worker at a time.
class Node {
  public:
    virtual ~Node() = default;
    virtual void handle(Envelope&& env, NodeContext& ctx) = 0;
    virtual void on_timer(PartId /*part*/, SimTime /*at*/, NodeContext& /*ctx*/) {}
    /// Self-generated work (sources): virtual time of the next emission.
    virtual std::optional<SimTime> next_emission() const { return std::nullopt; }
    virtual void emit_next(NodeContext& /*ctx*/) {}
    /// A paused node consumes nothing from its inbox.
    virtual bool paused() const { return false; }
};

/// Handler-side view of the scheduler. Only valid during a handler invocation.
class NodeContext {
  public:
    SimTime now() const noexcept { return now_; }
    std::uint32_t self() const noexcept { return self_; }
    void send(Envelope env) { out_.push_back(std::move(env)); }
    void add_flops(double flops) noexcept { flops_ += flops; }
    void set_timer(PartId part, SimTime at) { timers_.emplace_back(at, part); }

  private:
    friend class Scheduler;
    SimTime now_ = 0;
    std::uint32_t self_ = 0;
    double flops_ = 0.0;
    std::vector<Envelope> out_;
    std::vector<std::pair<SimTime, PartId>> timers_;
};

struct NodeInfo {
    std::string name;
    Stage stage = Stage::Storage;
    std::uint32_t layer = 0;
    std::uint32_t index = 0;
    /// Upstream nodes of the splitter (source, partitioner, splitter) are exempt from termination
    /// checks while the splitter is paused.
    bool upstream = false;
};

struct NodeStats {
    double busy_ns = 0.0;
    std::uint64_t handled = 0;
    std::uint64_t timers_fired = 0;
    std::uint64_t blocked_windows = 0;
    std::size_t max_inbox = 0;
    SimTime last_finish = 0;
};

/// Window-synchronous conservative discrete-event scheduler.
///
/// Virtual time advances in windows no wider than the hop latency, so nothing emitted inside a window
/// can arrive inside it. Every node drains its due inbox items and timers for the window, outboxes
/// are merged in node order, and the result is identical whether nodes of a window run on one
/// thread or many.
class Scheduler {
  public:
    static constexpr std::uint32_t kCoordinator = 0xFFFFFFFEu;
    using Router = std::function<std::uint32_t(const Envelope&)>;
    using Observer = std::function<void(std::uint32_t src, std::uint32_t dst, const Envelope&)>;
    using CoordinatorInbox = std::function<void(Envelope&&, SimTime now)>;
    /// Called at each probe that finds the whole graph quiet. Returning true ends the run.
    using QuiescenceHandler = std::function<bool(SimTime now)>;

    explicit Scheduler(const PipelinePlan& plan);
    ~Scheduler();
    Scheduler(const Scheduler&) = delete;
    Scheduler& operator=(const Scheduler&) = delete;

    std::uint32_t add_node(std::unique_ptr<Node> node, NodeInfo info);
    /// Forward-direction targets whose queue depth throttles `node`.
    void set_forward_targets(std::uint32_t node, std::vector<std::uint32_t> targets);
    void set_router(Router router) { router_ = std::move(router); }
    void set_observer(Observer observer) { observer_ = std::move(observer); }
    void set_coordinator_inbox(CoordinatorInbox inbox) { coordinator_ = std::move(inbox); }
    void set_splitter(std::uint32_t node) { splitter_ = node; }

    /// Delivers a coordinator-originated envelope one hop after `now()`.
    void inject(Envelope env);
    /// Runs until the quiescence handler returns true; throws StateError past the horizon.
    void run(const QuiescenceHandler& on_quiescent);

    SimTime now() const noexcept { return now_; }
    std::size_t node_count() const noexcept { return slots_.size(); }
    Node& node(std::uint32_t i) { return *slots_[i].node; }
    const Node& node(std::uint32_t i) const { return *slots_[i].node; }
    const NodeInfo& info(std::uint32_t i) const { return slots_[i].info; }
    const NodeStats& stats(std::uint32_t i) const { return slots_[i].stats; }
    bool queues_empty() const;
    bool timers_pending() const;
    std::uint64_t probes() const noexcept { return probes_; }
    std::uint64_t windows() const noexcept { return windows_; }

  private:
    struct Delivery {
        SimTime arrival;
        std::uint32_t src;
        std::uint64_t seq;
        Envelope env;
    };
    struct Outgoing {
        SimTime arrival;
        std::uint64_t seq;
        Envelope env;
    };
    struct Slot {
        std::unique_ptr<Node> node;
        NodeInfo info;
        NodeStats stats;
        std::vector<Delivery> inbox;  // min-heap on (arrival, src, seq)
        std::size_t forward_queued = 0;
        std::set<std::pair<SimTime, PartId>> timers;
        std::vector<std::uint32_t> forward_targets;
        std::vector<Outgoing> outbox;
        SimTime clock = 0;
        SimTime last_receive = -1;
        SimTime last_send = -1;
        std::uint64_t seq = 0;
        bool blocked = false;
    };
    class Pool;

    static constexpr SimTime kNever = INT64_MAX;
    SimTime next_activity(const Slot& s) const;
    void process(std::uint32_t index, SimTime window_end);
    void merge();
    bool quiet(const Slot& s, SimTime probe, SimTime prev_probe) const;
    void push(Slot& dst, Delivery d);

    const PipelinePlan& plan_;
    SimTime hop_;
    std::vector<Slot> slots_;
    Router router_;
    Observer observer_;
    CoordinatorInbox coordinator_;
    std::uint32_t splitter_ = kCoordinator;
    std::vector<Outgoing> injected_;
    std::uint64_t inject_seq_ = 0;
    SimTime now_ = 0;
    std::uint64_t probes_ = 0;
    std::uint64_t windows_ = 0;
    std::unique_ptr<Pool> pool_;
};

}  // namespace flowgnn
