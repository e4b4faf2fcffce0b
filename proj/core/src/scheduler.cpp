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

#include "flowgnn/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "flowgnn/errors.hpp"

namespace flowgnn {

namespace {

struct LaterDelivery {
    template <typename D>
    bool operator()(const D& a, const D& b) const noexcept {
        if (a.arrival != b.arrival) return a.arrival > b.arrival;
        if (a.src != b.src) return a.src > b.src;
        return a.seq > b.seq;
    }
};

}  // namespace

/// Fixed worker pool; the calling thread participates. `run` returns only once every worker has
/// left the task loop, so no straggler can touch the next generation's work.
class Scheduler::Pool {
  public:
    explicit Pool(unsigned extra_threads) {
        for (unsigned i = 0; i < extra_threads; ++i) threads_.emplace_back([this] { loop(); });
    }
    ~Pool() {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
        }
        wake_.notify_all();
    }

    void run(std::size_t count, const std::function<void(std::size_t)>& fn) {
        {
            std::lock_guard lock(mutex_);
            task_ = &fn;
            total_ = count;
            next_ = 0;
            ++generation_;
        }
        wake_.notify_all();
        work();
        std::unique_lock lock(mutex_);
        done_.wait(lock, [this] { return active_ == 0 && next_ >= total_; });
        task_ = nullptr;
        if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
    }

  private:
    void work() {
        for (;;) {
            std::size_t i;
            const std::function<void(std::size_t)>* fn;
            {
                std::lock_guard lock(mutex_);
                if (next_ >= total_) break;
                i = next_++;
                fn = task_;
                ++active_;
            }
            try {
                (*fn)(i);
            } catch (...) {
                std::lock_guard lock(mutex_);
                if (!error_) error_ = std::current_exception();
            }
            {
                std::lock_guard lock(mutex_);
                --active_;
            }
            done_.notify_all();
        }
    }
    void loop() {
        std::uint64_t seen = 0;
        for (;;) {
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            work();
        }
    }

    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t total_ = 0;
    std::size_t next_ = 0;
    std::size_t active_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
    std::vector<std::jthread> threads_;
};

Scheduler::Scheduler(const PipelinePlan& plan) : plan_(plan), hop_(millis(plan.cost.hop_latency_ms)) {
    if (hop_ <= 0) throw ConfigError("hop latency must be at least one nanosecond");
    if (plan.scheduler == SchedulerMode::Parallel) {
        unsigned threads = plan.worker_threads != 0 ? plan.worker_threads : std::thread::hardware_concurrency();
        pool_ = std::make_unique<Pool>(threads > 1 ? threads - 1 : 0);
    }
}

Scheduler::~Scheduler() = default;

std::uint32_t Scheduler::add_node(std::unique_ptr<Node> node, NodeInfo info) {
    Slot s;
    s.node = std::move(node);
    s.info = std::move(info);
    slots_.push_back(std::move(s));
    return static_cast<std::uint32_t>(slots_.size() - 1);
}

void Scheduler::set_forward_targets(std::uint32_t node, std::vector<std::uint32_t> targets) {
    slots_.at(node).forward_targets = std::move(targets);
}

void Scheduler::push(Slot& dst, Delivery d) {
    dst.last_receive = std::max(dst.last_receive, d.arrival);
    if (d.env.direction == Direction::Forward) ++dst.forward_queued;
    dst.inbox.push_back(std::move(d));
    std::push_heap(dst.inbox.begin(), dst.inbox.end(), LaterDelivery{});
    dst.stats.max_inbox = std::max(dst.stats.max_inbox, dst.inbox.size());
}

void Scheduler::inject(Envelope env) {
    const std::uint32_t dst = router_(env);
    if (dst == kCoordinator || dst >= slots_.size()) throw RoutingError("coordinator envelope without a node target");
    if (observer_) observer_(kCoordinator, dst, env);
    push(slots_[dst], Delivery{now_ + hop_, static_cast<std::uint32_t>(slots_.size()), inject_seq_++, std::move(env)});
}

SimTime Scheduler::next_activity(const Slot& s) const {
    if (s.node->paused()) return kNever;
    SimTime t = kNever;
    if (!s.inbox.empty()) t = std::min(t, s.inbox.front().arrival);
    if (!s.timers.empty()) t = std::min(t, s.timers.begin()->first);
    if (auto e = s.node->next_emission()) t = std::min(t, *e);
    return t == kNever ? kNever : std::max(t, s.clock);
}

void Scheduler::process(std::uint32_t index, SimTime window_end) {
    Slot& s = slots_[index];
    std::int64_t budget = INT64_MAX;
    for (std::uint32_t t : s.forward_targets) {
        budget = std::min<std::int64_t>(budget, static_cast<std::int64_t>(plan_.queue_capacity) -
                                                    static_cast<std::int64_t>(slots_[t].forward_queued));
    }
    NodeContext ctx;
    ctx.self_ = index;
    const double per_env = plan_.cost.per_envelope_us;
    const double per_flop = plan_.cost.per_flop_us;
    for (;;) {
        if (s.node->paused() || budget <= 0) break;
        const SimTime t_in = s.inbox.empty() ? kNever : s.inbox.front().arrival;
        const SimTime t_tm = s.timers.empty() ? kNever : s.timers.begin()->first;
        const auto em = s.node->next_emission();
        const SimTime t_src = em ? *em : kNever;
        const SimTime t = std::min({t_in, t_tm, t_src});
        if (t == kNever) break;
        const SimTime start = std::max(s.clock, t);
        if (start >= window_end) break;

        ctx.now_ = start;
        ctx.flops_ = 0.0;
        ctx.out_.clear();
        ctx.timers_.clear();
        double cost_us = per_env;
        if (t_tm <= t_in && t_tm <= t_src) {
            const auto [at, part] = *s.timers.begin();
            s.timers.erase(s.timers.begin());
            s.node->on_timer(part, at, ctx);
            ++s.stats.timers_fired;
        } else if (t_in <= t_src) {
            std::pop_heap(s.inbox.begin(), s.inbox.end(), LaterDelivery{});
            Delivery d = std::move(s.inbox.back());
            s.inbox.pop_back();
            if (d.env.direction == Direction::Forward) --s.forward_queued;
            s.node->handle(std::move(d.env), ctx);
            ++s.stats.handled;
        } else {
            s.node->emit_next(ctx);
            cost_us = 0.0;
        }
        cost_us += ctx.flops_ * per_flop;
        const double cost_ns = cost_us * 1000.0;
        const SimTime finish = start + static_cast<SimTime>(std::llround(cost_ns));
        s.stats.busy_ns += cost_ns;
        for (auto& env : ctx.out_) {
            if (env.direction == Direction::Forward) --budget;
            s.outbox.push_back(Outgoing{finish + hop_, s.seq++, std::move(env)});
        }
        if (!ctx.out_.empty()) s.last_send = std::max(s.last_send, finish);
        for (const auto& tm : ctx.timers_) s.timers.insert(tm);
        s.clock = finish;
        if (cost_ns > 0.0) s.stats.last_finish = finish;
    }
}

void Scheduler::merge() {
    std::vector<std::pair<Envelope, SimTime>> to_coordinator;
    for (std::uint32_t i = 0; i < slots_.size(); ++i) {
        auto& outbox = slots_[i].outbox;
        for (auto& out : outbox) {
            const std::uint32_t dst = router_(out.env);
            if (observer_) observer_(i, dst, out.env);
            if (dst == kCoordinator) {
                to_coordinator.emplace_back(std::move(out.env), out.arrival);
                continue;
            }
            if (dst >= slots_.size()) throw RoutingError("envelope routed to unknown node " + std::to_string(dst));
            push(slots_[dst], Delivery{out.arrival, i, out.seq, std::move(out.env)});
        }
        outbox.clear();
    }
    for (auto& [env, at] : to_coordinator) {
        if (!coordinator_) throw RoutingError("no coordinator attached");
        coordinator_(std::move(env), at);
    }
}

bool Scheduler::quiet(const Slot& s, SimTime probe, SimTime prev_probe) const {
    return s.inbox.empty() && s.timers.empty() && s.clock <= probe && s.last_receive <= prev_probe &&
           s.last_send <= prev_probe && !s.node->next_emission();
}

void Scheduler::run(const QuiescenceHandler& on_quiescent) {
    const SimTime interval = millis(static_cast<double>(plan_.probe_interval_ms));
    const SimTime horizon = millis(static_cast<double>(plan_.horizon_ms));
    SimTime prev_probe = (now_ / interval) * interval;
    SimTime next_probe = prev_probe + interval;
    std::vector<std::uint32_t> active;
    std::function<void(std::size_t)> task;
    SimTime window_end = 0;
    task = [&](std::size_t k) { process(active[k], window_end); };

    for (;;) {
        SimTime t_next = kNever;
        for (auto& s : slots_) {
            std::size_t worst = 0;
            for (std::uint32_t t : s.forward_targets) worst = std::max(worst, slots_[t].forward_queued);
            s.blocked = worst >= plan_.queue_capacity;
            if (s.blocked) {
                ++s.stats.blocked_windows;
                continue;
            }
            t_next = std::min(t_next, next_activity(s));
        }
        if (next_probe <= t_next) {
            now_ = next_probe;
            ++probes_;
            const bool paused = splitter_ != kCoordinator && slots_[splitter_].node->paused();
            bool all_quiet = true;
            for (const auto& s : slots_) {
                if (paused && s.info.upstream) continue;
                if (!quiet(s, now_, prev_probe)) {
                    all_quiet = false;
                    break;
                }
            }
            prev_probe = next_probe;
            next_probe += interval;
            if (all_quiet && on_quiescent(now_)) return;
            if (now_ > horizon) {
                throw StateError("virtual time " + std::to_string(to_millis(now_)) + " ms exceeded the horizon of " +
                                 std::to_string(plan_.horizon_ms) + " ms without quiescence");
            }
            continue;
        }
        if (t_next > horizon) {
            throw StateError("virtual time " + std::to_string(to_millis(t_next)) + " ms exceeded the horizon of " +
                             std::to_string(plan_.horizon_ms) + " ms without quiescence");
        }
        now_ = t_next;
        window_end = std::min(t_next + hop_, next_probe);
        active.clear();
        for (std::uint32_t i = 0; i < slots_.size(); ++i) {
            if (!slots_[i].blocked && next_activity(slots_[i]) < window_end) active.push_back(i);
        }
        if (pool_ && active.size() > 1) {
            pool_->run(active.size(), task);
        } else {
            for (std::size_t k = 0; k < active.size(); ++k) task(k);
        }
        ++windows_;
        merge();
    }
}

bool Scheduler::queues_empty() const {
    return std::all_of(slots_.begin(), slots_.end(), [](const Slot& s) { return s.inbox.empty() && s.outbox.empty(); });
}

bool Scheduler::timers_pending() const {
    return std::any_of(slots_.begin(), slots_.end(), [](const Slot& s) { return !s.timers.empty(); });
}

}  // namespace flowgnn
