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

#include "flowgnn/window.hpp"

#include <algorithm>

namespace flowgnn {

namespace {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

FrequencySketch::FrequencySketch(const WindowPolicy& policy)
    : policy_(policy),
      counters_(static_cast<std::size_t>(policy.sketch_depth) * policy.sketch_width, 0),
      next_decay_(millis(static_cast<double>(policy.sketch_decay_ms))) {
    row_seeds_.reserve(policy.sketch_depth);
    for (std::uint32_t r = 0; r < policy.sketch_depth; ++r) row_seeds_.push_back(mix64(0xC0FFEEull + r));
}

std::size_t FrequencySketch::cell(std::uint32_t row, VertexId v) const noexcept {
    return static_cast<std::size_t>(row) * policy_.sketch_width + mix64(row_seeds_[row] ^ v) % policy_.sketch_width;
}

std::uint32_t FrequencySketch::estimate_locked(VertexId v) const {
    std::uint32_t best = UINT32_MAX;
    for (std::uint32_t r = 0; r < policy_.sketch_depth; ++r) best = std::min(best, counters_[cell(r, v)]);
    return best;
}

void FrequencySketch::decay_until(SimTime now) {
    const SimTime period = millis(static_cast<double>(policy_.sketch_decay_ms));
    while (now >= next_decay_) {
        for (auto& c : counters_) c >>= 1;
        next_decay_ += period;
        ++decays_;
    }
}

void FrequencySketch::observe(VertexId v, SimTime now) {
    std::lock_guard lock(mutex_);
    decay_until(now);
    const bool cold = estimate_locked(v) == 0;
    for (std::uint32_t r = 0; r < policy_.sketch_depth; ++r) {
        auto& c = counters_[cell(r, v)];
        if (c != UINT32_MAX) ++c;
    }
    Gap& g = gaps_[v];
    if (cold) {
        g.has_ema = false;
    } else {
        const double gap_ms = to_millis(std::max<SimTime>(0, now - g.last));
        g.ema_ms = g.has_ema ? policy_.adaptive_alpha * gap_ms + (1.0 - policy_.adaptive_alpha) * g.ema_ms : gap_ms;
        g.has_ema = true;
    }
    g.last = std::max(g.last, now);
}

std::uint32_t FrequencySketch::estimate(VertexId v) const {
    std::lock_guard lock(mutex_);
    return estimate_locked(v);
}

std::optional<double> FrequencySketch::mean_gap_ms(VertexId v) const {
    std::lock_guard lock(mutex_);
    auto it = gaps_.find(v);
    if (it == gaps_.end() || !it->second.has_ema || estimate_locked(v) == 0) return std::nullopt;
    return it->second.ema_ms;
}

double FrequencySketch::session_gap_ms(VertexId v) const {
    const auto gap = mean_gap_ms(v);
    if (!gap) return static_cast<double>(policy_.session_gap_ms);
    return std::clamp(policy_.adaptive_c * *gap, static_cast<double>(policy_.adaptive_min_ms),
                      static_cast<double>(policy_.adaptive_max_ms));
}

SimTime eviction_time(const WindowPolicy& policy, std::optional<SimTime> current, SimTime now, double session_gap_ms) {
    switch (policy.kind) {
        case WindowKind::Streaming:
            return now;
        case WindowKind::Tumbling: {
            if (current) return *current;
            const SimTime w = millis(static_cast<double>(policy.window_ms));
            return (now / w) * w + w;
        }
        case WindowKind::Session:
        case WindowKind::Adaptive: {
            const SimTime candidate = now + millis(session_gap_ms);
            return current ? std::max(*current, candidate) : candidate;
        }
    }
    return now;
}

SimTime coalesce(const WindowPolicy& policy, SimTime t) {
    const SimTime c = millis(static_cast<double>(policy.coalesce_ms));
    if (t <= 0) return 0;
    return ((t + c - 1) / c) * c;
}

double WindowState::gap_for(VertexId v, SimTime now, FrequencySketch* sketch) const {
    if (policy_.kind == WindowKind::Adaptive && sketch) {
        sketch->observe(v, now);
        return sketch->session_gap_ms(v);
    }
    return static_cast<double>(policy_.session_gap_ms);
}

SimTime WindowState::add_forward(VertexId v, SimTime now, SimTime origin, FrequencySketch* sketch) {
    const double gap = gap_for(v, now, sketch);
    auto it = forward_.find(v);
    if (it == forward_.end()) {
        const SimTime e = eviction_time(policy_, std::nullopt, now, gap);
        forward_.emplace(v, PendingForward{e, origin});
        return e;
    }
    it->second.evict_at = eviction_time(policy_, it->second.evict_at, now, gap);
    it->second.origin = std::min(it->second.origin, origin);
    return it->second.evict_at;
}

SimTime WindowState::add_reduce(VertexId dst, VertexId src, SimTime now, SimTime origin, FrequencySketch* sketch) {
    const double gap = gap_for(dst, now, sketch);
    auto it = reduce_.find(dst);
    if (it == reduce_.end()) {
        PendingReduce p;
        p.evict_at = eviction_time(policy_, std::nullopt, now, gap);
        p.origin = origin;
        p.sources.push_back(src);
        const SimTime e = p.evict_at;
        reduce_.emplace(dst, std::move(p));
        return e;
    }
    it->second.evict_at = eviction_time(policy_, it->second.evict_at, now, gap);
    it->second.origin = std::min(it->second.origin, origin);
    it->second.sources.push_back(src);
    return it->second.evict_at;
}

bool WindowState::remove_reduce_edge(VertexId dst, VertexId src) {
    auto it = reduce_.find(dst);
    if (it == reduce_.end()) return false;
    auto& s = it->second.sources;
    auto pos = std::find(s.rbegin(), s.rend(), src);
    if (pos == s.rend()) return false;
    s.erase(std::next(pos).base());
    if (s.empty()) reduce_.erase(it);
    return true;
}

bool WindowState::touches(VertexId v) const {
    if (reduce_.count(v)) return true;
    return std::any_of(reduce_.begin(), reduce_.end(), [v](const auto& kv) {
        return std::find(kv.second.sources.begin(), kv.second.sources.end(), v) != kv.second.sources.end();
    });
}

std::vector<std::pair<VertexId, PendingForward>> WindowState::take_forward(SimTime ts) {
    std::vector<std::pair<VertexId, PendingForward>> due;
    for (auto it = forward_.begin(); it != forward_.end();) {
        if (it->second.evict_at <= ts) {
            due.emplace_back(it->first, it->second);
            it = forward_.erase(it);
        } else {
            ++it;
        }
    }
    return due;
}

std::vector<std::pair<VertexId, PendingReduce>> WindowState::take_reduce(SimTime ts) {
    std::vector<std::pair<VertexId, PendingReduce>> due;
    for (auto it = reduce_.begin(); it != reduce_.end();) {
        if (it->second.evict_at <= ts) {
            due.emplace_back(it->first, std::move(it->second));
            it = reduce_.erase(it);
        } else {
            ++it;
        }
    }
    return due;
}

std::optional<SimTime> WindowState::forward_eviction(VertexId v) const {
    auto it = forward_.find(v);
    return it == forward_.end() ? std::nullopt : std::optional<SimTime>(it->second.evict_at);
}

std::optional<SimTime> WindowState::reduce_eviction(VertexId dst) const {
    auto it = reduce_.find(dst);
    return it == reduce_.end() ? std::nullopt : std::optional<SimTime>(it->second.evict_at);
}

}  // namespace flowgnn
