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

#include "flowgnn/partitioner.hpp"

#include <algorithm>

#include "flowgnn/errors.hpp"

namespace flowgnn {

PartitionAlgorithm parse_partition_algorithm(std::string_view name) {
    if (name == "hdrf") return PartitionAlgorithm::HDRF;
    if (name == "clda") return PartitionAlgorithm::CLDA;
    if (name == "random") return PartitionAlgorithm::Random;
    throw ConfigError("unknown partitioner '" + std::string(name) + "' (expected hdrf|clda|random)");
}

std::string_view partition_algorithm_name(PartitionAlgorithm a) noexcept {
    switch (a) {
        case PartitionAlgorithm::HDRF: return "hdrf";
        case PartitionAlgorithm::CLDA: return "clda";
        case PartitionAlgorithm::Random: return "random";
    }
    return "?";
}

PartitionerState::PartitionerState(PartitionerConfig config)
    : config_(config),
      shards_(std::make_unique<Shard[]>(kShards)),
      loads_(std::make_unique<std::atomic<std::int64_t>[]>(config.num_partitions)),
      masters_(std::make_unique<std::atomic<std::int64_t>[]>(config.num_partitions)),
      rng_(config.seed) {
    if (config_.num_partitions == 0) throw ConfigError("num_partitions must be at least 1");
    if (!(config_.epsilon > 0.0)) throw ConfigError("partitioner epsilon must be positive");
    for (std::uint32_t p = 0; p < config_.num_partitions; ++p) {
        loads_[p].store(0);
        masters_[p].store(0);
    }
}

void PartitionerState::add_part(VertexInfo& info, PartId p) {
    auto it = std::lower_bound(info.parts.begin(), info.parts.end(), p);
    if (it == info.parts.end() || *it != p) info.parts.insert(it, p);
}

PartId PartitionerState::random_part() {
    std::lock_guard lock(rng_mutex_);
    return static_cast<PartId>(std::uniform_int_distribution<std::uint32_t>(0, config_.num_partitions - 1)(rng_));
}

PartId PartitionerState::choose(VertexInfo& u, VertexInfo& v) {
    const std::uint32_t n = config_.num_partitions;
    if (n == 1) return 0;
    if (config_.algorithm == PartitionAlgorithm::Random) return random_part();

    std::int64_t max_load = loads_[0].load(std::memory_order_relaxed);
    std::int64_t min_load = max_load;
    for (std::uint32_t p = 1; p < n; ++p) {
        const std::int64_t l = loads_[p].load(std::memory_order_relaxed);
        max_load = std::max(max_load, l);
        min_load = std::min(min_load, l);
    }
    const double du = static_cast<double>(u.degree);
    const double dv = static_cast<double>(v.degree);
    const double theta_u = du / (du + dv);
    const double theta_v = dv / (du + dv);
    const bool u_low = u.degree <= v.degree;

    auto holds = [](const VertexInfo& info, PartId p) {
        return std::binary_search(info.parts.begin(), info.parts.end(), p);
    };

    PartId best = 0;
    double best_score = -1.0;
    for (std::uint32_t p = 0; p < n; ++p) {
        const bool in_u = holds(u, p);
        const bool in_v = holds(v, p);
        double rep = 0.0;
        if (config_.algorithm == PartitionAlgorithm::HDRF) {
            if (in_u) rep += 1.0 + (1.0 - theta_u);
            if (in_v) rep += 1.0 + (1.0 - theta_v);
        } else {
            // CLDA: locality dominated by the low-degree endpoint, the hub only breaks ties.
            const bool in_low = u_low ? in_u : in_v;
            const bool in_high = u_low ? in_v : in_u;
            const double theta_low = u_low ? theta_u : theta_v;
            const double theta_high = 1.0 - theta_low;
            if (in_low) rep += 2.0 - theta_low;
            if (in_high) rep += 1.0 - theta_high;
        }
        const double load = static_cast<double>(loads_[p].load(std::memory_order_relaxed));
        const double bal = config_.theta * (static_cast<double>(max_load) - load) /
                           (config_.epsilon + static_cast<double>(max_load - min_load));
        const double score = rep + bal;
        if (score > best_score) {
            best_score = score;
            best = p;
        }
    }
    return best;
}

PartId PartitionerState::assign_master_locked(VertexInfo& info, PartId part) {
    if (info.master == kUnsetPart) {
        info.master = part;
        masters_[part].fetch_add(1, std::memory_order_relaxed);
    }
    return info.master;
}

PartId PartitionerState::assign_part(VertexId src, VertexId dst) {
    const std::size_t a = shard_of(src);
    const std::size_t b = shard_of(dst);
    std::unique_lock<std::mutex> first(shards_[std::min(a, b)].mutex);
    std::unique_lock<std::mutex> second;
    if (a != b) second = std::unique_lock<std::mutex>(shards_[std::max(a, b)].mutex);

    VertexInfo& u = shards_[a].vertices[src];
    VertexInfo& v = shards_[b].vertices[dst];
    ++u.degree;
    if (src != dst) ++v.degree;
    const PartId part = choose(u, v);
    add_part(u, part);
    add_part(v, part);
    assign_master_locked(u, part);
    assign_master_locked(v, part);
    loads_[part].fetch_add(1, std::memory_order_relaxed);
    total_edges_.fetch_add(1, std::memory_order_relaxed);
    {
        std::lock_guard lock(edges_mutex_);
        edge_parts_[(static_cast<std::uint64_t>(src) << 32) | dst].push_back(part);
    }
    return part;
}

PartId PartitionerState::assign_master(VertexId v, PartId part) {
    if (part >= config_.num_partitions) throw RoutingError("part " + std::to_string(part) + " out of range");
    Shard& s = shards_[shard_of(v)];
    std::lock_guard lock(s.mutex);
    VertexInfo& info = s.vertices[v];
    add_part(info, part);
    return assign_master_locked(info, part);
}

PartId PartitionerState::place_vertex(VertexId v) {
    Shard& s = shards_[shard_of(v)];
    std::lock_guard lock(s.mutex);
    auto it = s.vertices.find(v);
    if (it != s.vertices.end() && it->second.master != kUnsetPart) return it->second.master;
    PartId part = 0;
    if (config_.algorithm == PartitionAlgorithm::Random) {
        part = random_part();
    } else {
        std::int64_t fewest = masters_[0].load(std::memory_order_relaxed);
        for (std::uint32_t p = 1; p < config_.num_partitions; ++p) {
            const std::int64_t m = masters_[p].load(std::memory_order_relaxed);
            if (m < fewest) {
                fewest = m;
                part = p;
            }
        }
    }
    VertexInfo& info = s.vertices[v];
    add_part(info, part);
    return assign_master_locked(info, part);
}

std::optional<PartId> PartitionerState::take_edge(VertexId src, VertexId dst) {
    std::lock_guard lock(edges_mutex_);
    auto it = edge_parts_.find((static_cast<std::uint64_t>(src) << 32) | dst);
    if (it == edge_parts_.end() || it->second.empty()) return std::nullopt;
    const PartId p = it->second.back();
    it->second.pop_back();
    return p;
}

std::optional<PartId> PartitionerState::master_of(VertexId v) const {
    const Shard& s = shards_[shard_of(v)];
    std::lock_guard lock(s.mutex);
    auto it = s.vertices.find(v);
    if (it == s.vertices.end() || it->second.master == kUnsetPart) return std::nullopt;
    return it->second.master;
}

std::vector<PartId> PartitionerState::vertex_parts(VertexId v) const {
    const Shard& s = shards_[shard_of(v)];
    std::lock_guard lock(s.mutex);
    auto it = s.vertices.find(v);
    return it == s.vertices.end() ? std::vector<PartId>{} : it->second.parts;
}

std::int64_t PartitionerState::partial_degree(VertexId v) const {
    const Shard& s = shards_[shard_of(v)];
    std::lock_guard lock(s.mutex);
    auto it = s.vertices.find(v);
    return it == s.vertices.end() ? 0 : it->second.degree;
}

std::size_t PartitionerState::vertex_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < kShards; ++i) {
        std::lock_guard lock(shards_[i].mutex);
        n += shards_[i].vertices.size();
    }
    return n;
}

std::vector<std::int64_t> PartitionerState::loads() const {
    std::vector<std::int64_t> out(config_.num_partitions);
    for (std::uint32_t p = 0; p < config_.num_partitions; ++p) out[p] = loads_[p].load();
    return out;
}

std::vector<std::int64_t> PartitionerState::master_counts() const {
    std::vector<std::int64_t> out(config_.num_partitions);
    for (std::uint32_t p = 0; p < config_.num_partitions; ++p) out[p] = masters_[p].load();
    return out;
}

double PartitionerState::replication_factor() const {
    std::size_t vertices = 0;
    std::size_t copies = 0;
    for (std::size_t i = 0; i < kShards; ++i) {
        std::lock_guard lock(shards_[i].mutex);
        for (const auto& [id, info] : shards_[i].vertices) {
            ++vertices;
            copies += info.parts.size();
        }
    }
    if (vertices == 0) throw StateError("replication factor of an empty partitioner is undefined");
    return static_cast<double>(copies) / static_cast<double>(vertices);
}

std::uint32_t compute_physical_part(std::uint32_t logical_part, std::uint32_t parallelism,
                                    std::uint32_t max_parallelism) {
    if (parallelism == 0 || max_parallelism == 0 || parallelism > max_parallelism) {
        throw ConfigError("parallelism " + std::to_string(parallelism) + " must be in [1, max_parallelism=" +
                          std::to_string(max_parallelism) + "]");
    }
    const std::uint64_t key_group = logical_part % max_parallelism;
    return static_cast<std::uint32_t>(key_group * parallelism / max_parallelism);
}

}  // namespace flowgnn
