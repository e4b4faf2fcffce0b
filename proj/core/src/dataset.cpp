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

#include "flowgnn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "flowgnn/errors.hpp"

namespace flowgnn {

DatasetFormat parse_dataset_format(std::string_view name) {
    if (name == "edges" || name == "temporal-edge-list") return DatasetFormat::TemporalEdgeList;
    if (name == "tagged" || name == "edge-list-with-features") return DatasetFormat::EdgeListWithFeatures;
    throw ConfigError("unknown dataset format '" + std::string(name) + "' (expected edges or tagged)");
}

std::string_view dataset_format_name(DatasetFormat f) noexcept {
    return f == DatasetFormat::TemporalEdgeList ? "edges" : "tagged";
}

VertexId VertexInterner::intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<VertexId>(names_.size());
    ids_.emplace(std::string(name), id);
    names_.emplace_back(name);
    return id;
}

std::optional<VertexId> VertexInterner::find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

Tensor synthetic_feature(std::uint64_t seed, VertexId vertex, std::size_t dim) {
    std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(vertex) + 1));
    std::vector<double> values(dim);
    for (auto& v : values) {
        // splitmix64
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        v = static_cast<double>(z >> 11) * 0x1.0p-52 - 1.0;
    }
    return Tensor::vector(std::move(values));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, const char* what) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" + std::string(text) + "'", line);
    }
    return value;
}

double parse_real(std::string_view text, std::size_t line) {
    // from_chars for double is missing on older toolchains
    std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw ParseError("line " + std::to_string(line) + ": bad feature value '" + s + "'", line);
    }
    return v;
}

struct Pending {
    GraphEvent event;
    std::size_t order;
};

}  // namespace

Dataset parse_dataset(std::istream& in, const DatasetSpec& spec, std::istream* labels) {
    Dataset ds;
    std::vector<Pending> pending;
    std::unordered_map<VertexId, EventTime> first_seen;
    std::vector<bool> has_feature;
    auto touch = [&](std::string_view name, EventTime ts) {
        const VertexId id = ds.vertices.intern(name);
        first_seen.try_emplace(id, ts);
        if (has_feature.size() <= id) has_feature.resize(id + 1, false);
        return id;
    };
    auto push = [&](GraphEvent ev) { pending.push_back({std::move(ev), pending.size() + 1}); };

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto fields = split_fields(raw);
        if (fields.empty() || fields[0].front() == '#') continue;
        ++ds.lines;
        if (spec.format == DatasetFormat::TemporalEdgeList) {
            if (fields.size() < 2 || fields.size() > 3) {
                throw ParseError("line " + std::to_string(lineno) + ": expected 'src dst [ts]'", lineno);
            }
            const EventTime ts = fields.size() == 3 ? parse_number<EventTime>(fields[2], lineno, "timestamp")
                                                    : static_cast<EventTime>(ds.lines - 1);
            const VertexId s = touch(fields[0], ts);
            const VertexId d = touch(fields[1], ts);
            push(GraphEvent::edge(EventOp::Create, s, d, ts));
            ++ds.edge_events;
            continue;
        }
        const std::string_view tag = fields[0];
        if (tag == "e" || tag == "d") {
            if (fields.size() != 4) throw ParseError("line " + std::to_string(lineno) + ": expected '" + std::string(tag) + " src dst ts'", lineno);
            const EventTime ts = parse_number<EventTime>(fields[3], lineno, "timestamp");
            const VertexId s = touch(fields[1], ts);
            const VertexId d = touch(fields[2], ts);
            push(GraphEvent::edge(tag == "e" ? EventOp::Create : EventOp::Delete, s, d, ts));
            ++ds.edge_events;
        } else if (tag == "f") {
            if (fields.size() != 3 + spec.feature_dim) {
                throw ParseError("line " + std::to_string(lineno) + ": feature needs " + std::to_string(spec.feature_dim) +
                                     " values, got " + std::to_string(fields.size() < 3 ? 0 : fields.size() - 3),
                                 lineno);
            }
            const EventTime ts = parse_number<EventTime>(fields[2], lineno, "timestamp");
            const VertexId v = touch(fields[1], ts);
            std::vector<double> values;
            for (std::size_t i = 3; i < fields.size(); ++i) values.push_back(parse_real(fields[i], lineno));
            has_feature[v] = true;
            push(GraphEvent::feature(EventOp::Create, v, Tensor::vector(std::move(values)), ts));
        } else if (tag == "l") {
            if (fields.size() != 4 && fields.size() != 5) {
                throw ParseError("line " + std::to_string(lineno) + ": expected 'l v ts label [train]'", lineno);
            }
            const EventTime ts = parse_number<EventTime>(fields[2], lineno, "timestamp");
            const VertexId v = touch(fields[1], ts);
            const auto label = parse_number<std::int64_t>(fields[3], lineno, "label");
            const bool train = fields.size() == 5 ? parse_number<int>(fields[4], lineno, "train flag") != 0 : true;
            push(GraphEvent::train_mask(v, train, ts));
            push(GraphEvent::label(v, label, ts));
            ++ds.label_events;
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown record tag '" + std::string(tag) + "'", lineno);
        }
    }

    if (labels) {
        std::size_t lno = 0;
        while (std::getline(*labels, raw)) {
            ++lno;
            const auto fields = split_fields(raw);
            if (fields.empty() || fields[0].front() == '#') continue;
            if (fields.size() < 2 || fields.size() > 4) {
                throw ParseError("labels line " + std::to_string(lno) + ": expected 'vertex label [train [ts]]'", lno);
            }
            const auto known = ds.vertices.find(fields[0]);
            EventTime ts = known ? first_seen.at(*known) : 0;
            if (fields.size() == 4) ts = parse_number<EventTime>(fields[3], lno, "timestamp");
            const VertexId v = touch(fields[0], ts);
            const auto label = parse_number<std::int64_t>(fields[1], lno, "label");
            const bool train = fields.size() >= 3 ? parse_number<int>(fields[2], lno, "train flag") != 0 : true;
            push(GraphEvent::train_mask(v, train, ts));
            push(GraphEvent::label(v, label, ts));
            ++ds.label_events;
        }
    }

    for (VertexId v = 0; v < ds.vertices.size(); ++v) {
        if (has_feature[v]) continue;
        // Synthesized features precede every other event of the vertex at its first timestamp.
        pending.push_back({GraphEvent::feature(EventOp::Create, v, synthetic_feature(spec.seed, v, spec.feature_dim),
                                               first_seen.at(v)),
                           0});
        ++ds.synthesized_features;
    }

    std::optional<EventTime> latest;
    for (const auto& p : pending) {
        if (p.order == 0) continue;
        if (latest && p.event.timestamp < *latest) ++ds.out_of_order;
        latest = std::max(latest.value_or(p.event.timestamp), p.event.timestamp);
    }
    std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
        if (a.event.timestamp != b.event.timestamp) return a.event.timestamp < b.event.timestamp;
        return a.order < b.order;
    });
    if (ds.out_of_order > 0) {
        spdlog::warn("{} events had non-monotone timestamps; stream reordered by a stable sort", ds.out_of_order);
    }
    ds.events.reserve(pending.size());
    for (auto& p : pending) ds.events.push_back(std::move(p.event));
    return ds;
}

Dataset parse_dataset(const DatasetSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) throw ConfigError("cannot open dataset '" + spec.path + "'");
    std::ifstream labels;
    if (spec.labels_path) {
        labels.open(*spec.labels_path);
        if (!labels) throw ConfigError("cannot open labels file '" + *spec.labels_path + "'");
    }
    return parse_dataset(in, spec, spec.labels_path ? &labels : nullptr);
}

void write_tagged(std::ostream& out, const std::vector<GraphEvent>& events, const VertexInterner* names) {
    auto name = [&](VertexId v) { return names ? names->name(v) : std::to_string(v); };
    std::optional<bool> pending_train;
    for (const auto& ev : events) {
        if (const auto* e = std::get_if<EdgeElement>(&ev.element)) {
            if (ev.op == EventOp::Update) continue;
            out << (ev.op == EventOp::Create ? "e " : "d ") << name(e->src.id) << ' ' << name(e->dst.id) << ' '
                << ev.timestamp << '\n';
        } else if (const auto* f = std::get_if<FeatureElement>(&ev.element)) {
            if (f->name == FeatureName::Embedding) {
                out << "f " << name(f->owner.id) << ' ' << ev.timestamp;
                std::ostringstream vals;
                vals.precision(17);
                for (double x : f->value.storage()) vals << ' ' << x;
                out << vals.str() << '\n';
            } else if (f->name == FeatureName::TrainMask) {
                pending_train = f->label != 0;
            } else if (f->name == FeatureName::Label) {
                out << "l " << name(f->owner.id) << ' ' << ev.timestamp << ' ' << f->label << ' '
                    << (pending_train.value_or(true) ? 1 : 0) << '\n';
                pending_train.reset();
            }
        } else if (std::holds_alternative<VertexElement>(ev.element)) {
            // vertex-only records have no tagged form; endpoints are created by edges and features
        }
    }
}

}  // namespace flowgnn
