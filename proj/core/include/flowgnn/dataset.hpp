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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "flowgnn/graph.hpp"

namespace flowgnn {

/// `TemporalEdgeList`: one "src dst [ts]" per line.
/// `EdgeListWithFeatures`: tagged lines "e src dst ts", "d src dst ts", "f v ts x1 .. xd",
/// "l v ts label [train]".
enum class DatasetFormat { TemporalEdgeList, EdgeListWithFeatures };

DatasetFormat parse_dataset_format(std::string_view name);
std::string_view dataset_format_name(DatasetFormat f) noexcept;

struct DatasetSpec {
    std::string path;
    DatasetFormat format = DatasetFormat::TemporalEdgeList;
    std::size_t feature_dim = 64;
    /// Optional sidecar of "vertex label [train [ts]]" lines.
    std::optional<std::string> labels_path;
    /// Seed of synthesized features for vertices the file gives none.
    std::uint64_t seed = 42;
};

/// Maps external vertex names to dense ids in first-seen order.
class VertexInterner {
  public:
    VertexId intern(std::string_view name);
    std::optional<VertexId> find(std::string_view name) const;
    const std::string& name(VertexId id) const { return names_.at(id); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::size_t size() const noexcept { return names_.size(); }

  private:
    std::unordered_map<std::string, VertexId> ids_;
    std::vector<std::string> names_;
};

struct Dataset {
    std::vector<GraphEvent> events;
    VertexInterner vertices;
    std::size_t lines = 0;        // non-blank, non-comment input lines
    std::size_t edge_events = 0;  // edge creates and deletes
    std::size_t label_events = 0;
    std::size_t synthesized_features = 0;
    /// Events that arrived with a timestamp below an earlier one and were moved by the stable sort.
    std::size_t out_of_order = 0;
};

/// Deterministic per-vertex feature in [-1, 1)^dim.
Tensor synthetic_feature(std::uint64_t seed, VertexId vertex, std::size_t dim);

Dataset parse_dataset(const DatasetSpec& spec);
/// Parses from streams; `labels` may be null. Throws ParseError with the offending 1-based line.
Dataset parse_dataset(std::istream& in, const DatasetSpec& spec, std::istream* labels = nullptr);

/// Writes events in the tagged format, naming vertices through `names` when given.
void write_tagged(std::ostream& out, const std::vector<GraphEvent>& events, const VertexInterner* names = nullptr);

}  // namespace flowgnn
