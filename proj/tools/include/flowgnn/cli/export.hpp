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

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowgnn/dataset.hpp"
#include "flowgnn/metrics.hpp"
#include "flowgnn/pipeline.hpp"

namespace flowgnn::cli {

using Json = nlohmann::ordered_json;

struct LatencySummary {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
    double max = 0.0;
};

/// Nearest-rank percentiles over a copy of the samples.
LatencySummary summarize_latencies(std::vector<double> samples);

struct ThroughputSummary {
    double mean_eps = 0.0;  // final-layer representations per virtual second over the run
    double max_eps = 0.0;   // best throughput bucket
};

ThroughputSummary summarize_throughput(const RunMetrics& m);

/// Deterministic metrics document: counts, virtual times and per-channel traffic only.
Json metrics_json(const RunMetrics& m);
Json plan_json(const PipelinePlan& plan);
Json training_json(const TrainingReport& report);
Json partition_json(const PartitionerState& state);
Json model_json(const Pipeline& pipeline);

/// `<prefix>.bin`: little-endian float64 rows in ascending id order; `<prefix>.ids`: one name per row.
void write_embeddings(const std::string& prefix, const std::map<VertexId, Tensor>& embeddings,
                      const VertexInterner* names);

struct EmbeddingTable {
    std::vector<std::string> ids;
    std::size_t dim = 0;
    std::vector<double> values;  // row-major
};
EmbeddingTable read_embeddings(const std::string& prefix);

/// Flattens nested objects to "a.b.c,value" rows; arrays are skipped.
void write_flat_csv(const std::string& path, const Json& doc);
void write_operators_csv(const std::string& path, const RunMetrics& m);
/// One row per final-layer emission, in emission order.
void write_latencies_csv(const std::string& path, const RunMetrics& m);
void write_json(const std::string& path, const Json& doc);

}  // namespace flowgnn::cli
