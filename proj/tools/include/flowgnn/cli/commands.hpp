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
#include <string>
#include <vector>

#include "flowgnn/config.hpp"
#include "flowgnn/metrics.hpp"
#include "flowgnn/pipeline.hpp"

namespace flowgnn::cli {

/// Entry point shared by the executable and the tests. `args[0]` is the program name.
/// Exit codes: 0 success, 1 runtime or configuration error, 2 usage error, 3 oracle mismatch.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Defaults, then the config file, then `key=value` overrides in order. Validates the result.
PipelinePlan resolve_plan(const std::string& config_path, const std::vector<std::string>& overrides);

/// Edges each sub-operator of the first layer receives from one fixed-size batch.
std::int64_t wcount_part_batch(std::int64_t batch, std::uint32_t parallelism);

/// Releases `batch` edges at a time, running to quiescence after each batch.
RunMetrics run_wcount(Pipeline& pipeline, std::vector<GraphEvent> events, std::int64_t batch);

struct BenchCase {
    std::string name;
    std::vector<std::string> overrides;  // key=value
};

/// One case per non-blank line "name key=value ..."; a line of bare settings is named after them.
std::vector<BenchCase> parse_matrix(const std::string& text);
/// Cartesian product of "key=v1,v2,..." sweeps, first sweep varying slowest.
std::vector<BenchCase> expand_sweeps(const std::vector<std::string>& sweeps);

struct BenchRow {
    std::string name;
    std::string status = "ok";
    double virtual_runtime_ms = 0.0;
    double throughput_mean_eps = 0.0;
    double throughput_max_eps = 0.0;
    double imbalance = 0.0;
    std::uint64_t layer2_reduce_messages = 0;
    std::uint64_t layer2_messages = 0;
    std::uint64_t layer2_bytes = 0;
    std::uint64_t embeddings = 0;
    double latency_p50_ms = 0.0;
    std::int64_t per_part_batch = 0;
};

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace flowgnn::cli
