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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "flowgnn/cli/commands.hpp"
#include "flowgnn/cli/export.hpp"

using namespace flowgnn;
using namespace flowgnn::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("flowgnn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }
    static std::string slurp(const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "flowgnn");
        out_.str("");
        err_.str("");
        return run_cli(args, out_, err_);
    }

    nlohmann::json error_json() const {
        std::string last;
        std::istringstream in(err_.str());
        for (std::string line; std::getline(in, line);)
            if (!line.empty() && line.front() == '{') last = line;
        return nlohmann::json::parse(last);
    }

    void toy() const { write("toy.txt", "a b 1\nb c 2\nc a 3\na c 4\nd a 5\n"); }
    std::vector<std::string> small() const {
        return {"--feature-dim", "4", "--hidden-dim", "4", "--embedding-dim", "3", "--max-parallelism", "8"};
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<std::string> key_paths(const nlohmann::ordered_json& j, const std::string& prefix = "") {
    std::vector<std::string> out;
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            auto sub = key_paths(v, prefix + "/" + k);
            out.insert(out.end(), sub.begin(), sub.end());
        }
    } else if (j.is_array() && !j.empty() && j.front().is_object()) {
        return key_paths(j.front(), prefix + "[]");
    } else {
        out.push_back(prefix);
    }
    return out;
}

}  // namespace

TEST_F(CliTest, InferWritesOneEmbeddingRowPerVertex) {
    toy();
    ASSERT_EQ(run(std::vector<std::string>{"infer", "--dataset", path("toy.txt"), "--out", path("out"), "--oracle-check"} +
                  small()),
              0)
        << err_.str();
    const EmbeddingTable t = read_embeddings(path("out/embeddings"));
    EXPECT_EQ(t.ids, (std::vector<std::string>{"a", "b", "c", "d"}));
    EXPECT_EQ(t.dim, 3u);
    EXPECT_EQ(t.values.size(), 12u);
    EXPECT_EQ(fs::file_size(path("out/embeddings.bin")), 12u * 8u);
    const auto doc = nlohmann::json::parse(slurp(path("out/metrics.json")));
    EXPECT_TRUE(doc["oracle"]["passed"].get<bool>());
    EXPECT_LT(doc["oracle"]["max_relative_error"].get<double>(), 1e-6);
    EXPECT_TRUE(fs::exists(path("out/metrics.csv")));
    EXPECT_TRUE(fs::exists(path("out/operators.csv")));
    EXPECT_TRUE(fs::exists(path("out/latencies.csv")));
}

TEST_F(CliTest, WindowFlagsEchoedIntoPlan) {
    toy();
    ASSERT_EQ(run(std::vector<std::string>{"infer", "--dataset", path("toy.txt"), "--out", path("out"), "--window",
                                           "tumbling", "--window-ms", "20"} +
                  small()),
              0);
    const auto doc = nlohmann::json::parse(slurp(path("out/metrics.json")));
    EXPECT_EQ(doc["plan"]["window"], "tumbling");
    EXPECT_EQ(doc["plan"]["window_ms"], "20");
    EXPECT_EQ(doc["invocation"]["flags"]["--window"], "tumbling");
}

TEST_F(CliTest, MetricsSchemaIsStable) {
    toy();
    ASSERT_EQ(run(std::vector<std::string>{"infer", "--dataset", path("toy.txt"), "--out", path("out")} + small()), 0);
    const auto doc = nlohmann::ordered_json::parse(slurp(path("out/metrics.json")));
    std::vector<std::string> top;
    for (const auto& [k, v] : doc.items()) top.push_back(k);
    EXPECT_EQ(top, (std::vector<std::string>{"invocation", "plan", "dataset", "metrics"}));
    std::vector<std::string> metrics;
    for (const auto& [k, v] : doc["metrics"].items()) metrics.push_back(k);
    EXPECT_EQ(metrics, (std::vector<std::string>{"events", "time", "throughput", "latency_ms", "imbalance", "windowing",
                                                 "messages", "training_rounds", "layers", "channels", "operators"}));
    const std::vector<std::string> golden{
        "/events/ingested", "/events/routed", "/events/dropped", "/events/expected_applications",
        "/events/applied_applications", "/events/stale_applications", "/time/virtual_runtime_ms", "/time/end_time_ms",
        "/time/probes", "/time/windows", "/throughput/embeddings_emitted", "/throughput/mean_eps",
        "/throughput/max_eps", "/throughput/bucket_ms", "/latency_ms/count", "/latency_ms/mean", "/latency_ms/stddev",
        "/latency_ms/min", "/latency_ms/p50", "/latency_ms/p95", "/latency_ms/p99", "/latency_ms/max", "/imbalance",
        "/windowing/windowed_reduces", "/windowing/max_reduces_per_window", "/messages/total", "/training_rounds"};
    auto paths = key_paths(doc["metrics"]);
    paths.erase(std::remove_if(paths.begin(), paths.end(),
                               [](const std::string& p) {
                                   return p.rfind("/layers", 0) == 0 || p.rfind("/channels", 0) == 0 ||
                                          p.rfind("/operators", 0) == 0;
                               }),
                paths.end());
    EXPECT_EQ(paths, golden);
    EXPECT_EQ(key_paths(doc["metrics"]["layers"]),
              (std::vector<std::string>{"[]/layer", "[]/applied_events", "[]/imbalance", "[]/aggregator_messages",
                                        "[]/iterative_messages", "[]/iterative_bytes"}));
    EXPECT_EQ(key_paths(doc["metrics"]["channels"]["layer2.reduce"]),
              (std::vector<std::string>{"/count", "/bytes", "/remote_count", "/remote_bytes"}));
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
    toy();
    const auto args = std::vector<std::string>{"--dataset", path("toy.txt")} + small();
    ASSERT_EQ(run(std::vector<std::string>{"infer", "--out", path("r1")} + args), 0);
    ASSERT_EQ(run(std::vector<std::string>{"infer", "--out", path("r2")} + args), 0);
    EXPECT_EQ(slurp(path("r1/embeddings.bin")), slurp(path("r2/embeddings.bin")));
    EXPECT_EQ(slurp(path("r1/operators.csv")), slurp(path("r2/operators.csv")));
    auto strip = [](nlohmann::json j) {
        j.erase("invocation");
        return j;
    };
    EXPECT_EQ(strip(nlohmann::json::parse(slurp(path("r1/metrics.json")))),
              strip(nlohmann::json::parse(slurp(path("r2/metrics.json")))));
}

TEST_F(CliTest, EmptyDatasetTerminates) {
    write("empty.txt", "");
    ASSERT_EQ(run(std::vector<std::string>{"infer", "--dataset", path("empty.txt"), "--out", path("out")} + small()), 0);
    EXPECT_TRUE(read_embeddings(path("out/embeddings")).ids.empty());
}

TEST_F(CliTest, ErrorsAreMachineReadable) {
    write("bad.txt", "a b 1\nnonsense\n");
    EXPECT_EQ(run({"infer", "--dataset", path("bad.txt"), "--out", path("out")}), 1);
    auto e = error_json();
    EXPECT_EQ(e["error"]["kind"], "parse");
    EXPECT_EQ(e["error"]["line"], 2);

    toy();
    EXPECT_EQ(run({"infer", "--dataset", path("toy.txt"), "--set", "colour=blue"}), 1);
    EXPECT_EQ(error_json()["error"]["kind"], "config");

    EXPECT_EQ(run({"infer"}), 2);
    EXPECT_EQ(run({"frobnicate"}), 2);
    EXPECT_EQ(run({"infer", "--dataset", path("missing.txt")}), 1);
}

TEST_F(CliTest, ConfigFileThenOverrides) {
    write("run.conf", "layers = 3\nparallelism = 2\nlambda = 2\nmax_parallelism = 8\n");
    const PipelinePlan plan = resolve_plan(path("run.conf"), {"parallelism=1"});
    EXPECT_EQ(plan.num_layers, 3u);
    EXPECT_EQ(plan.base_parallelism, 1u);
    EXPECT_EQ(plan.layer_parallelism(), (std::vector<std::uint32_t>{1, 2, 4}));
}

TEST_F(CliTest, TrainRequiresLabels) {
    toy();
    EXPECT_EQ(run(std::vector<std::string>{"train", "--dataset", path("toy.txt"), "--out", path("out")} + small()), 1);
    EXPECT_EQ(error_json()["error"]["kind"], "config");
}

TEST_F(CliTest, TrainReachesHighAccuracyOnTwoClusters) {
    ASSERT_EQ(run({"generate", "--shape", "two-cluster", "--vertices", "60", "--edges", "400", "--feature-dim", "4",
                   "--labels", "-o", path("tc.txt")}),
              0);
    ASSERT_EQ(run(std::vector<std::string>{"train", "--dataset", path("tc.txt"), "--format", "tagged", "--out",
                                           path("out"), "--epochs", "40", "--learning-rate", "0.5", "--parallelism",
                                           "2"} +
                  small()),
              0)
        << err_.str();
    const auto summary = nlohmann::json::parse(out_.str());
    EXPECT_GT(summary["final_accuracy"].get<double>(), 0.9);
    std::ifstream log(path("out/loss.jsonl"));
    std::size_t lines = 0;
    for (std::string line; std::getline(log, line);) ++lines;
    EXPECT_EQ(lines, 40u);
    EXPECT_TRUE(fs::exists(path("out/model.json")));
}

TEST_F(CliTest, TrainTriggerAboveLabelsWarnsAndFinishes) {
    ASSERT_EQ(run({"generate", "--shape", "two-cluster", "--vertices", "20", "--edges", "60", "--feature-dim", "4",
                   "--labels", "-o", path("tc.txt")}),
              0);
    ASSERT_EQ(run(std::vector<std::string>{"train", "--dataset", path("tc.txt"), "--format", "tagged", "--out",
                                           path("out"), "--trigger", "1000"} +
                  small()),
              0);
    EXPECT_NE(err_.str().find("training never started"), std::string::npos);
    EXPECT_EQ(nlohmann::json::parse(out_.str())["rounds"], 0);
}

TEST_F(CliTest, PartitionSinglePartHasNoReplication) {
    ASSERT_EQ(run({"generate", "--shape", "powerlaw", "--edges", "300", "-o", path("pl.txt")}), 0);
    ASSERT_EQ(run({"partition", "--dataset", path("pl.txt"), "--format", "tagged", "--num-partitions", "1",
                   "--feature-dim", "8", "--out", path("out")}),
              0);
    const auto doc = nlohmann::json::parse(slurp(path("out/partition.json")));
    EXPECT_DOUBLE_EQ(doc["report"]["replication_factor"].get<double>(), 1.0);
}

TEST_F(CliTest, PartitionReportFieldsFinite) {
    ASSERT_EQ(run({"generate", "--shape", "hub", "--edges", "300", "-o", path("hub.txt")}), 0);
    for (const std::string alg : {"hdrf", "clda", "random"}) {
        ASSERT_EQ(run({"partition", "--dataset", path("hub.txt"), "--format", "tagged", "--partitioner", alg,
                       "--num-partitions", "8", "--feature-dim", "8", "--out", path("out")}),
                  0);
        const auto doc = nlohmann::json::parse(slurp(path("out/partition.json")));
        std::function<void(const nlohmann::json&)> finite = [&](const nlohmann::json& j) {
            if (j.is_number()) EXPECT_TRUE(std::isfinite(j.get<double>()));
            if (j.is_structured())
                for (const auto& v : j) finite(v);
        };
        finite(doc["report"]);
        EXPECT_GE(doc["report"]["replication_factor"].get<double>(), 1.0);
    }
}

TEST_F(CliTest, WcountPerPartBatch) {
    EXPECT_EQ(wcount_part_batch(2000, 4), 500);
    EXPECT_EQ(wcount_part_batch(2000, 1), 2000);
    ASSERT_EQ(run({"generate", "--edges", "600", "--feature-dim", "4", "-o", path("er.txt")}), 0);
    ASSERT_EQ(run(std::vector<std::string>{"bench", "--dataset", path("er.txt"), "--format", "tagged", "--wcount", "200",
                                           "--parallelism", "4", "--out", path("out")} +
                  small()),
              0)
        << err_.str();
    const std::string csv = slurp(path("out/bench.csv"));
    EXPECT_NE(csv.find(",50\n"), std::string::npos) << csv;
}

TEST_F(CliTest, EmptyMatrixWritesHeaderOnly) {
    toy();
    write("empty.matrix", "\n# nothing\n");
    ASSERT_EQ(run(std::vector<std::string>{"bench", "--dataset", path("toy.txt"), "--matrix", path("empty.matrix"),
                                           "--out", path("out")} +
                  small()),
              0);
    const std::string csv = slurp(path("out/bench.csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
    EXPECT_EQ(csv.rfind("name,status,", 0), 0u);
}

TEST_F(CliTest, MatrixFailuresAreRecorded) {
    toy();
    write("m.matrix", "good layers=2\nbad window=sliding\n");
    ASSERT_EQ(run(std::vector<std::string>{"bench", "--dataset", path("toy.txt"), "--matrix", path("m.matrix"), "--out",
                                           path("out")} +
                  small()),
              0);
    const std::string csv = slurp(path("out/bench.csv"));
    EXPECT_NE(csv.find("\"good\",\"ok\","), std::string::npos);
    EXPECT_NE(csv.find("\"bad\",\"error"), std::string::npos);
}

TEST_F(CliTest, SweepExpansion) {
    const auto cases = expand_sweeps({"lambda=1,3", "window=streaming,tumbling"});
    ASSERT_EQ(cases.size(), 4u);
    EXPECT_EQ(cases[0].overrides, (std::vector<std::string>{"lambda=1", "window=streaming"}));
    EXPECT_EQ(cases[3].overrides, (std::vector<std::string>{"lambda=3", "window=tumbling"}));
    const auto m = parse_matrix("fast parallelism=2 lambda=3\n\nlayers=3\n");
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[0].name, "fast");
    EXPECT_EQ(m[1].overrides, (std::vector<std::string>{"layers=3"}));
}

TEST(LatencySummary, NearestRank) {
    const auto s = summarize_latencies({5, 1, 4, 2, 3});
    EXPECT_DOUBLE_EQ(s.p50, 3.0);
    EXPECT_DOUBLE_EQ(s.min, 1.0);
    EXPECT_DOUBLE_EQ(s.max, 5.0);
    EXPECT_DOUBLE_EQ(s.mean, 3.0);
}
