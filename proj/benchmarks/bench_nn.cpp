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

#include <benchmark/benchmark.h>

#include "flowgnn/nn.hpp"

using namespace flowgnn;

namespace {

Tensor filled(std::size_t n, double v) {
    Tensor t = Tensor::zeros(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = v + 0.01 * static_cast<double>(i);
    return t;
}

void BM_DenseForward(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const LayerModel model = LayerModel::create(dim, dim, Activation::ReLU, 0.01, 1);
    const Tensor x = filled(dim, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(dense_forward(model, x));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dim * dim));
}
BENCHMARK(BM_DenseForward)->RangeMultiplier(2)->Range(8, 128);

void BM_DenseForwardConcat(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const LayerModel model = LayerModel::create(2 * dim, dim, Activation::ReLU, 0.01, 1);
    const Tensor self = filled(dim, 0.5);
    const Tensor agg = filled(dim, -0.25);
    for (auto _ : state) benchmark::DoNotOptimize(dense_forward_concat(model, self, agg));
}
BENCHMARK(BM_DenseForwardConcat)->RangeMultiplier(2)->Range(8, 128);

void BM_DenseBackward(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const LayerModel model = LayerModel::create(dim, dim, Activation::ReLU, 0.01, 1);
    const Tensor x = filled(dim, 0.5);
    const Tensor up = filled(dim, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(dense_backward(model, x, up));
}
BENCHMARK(BM_DenseBackward)->RangeMultiplier(2)->Range(8, 128);

void BM_CrossEntropy(benchmark::State& state) {
    const Tensor logits = filled(static_cast<std::size_t>(state.range(0)), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(cross_entropy_loss(logits, 1));
}
BENCHMARK(BM_CrossEntropy)->Arg(2)->Arg(16);

}  // namespace
