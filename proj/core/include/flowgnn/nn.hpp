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
#include <map>
#include <utility>

#include "flowgnn/tensor.hpp"

namespace flowgnn {

enum class Activation { ReLU, Identity };

/// Gradients aligned with the parameters of one LayerModel.
struct ParamGrads {
    Tensor weight;
    Tensor bias;

    ParamGrads& operator+=(const ParamGrads& other);
    ParamGrads& operator*=(double scale);
    double squared_norm() const noexcept { return weight.squared_norm() + bias.squared_norm(); }
};

/// Per-parameter accumulators. SGD keeps the last applied update here so the shapes always mirror
/// the parameters and adaptive optimizers can reuse the slots.
struct OptimizerState {
    Tensor weight_slot;
    Tensor bias_slot;
    std::uint64_t steps = 0;
};

/// Dense parameters of one update function: activation(weight * input + bias).
struct LayerModel {
    Tensor weight;  // [out_dim x in_dim]
    Tensor bias;    // [out_dim]
    Activation activation = Activation::Identity;
    OptimizerState optimizer;
    double learning_rate = 0.01;

    std::size_t in_dim() const noexcept { return weight.cols(); }
    std::size_t out_dim() const noexcept { return weight.rows(); }

    /// Uniform(-1/sqrt(in), 1/sqrt(in)) initialisation from `seed`.
    static LayerModel create(std::size_t in_dim, std::size_t out_dim, Activation activation, double learning_rate,
                             std::uint64_t seed);
    static LayerModel from_parameters(Tensor weight, Tensor bias, Activation activation, double learning_rate = 0.01);

    ParamGrads zero_grads() const;
    /// Throws DimensionError when weight, bias and optimizer slots disagree.
    void validate() const;

    friend bool operator==(const LayerModel& a, const LayerModel& b) noexcept {
        return a.weight == b.weight && a.bias == b.bias && a.activation == b.activation;
    }
};

Tensor dense_forward(const LayerModel& model, const Tensor& input);

/// Same as dense_forward(model, concat(self, neighbours)) without materialising the concatenation.
Tensor dense_forward_concat(const LayerModel& model, const Tensor& self, const Tensor& neighbours);

struct DenseGradients {
    ParamGrads params;
    Tensor input;
};

/// Backward pass of dense_forward for a scalar loss whose gradient w.r.t. the output is `upstream`.
DenseGradients dense_backward(const LayerModel& model, const Tensor& input, const Tensor& upstream);

/// Central differences: entry i = (f(x + eps e_i) - f(x - eps e_i)) / (2 eps).
Tensor finite_difference_grad(const std::function<double(const Tensor&)>& f, const Tensor& point, double epsilon);

/// Plain SGD: W <- W - lr * grad. Mutates `model`.
void optimizer_step(LayerModel& model, const ParamGrads& grads);

struct LossResult {
    double loss = 0.0;
    Tensor logit_grad;
};

/// Softmax cross-entropy with log-sum-exp stabilisation.
LossResult cross_entropy_loss(const Tensor& logits, std::size_t label);

std::size_t argmax(const Tensor& values);

}  // namespace flowgnn
