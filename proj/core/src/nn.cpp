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

#include "flowgnn/nn.hpp"

#include <cmath>
#include <random>

#include "flowgnn/errors.hpp"

namespace flowgnn {

ParamGrads& ParamGrads::operator+=(const ParamGrads& other) {
    weight += other.weight;
    bias += other.bias;
    return *this;
}

ParamGrads& ParamGrads::operator*=(double scale) {
    weight *= scale;
    bias *= scale;
    return *this;
}

LayerModel LayerModel::create(std::size_t in_dim, std::size_t out_dim, Activation activation, double learning_rate,
                              std::uint64_t seed) {
    if (in_dim == 0 || out_dim == 0) throw DimensionError("layer dimensions must be positive");
    std::mt19937_64 rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> w(in_dim * out_dim);
    for (double& v : w) v = dist(rng);
    std::vector<double> b(out_dim);
    for (double& v : b) v = dist(rng);
    return from_parameters(Tensor::matrix(out_dim, in_dim, std::move(w)), Tensor::vector(std::move(b)), activation,
                           learning_rate);
}

LayerModel LayerModel::from_parameters(Tensor weight, Tensor bias, Activation activation, double learning_rate) {
    if (!(learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
    LayerModel m;
    m.weight = std::move(weight);
    m.bias = std::move(bias);
    m.activation = activation;
    m.learning_rate = learning_rate;
    m.optimizer.weight_slot = Tensor(m.weight.shape());
    m.optimizer.bias_slot = Tensor(m.bias.shape());
    m.validate();
    return m;
}

ParamGrads LayerModel::zero_grads() const { return ParamGrads{Tensor(weight.shape()), Tensor(bias.shape())}; }

void LayerModel::validate() const {
    if (weight.rank() != 2 || bias.rank() != 1 || bias.size() != weight.rows()) {
        throw DimensionError("weight " + weight.shape_string() + " and bias " + bias.shape_string() + " disagree");
    }
    if (!optimizer.weight_slot.same_shape(weight) || !optimizer.bias_slot.same_shape(bias)) {
        throw DimensionError("optimizer state does not mirror parameter shapes");
    }
}

namespace {

inline double activate(Activation a, double z) { return a == Activation::ReLU ? (z > 0.0 ? z : 0.0) : z; }

void check_grads(const LayerModel& model, const ParamGrads& grads) {
    if (!grads.weight.same_shape(model.weight) || !grads.bias.same_shape(model.bias)) {
        throw DimensionError("gradient shapes " + grads.weight.shape_string() + "/" + grads.bias.shape_string() +
                             " do not match model " + model.weight.shape_string());
    }
}

}  // namespace

Tensor dense_forward(const LayerModel& model, const Tensor& input) {
    if (input.rank() != 1 || input.size() != model.in_dim()) {
        throw DimensionError("dense_forward: input " + input.shape_string() + " vs in_dim " +
                             std::to_string(model.in_dim()));
    }
    const std::size_t out = model.out_dim();
    const std::size_t in = model.in_dim();
    Tensor result = Tensor::zeros(out);
    const double* w = model.weight.values().data();
    for (std::size_t r = 0; r < out; ++r) {
        double acc = model.bias[r];
        const double* row = w + r * in;
        for (std::size_t c = 0; c < in; ++c) acc += row[c] * input[c];
        result[r] = activate(model.activation, acc);
    }
    return result;
}

Tensor dense_forward_concat(const LayerModel& model, const Tensor& self, const Tensor& neighbours) {
    const std::size_t ns = self.size();
    if (self.rank() != 1 || neighbours.rank() != 1 || ns + neighbours.size() != model.in_dim()) {
        throw DimensionError("dense_forward_concat: inputs " + self.shape_string() + "+" + neighbours.shape_string() +
                             " vs in_dim " + std::to_string(model.in_dim()));
    }
    const std::size_t out = model.out_dim();
    const std::size_t in = model.in_dim();
    Tensor result = Tensor::zeros(out);
    const double* w = model.weight.values().data();
    for (std::size_t r = 0; r < out; ++r) {
        double acc = model.bias[r];
        const double* row = w + r * in;
        for (std::size_t c = 0; c < ns; ++c) acc += row[c] * self[c];
        for (std::size_t c = ns; c < in; ++c) acc += row[c] * neighbours[c - ns];
        result[r] = activate(model.activation, acc);
    }
    return result;
}

DenseGradients dense_backward(const LayerModel& model, const Tensor& input, const Tensor& upstream) {
    const std::size_t out = model.out_dim();
    const std::size_t in = model.in_dim();
    if (input.rank() != 1 || input.size() != in) throw DimensionError("dense_backward: input " + input.shape_string());
    if (upstream.rank() != 1 || upstream.size() != out) {
        throw DimensionError("dense_backward: upstream " + upstream.shape_string() + " vs out_dim " +
                             std::to_string(out));
    }
    // Gradient w.r.t. the pre-activation.
    std::vector<double> dz(out);
    for (std::size_t r = 0; r < out; ++r) {
        if (model.activation == Activation::ReLU) {
            double z = model.bias[r];
            for (std::size_t c = 0; c < in; ++c) z += model.weight.at(r, c) * input[c];
            dz[r] = z > 0.0 ? upstream[r] : 0.0;
        } else {
            dz[r] = upstream[r];
        }
    }
    DenseGradients g{model.zero_grads(), Tensor::zeros(in)};
    for (std::size_t r = 0; r < out; ++r) {
        g.params.bias[r] = dz[r];
        if (dz[r] == 0.0) continue;
        for (std::size_t c = 0; c < in; ++c) {
            g.params.weight.at(r, c) = dz[r] * input[c];
            g.input[c] += model.weight.at(r, c) * dz[r];
        }
    }
    return g;
}

Tensor finite_difference_grad(const std::function<double(const Tensor&)>& f, const Tensor& point, double epsilon) {
    if (!(epsilon > 0.0)) throw ArgumentError("finite_difference_grad: epsilon must be positive");
    Tensor grad(point.shape());
    Tensor probe = point;
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double original = probe[i];
        probe[i] = original + epsilon;
        const double up = f(probe);
        probe[i] = original - epsilon;
        const double down = f(probe);
        probe[i] = original;
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw NumericError("finite_difference_grad: non-finite evaluation at coordinate " + std::to_string(i));
        }
        grad[i] = (up - down) / (2.0 * epsilon);
    }
    return grad;
}

void optimizer_step(LayerModel& model, const ParamGrads& grads) {
    check_grads(model, grads);
    const double lr = model.learning_rate;
    for (std::size_t i = 0; i < model.weight.size(); ++i) {
        model.optimizer.weight_slot[i] = lr * grads.weight[i];
        model.weight[i] -= model.optimizer.weight_slot[i];
    }
    for (std::size_t i = 0; i < model.bias.size(); ++i) {
        model.optimizer.bias_slot[i] = lr * grads.bias[i];
        model.bias[i] -= model.optimizer.bias_slot[i];
    }
    ++model.optimizer.steps;
}

LossResult cross_entropy_loss(const Tensor& logits, std::size_t label) {
    if (logits.rank() != 1 || logits.empty()) throw DimensionError("cross_entropy_loss: logits must be a vector");
    if (label >= logits.size()) {
        throw ArgumentError("cross_entropy_loss: label " + std::to_string(label) + " out of range for " +
                            std::to_string(logits.size()) + " classes");
    }
    double top = logits[0];
    for (double v : logits.values()) top = std::max(top, v);
    double denom = 0.0;
    for (double v : logits.values()) denom += std::exp(v - top);
    const double log_denom = std::log(denom);
    LossResult out{0.0, Tensor::zeros(logits.size())};
    for (std::size_t i = 0; i < logits.size(); ++i) out.logit_grad[i] = std::exp(logits[i] - top - log_denom);
    out.logit_grad[label] -= 1.0;
    out.loss = std::max(0.0, log_denom - (logits[label] - top));
    return out;
}

std::size_t argmax(const Tensor& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

}  // namespace flowgnn
