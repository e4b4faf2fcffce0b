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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "flowgnn/errors.hpp"
#include "flowgnn/nn.hpp"
#include "flowgnn/tensor.hpp"

using namespace flowgnn;

namespace {

Tensor random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return Tensor::vector(std::move(v));
}

LayerModel random_model(std::uint64_t seed, std::size_t in, std::size_t out, Activation a) {
    return LayerModel::create(in, out, a, 0.01, seed);
}

LayerModel identity2(Activation a) {
    return LayerModel::from_parameters(Tensor::matrix(2, 2, {1, 0, 0, 1}), Tensor::vector({0, 0}), a);
}

double rel(const Tensor& a, const Tensor& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::fabs(a[i] - b[i]));
        den = std::max(den, std::fabs(b[i]));
    }
    return num / std::max(den, 1e-12);
}

}  // namespace

TEST(Tensor, ShapeAndDataAgree) {
    Tensor m = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m.cols(), 3u);
    EXPECT_EQ(m.size(), 6u);
    EXPECT_DOUBLE_EQ(m.at(1, 2), 6.0);
    EXPECT_THROW(Tensor::matrix(2, 2, {1, 2, 3}), DimensionError);
}

TEST(Tensor, ArithmeticRejectsShapeMismatch) {
    Tensor a = Tensor::vector({1, 2});
    Tensor b = Tensor::vector({1, 2, 3});
    EXPECT_THROW(a += b, DimensionError);
    EXPECT_THROW(concat(a, Tensor::matrix(1, 1, {1})), DimensionError);
    EXPECT_EQ(concat(a, b).size(), 5u);
}

TEST(DenseForward, IdentityWeightsPassThrough) {
    EXPECT_EQ(dense_forward(identity2(Activation::Identity), Tensor::vector({3, -4})), Tensor::vector({3, -4}));
}

TEST(DenseForward, ReluClampsNegatives) {
    EXPECT_EQ(dense_forward(identity2(Activation::ReLU), Tensor::vector({3, -4})), Tensor::vector({3, 0}));
}

TEST(DenseForward, MatchesScalarLoops) {
    const LayerModel m = random_model(7, 5, 4, Activation::ReLU);
    std::mt19937_64 rng(8);
    const Tensor x = random_vector(rng, 5);
    const Tensor y = dense_forward(m, x);
    for (std::size_t r = 0; r < 4; ++r) {
        double z = m.bias[r];
        for (std::size_t c = 0; c < 5; ++c) z += m.weight.at(r, c) * x[c];
        EXPECT_NEAR(y[r], std::max(z, 0.0), 1e-15);
    }
}

TEST(DenseForward, ConcatVariantEqualsExplicitConcatenation) {
    const LayerModel m = random_model(3, 6, 2, Activation::Identity);
    std::mt19937_64 rng(4);
    const Tensor a = random_vector(rng, 3);
    const Tensor b = random_vector(rng, 3);
    EXPECT_EQ(dense_forward_concat(m, a, b), dense_forward(m, concat(a, b)));
}

TEST(DenseForward, RejectsWrongInputLength) {
    EXPECT_THROW(dense_forward(identity2(Activation::Identity), Tensor::vector({1, 2, 3})), DimensionError);
}

TEST(DenseForward, BitIdenticalOnRepeat) {
    const LayerModel m = random_model(11, 8, 8, Activation::ReLU);
    std::mt19937_64 rng(12);
    const Tensor x = random_vector(rng, 8);
    EXPECT_EQ(dense_forward(m, x), dense_forward(m, x));
}

TEST(DenseBackward, IdentityJacobian) {
    const auto g = dense_backward(identity2(Activation::Identity), Tensor::vector({0.3, 0.7}), Tensor::vector({1, 1}));
    EXPECT_EQ(g.input, Tensor::vector({1, 1}));
}

TEST(DenseBackward, ReluMasksInactiveUnits) {
    const LayerModel m = LayerModel::from_parameters(Tensor::matrix(2, 2, {1, 2, 3, 4}), Tensor::vector({0, 0}),
                                                     Activation::ReLU);
    // pre-activation [-1, 2]: solve W x = [-1, 2] -> x = [4, -2.5]
    const Tensor x = Tensor::vector({4, -2.5});
    const auto pre = Tensor::vector({1 * 4 + 2 * -2.5, 3 * 4 + 4 * -2.5});
    ASSERT_DOUBLE_EQ(pre[0], -1.0);
    ASSERT_DOUBLE_EQ(pre[1], 2.0);
    const auto g = dense_backward(m, x, Tensor::vector({5, 5}));
    // W^T [0, 5]
    EXPECT_EQ(g.input, Tensor::vector({15, 20}));
    EXPECT_EQ(g.params.bias, Tensor::vector({0, 5}));
}

TEST(DenseBackward, MatchesFiniteDifferences) {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        std::mt19937_64 rng(seed);
        const std::size_t in = 1 + rng() % 16;
        const std::size_t out = 1 + rng() % 16;
        const LayerModel m = random_model(seed, in, out, seed % 2 ? Activation::ReLU : Activation::Identity);
        const Tensor x = random_vector(rng, in);
        const Tensor up = random_vector(rng, out);
        auto loss_of_output = [&](const Tensor& y) {
            double s = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) s += up[i] * y[i];
            return s;
        };
        const auto g = dense_backward(m, x, up);
        const Tensor fd_x = finite_difference_grad([&](const Tensor& p) { return loss_of_output(dense_forward(m, p)); }, x, 1e-6);
        EXPECT_LT(rel(g.input, fd_x), 1e-5) << "seed " << seed;
        const Tensor fd_w = finite_difference_grad(
            [&](const Tensor& w) {
                LayerModel probe = m;
                probe.weight = Tensor::matrix(out, in, w.storage());
                return loss_of_output(dense_forward(probe, x));
            },
            Tensor::vector(m.weight.storage()), 1e-6);
        EXPECT_LT(rel(Tensor::vector(g.params.weight.storage()), fd_w), 1e-5) << "seed " << seed;
        const Tensor fd_b = finite_difference_grad(
            [&](const Tensor& b) {
                LayerModel probe = m;
                probe.bias = b;
                return loss_of_output(dense_forward(probe, x));
            },
            m.bias, 1e-6);
        EXPECT_LT(rel(g.params.bias, fd_b), 1e-5) << "seed " << seed;
    }
}

TEST(DenseBackward, RejectsWrongUpstream) {
    EXPECT_THROW(dense_backward(identity2(Activation::Identity), Tensor::vector({1, 2}), Tensor::vector({1})),
                 DimensionError);
}

TEST(FiniteDifference, SquaredNorm) {
    const Tensor g = finite_difference_grad([](const Tensor& x) { return x.squared_norm(); }, Tensor::vector({1, 2}), 1e-5);
    EXPECT_NEAR(g[0], 2.0, 1e-8);
    EXPECT_NEAR(g[1], 4.0, 1e-8);
}

TEST(FiniteDifference, ConstantIsZero) {
    const Tensor g = finite_difference_grad([](const Tensor&) { return 3.0; }, Tensor::vector({1, 2, 3}), 1e-5);
    EXPECT_EQ(g, Tensor::vector({0, 0, 0}));
}

TEST(FiniteDifference, RejectsBadEpsilonAndNonFinite) {
    EXPECT_THROW(finite_difference_grad([](const Tensor&) { return 0.0; }, Tensor::vector({1}), 0.0), ArgumentError);
    EXPECT_THROW(finite_difference_grad([](const Tensor&) { return NAN; }, Tensor::vector({1}), 1e-3), NumericError);
}

TEST(FiniteDifference, CrossEntropyThroughDenseMatchesBackward) {
    const LayerModel m = random_model(21, 6, 3, Activation::Identity);
    std::mt19937_64 rng(22);
    const Tensor x = random_vector(rng, 6);
    const auto loss = cross_entropy_loss(dense_forward(m, x), 2);
    const auto g = dense_backward(m, x, loss.logit_grad);
    const Tensor fd = finite_difference_grad([&](const Tensor& p) { return cross_entropy_loss(dense_forward(m, p), 2).loss; }, x, 1e-6);
    EXPECT_LT(rel(g.input, fd), 1e-4);
}

TEST(Optimizer, SgdArithmetic) {
    LayerModel m = LayerModel::from_parameters(Tensor::matrix(1, 1, {1}), Tensor::vector({0}), Activation::Identity, 0.1);
    optimizer_step(m, ParamGrads{Tensor::matrix(1, 1, {1}), Tensor::vector({0})});
    EXPECT_DOUBLE_EQ(m.weight[0], 0.9);
    EXPECT_EQ(m.optimizer.steps, 1u);
}

TEST(Optimizer, ZeroGradientIsIdentity) {
    LayerModel m = random_model(5, 4, 3, Activation::ReLU);
    const LayerModel before = m;
    optimizer_step(m, m.zero_grads());
    EXPECT_EQ(m.weight, before.weight);
    EXPECT_EQ(m.bias, before.bias);
}

TEST(Optimizer, DescendsOnConvexBowl) {
    LayerModel m = LayerModel::from_parameters(Tensor::matrix(1, 1, {3}), Tensor::vector({0}), Activation::Identity, 0.1);
    auto f = [&] { return m.weight[0] * m.weight[0]; };
    double prev = f();
    for (int i = 0; i < 2; ++i) {
        optimizer_step(m, ParamGrads{Tensor::matrix(1, 1, {2 * m.weight[0]}), Tensor::vector({0})});
        EXPECT_LT(f(), prev);
        prev = f();
    }
}

TEST(Optimizer, RejectsMisalignedGrads) {
    LayerModel m = random_model(5, 4, 3, Activation::ReLU);
    EXPECT_THROW(optimizer_step(m, ParamGrads{Tensor::matrix(1, 1, {1}), Tensor::vector({0})}), DimensionError);
}

TEST(CrossEntropy, UniformLogits) {
    const auto r = cross_entropy_loss(Tensor::vector({0, 0}), 0);
    EXPECT_NEAR(r.loss, std::log(2.0), 1e-15);
    EXPECT_NEAR(r.logit_grad[0], -0.5, 1e-15);
    EXPECT_NEAR(r.logit_grad[1], 0.5, 1e-15);
}

TEST(CrossEntropy, SaturatedLogitsStayFinite) {
    const auto r = cross_entropy_loss(Tensor::vector({1000, 0}), 0);
    EXPECT_NEAR(r.loss, 0.0, 1e-12);
    const auto big = cross_entropy_loss(Tensor::vector({1e6, -1e6, 0}), 1);
    EXPECT_TRUE(std::isfinite(big.loss));
    EXPECT_GE(big.loss, 0.0);
    EXPECT_TRUE(big.logit_grad.all_finite());
}

TEST(CrossEntropy, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(3);
    const Tensor logits = random_vector(rng, 5);
    const auto r = cross_entropy_loss(logits, 1);
    const Tensor fd = finite_difference_grad([](const Tensor& z) { return cross_entropy_loss(z, 1).loss; }, logits, 1e-6);
    EXPECT_LT(rel(r.logit_grad, fd), 1e-5);
}

TEST(CrossEntropy, LabelOutOfRange) {
    EXPECT_THROW(cross_entropy_loss(Tensor::vector({0, 0}), 2), ArgumentError);
}

TEST(LayerModel, InitialisationBoundedAndSeeded) {
    const LayerModel a = random_model(9, 16, 4, Activation::ReLU);
    const LayerModel b = random_model(9, 16, 4, Activation::ReLU);
    EXPECT_EQ(a, b);
    EXPECT_LE(a.weight.max_abs(), 0.25);
    EXPECT_NE(a, random_model(10, 16, 4, Activation::ReLU));
    EXPECT_THROW(LayerModel::from_parameters(Tensor::matrix(2, 2, {1, 0, 0, 1}), Tensor::vector({0}), Activation::ReLU),
                 DimensionError);
}
