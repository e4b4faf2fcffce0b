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

#include "flowgnn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flowgnn/errors.hpp"

namespace flowgnn {

namespace {

std::size_t element_count(std::span<const std::size_t> shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

void require_same(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(op) + ": shape " + a.shape_string() + " vs " + b.shape_string());
    }
}

}  // namespace

Tensor::Tensor(std::span<const std::size_t> shape) : Tensor(shape, std::vector<double>(element_count(shape), 0.0)) {}

Tensor::Tensor(std::span<const std::size_t> shape, std::vector<double> data) : data_(std::move(data)) {
    if (shape.empty() || shape.size() > 2) {
        throw DimensionError("tensor rank must be 1 or 2, got " + std::to_string(shape.size()));
    }
    rank_ = shape.size();
    std::copy(shape.begin(), shape.end(), dims_.begin());
    if (element_count(shape) != data_.size()) {
        throw DimensionError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                             shape_string());
    }
}

Tensor Tensor::vector(std::vector<double> values) {
    const std::array<std::size_t, 1> shape{values.size()};
    return Tensor(shape, std::move(values));
}

Tensor Tensor::zeros(std::size_t n) { return vector(std::vector<double>(n, 0.0)); }

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
    const std::array<std::size_t, 2> shape{rows, cols};
    return Tensor(shape, std::move(values));
}

bool Tensor::same_shape(const Tensor& other) const noexcept { return rank_ == other.rank_ && dims_ == other.dims_; }

Tensor& Tensor::operator+=(const Tensor& other) {
    require_same(*this, other, "add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
    require_same(*this, other, "sub");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Tensor& Tensor::operator*=(double scale) noexcept {
    for (double& v : data_) v *= scale;
    return *this;
}

Tensor& Tensor::axpy(double scale, const Tensor& other) {
    require_same(*this, other, "axpy");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += scale * other.data_[i];
    return *this;
}

void Tensor::fill(double value) noexcept { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Tensor::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Tensor::squared_norm() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return s;
}

std::string Tensor::shape_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rank_; ++i) {
        if (i) s += "x";
        s += std::to_string(dims_[i]);
    }
    return s + "]";
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(Tensor a, double s) { return a *= s; }

Tensor concat(const Tensor& a, const Tensor& b) {
    if (a.rank() != 1 || b.rank() != 1) throw DimensionError("concat expects vectors");
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.values().begin(), a.values().end());
    out.insert(out.end(), b.values().begin(), b.values().end());
    return Tensor::vector(std::move(out));
}

double relative_error(const Tensor& a, const Tensor& b, double floor) {
    if (!a.same_shape(b)) throw DimensionError("relative_error: shape " + a.shape_string() + " vs " + b.shape_string());
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    return diff / std::max(b.max_abs(), floor);
}

}  // namespace flowgnn
