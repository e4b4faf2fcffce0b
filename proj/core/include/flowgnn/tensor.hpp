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

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace flowgnn {

/// Dense row-major tensor of 64-bit reals. Rank 1 (vectors) and rank 2 (matrices) are supported,
/// which covers every feature, message, aggregate and parameter in the engine.
class Tensor {
  public:
    Tensor() = default;

    /// Zero-filled tensor of the given shape.
    explicit Tensor(std::span<const std::size_t> shape);
    Tensor(std::initializer_list<std::size_t> shape) : Tensor(std::span<const std::size_t>(shape.begin(), shape.size())) {}
    Tensor(std::span<const std::size_t> shape, std::vector<double> data);

    static Tensor vector(std::vector<double> values);
    static Tensor zeros(std::size_t n);
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::span<const std::size_t> shape() const noexcept { return {dims_.data(), rank_}; }
    std::size_t rank() const noexcept { return rank_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t rows() const noexcept { return rank_ == 0 ? 0 : dims_[0]; }
    std::size_t cols() const noexcept { return rank_ == 2 ? dims_[1] : 1; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    const std::vector<double>& storage() const noexcept { return data_; }

    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }
    double& at(std::size_t r, std::size_t c) noexcept { return data_[r * dims_[1] + c]; }
    double at(std::size_t r, std::size_t c) const noexcept { return data_[r * dims_[1] + c]; }

    bool same_shape(const Tensor& other) const noexcept;

    Tensor& operator+=(const Tensor& other);
    Tensor& operator-=(const Tensor& other);
    Tensor& operator*=(double scale) noexcept;
    /// this += scale * other
    Tensor& axpy(double scale, const Tensor& other);
    void fill(double value) noexcept;

    bool all_finite() const noexcept;
    double max_abs() const noexcept;
    double squared_norm() const noexcept;

    friend bool operator==(const Tensor& a, const Tensor& b) noexcept {
        return a.rank_ == b.rank_ && a.dims_ == b.dims_ && a.data_ == b.data_;
    }

    std::string shape_string() const;

  private:
    std::array<std::size_t, 2> dims_{0, 0};
    std::size_t rank_ = 0;
    std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(Tensor a, double s);

/// Concatenation of two vectors.
Tensor concat(const Tensor& a, const Tensor& b);

/// Normwise relative difference: max|a-b| / max(max|b|, floor).
double relative_error(const Tensor& a, const Tensor& b, double floor = 1e-12);

}  // namespace flowgnn
