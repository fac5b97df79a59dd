// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

// Row-major dense tensor. Storage is float32 to mirror what the database
// holds; arithmetic that needs it accumulates in double.
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(std::vector<int64_t> shape);
    DenseTensor(std::vector<int64_t> shape, std::vector<float> data);

    static DenseTensor zeros(std::vector<int64_t> shape);
    static DenseTensor full(std::vector<int64_t> shape, float value);

    const std::vector<int64_t> &shape() const { return shape_; }
    int64_t rank() const { return static_cast<int64_t>(shape_.size()); }
    int64_t dim(int64_t i) const { return shape_.at(static_cast<size_t>(i)); }
    int64_t size() const { return static_cast<int64_t>(data_.size()); }

    float *data() { return data_.data(); }
    const float *data() const { return data_.data(); }
    std::vector<float> &values() { return data_; }
    const std::vector<float> &values() const { return data_; }

    float &at(std::initializer_list<int64_t> idx) { return data_[offset(idx)]; }
    float at(std::initializer_list<int64_t> idx) const { return data_[offset(idx)]; }

    // Flat row/col view of a rank-2 tensor.
    float &at2(int64_t r, int64_t c) { return data_[static_cast<size_t>(r * shape_[1] + c)]; }
    float at2(int64_t r, int64_t c) const { return data_[static_cast<size_t>(r * shape_[1] + c)]; }

    DenseTensor reshaped(std::vector<int64_t> shape) const;

    bool same_shape(const DenseTensor &o) const { return shape_ == o.shape_; }

private:
    size_t offset(std::initializer_list<int64_t> idx) const;

    std::vector<int64_t> shape_;
    std::vector<float> data_;
};

// Largest absolute element-wise difference; throws on shape mismatch.
double max_abs_diff(const DenseTensor &a, const DenseTensor &b);

// Deterministic weight generation. All fixture tensors derive from one
// 64-bit seed plus the tensor name, so regeneration is order-independent.
DenseTensor random_normal(std::vector<int64_t> shape, uint64_t seed, const std::string &tag,
                          double stddev);
DenseTensor random_uniform(std::vector<int64_t> shape, uint64_t seed, const std::string &tag,
                           double lo, double hi);

} // namespace relic
