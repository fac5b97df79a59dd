// SPDX-License-Identifier: Apache-2.0
#include "relic/dense.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <random>

namespace relic {

namespace {
int64_t shape_product(const std::vector<int64_t> &shape) {
    int64_t n = 1;
    for (int64_t d : shape) {
        if (d < 0) {
            throw std::invalid_argument("tensor dimension must be non-negative");
        }
        n *= d; // zero-size dims are legal for runtime values (empty caches)
    }
    return n;
}
} // namespace

DenseTensor::DenseTensor(std::vector<int64_t> shape)
    : shape_(std::move(shape)), data_(static_cast<size_t>(shape_product(shape_)), 0.0f) {}

DenseTensor::DenseTensor(std::vector<int64_t> shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (static_cast<int64_t>(data_.size()) != shape_product(shape_)) {
        throw std::invalid_argument("tensor data length does not match shape");
    }
}

DenseTensor DenseTensor::zeros(std::vector<int64_t> shape) {
    return DenseTensor(std::move(shape));
}

DenseTensor DenseTensor::full(std::vector<int64_t> shape, float value) {
    DenseTensor t(std::move(shape));
    for (auto &v : t.values()) {
        v = value;
    }
    return t;
}

DenseTensor DenseTensor::reshaped(std::vector<int64_t> shape) const {
    if (shape_product(shape) != size()) {
        throw std::invalid_argument("reshape changes element count");
    }
    return DenseTensor(std::move(shape), data_);
}

size_t DenseTensor::offset(std::initializer_list<int64_t> idx) const {
    if (idx.size() != shape_.size()) {
        throw std::invalid_argument("index rank mismatch");
    }
    size_t off = 0;
    size_t axis = 0;
    for (int64_t i : idx) {
        off = off * static_cast<size_t>(shape_[axis]) + static_cast<size_t>(i);
        ++axis;
    }
    return off;
}

double max_abs_diff(const DenseTensor &a, const DenseTensor &b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (int64_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(static_cast<double>(a.data()[i]) - b.data()[i]));
    }
    return m;
}

namespace {
// Stable per-tensor stream: seed combined with an FNV hash of the tag.
std::mt19937_64 seeded_stream(uint64_t seed, const std::string &tag) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(h), static_cast<uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}
} // namespace

DenseTensor random_normal(std::vector<int64_t> shape, uint64_t seed, const std::string &tag,
                          double stddev) {
    auto rng = seeded_stream(seed, tag);
    std::normal_distribution<double> dist(0.0, stddev);
    DenseTensor t(std::move(shape));
    for (int64_t i = 0; i < t.size(); ++i) {
        t.data()[i] = static_cast<float>(dist(rng));
    }
    return t;
}

DenseTensor random_uniform(std::vector<int64_t> shape, uint64_t seed, const std::string &tag,
                           double lo, double hi) {
    auto rng = seeded_stream(seed, tag);
    std::uniform_real_distribution<double> dist(lo, hi);
    DenseTensor t(std::move(shape));
    for (int64_t i = 0; i < t.size(); ++i) {
        t.data()[i] = static_cast<float>(dist(rng));
    }
    return t;
}

} // namespace relic
