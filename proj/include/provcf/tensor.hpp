#pragma once

#include <cstddef>
#include <vector>

#include "provcf/errors.hpp"

namespace provcf {

// Dense row-major matrix of doubles. Vectors are n×1 or 1×n.
struct Tensor {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;
    bool requires_grad = false;
    std::vector<double> grad; // same length as data when requires_grad

    Tensor() = default;
    Tensor(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    static Tensor zeros(std::size_t r, std::size_t c) { return Tensor(r, c); }

    static Tensor full(std::size_t r, std::size_t c, double v) {
        Tensor t(r, c);
        for (auto& x : t.data) x = v;
        return t;
    }

    static Tensor identity(std::size_t n) {
        Tensor t(n, n);
        for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
        return t;
    }

    static Tensor from(std::size_t r, std::size_t c, std::vector<double> v) {
        if (v.size() != r * c) throw shape_error("tensor", "data length does not match shape");
        Tensor t;
        t.rows = r;
        t.cols = c;
        t.data = std::move(v);
        return t;
    }

    std::size_t size() const { return rows * cols; }

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }

    void set_requires_grad() {
        requires_grad = true;
        grad.assign(size(), 0.0);
    }

    void zero_grad() {
        if (requires_grad) grad.assign(size(), 0.0);
    }
};

} // namespace provcf
