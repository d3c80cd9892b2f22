#pragma once

#include <cstddef>
#include <vector>

#include "crt/rational.hpp"

namespace crt {

/// Dense integer matrix, row-major. Rows index the codomain, columns the domain.
struct IntMat {
    size_t rows = 0, cols = 0;
    std::vector<Int> a;

    IntMat() = default;
    IntMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}

    Int& at(size_t i, size_t j) { return a[i * cols + j]; }
    Int at(size_t i, size_t j) const { return a[i * cols + j]; }

    static IntMat identity(size_t n) {
        IntMat m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool is_zero() const {
        for (Int v : a)
            if (v != 0) return false;
        return true;
    }

    friend IntMat operator*(const IntMat& x, const IntMat& y) {
        IntMat r(x.rows, y.cols);
        for (size_t i = 0; i < x.rows; ++i)
            for (size_t k = 0; k < x.cols; ++k) {
                Int v = x.at(i, k);
                if (v == 0) continue;
                for (size_t j = 0; j < y.cols; ++j)
                    r.at(i, j) = checked_add(r.at(i, j), checked_mul(v, y.at(k, j)));
            }
        return r;
    }

    friend bool operator==(const IntMat& x, const IntMat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }

    std::vector<Int> apply(const std::vector<Int>& v) const {
        std::vector<Int> r(rows, 0);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j)
                if (at(i, j) != 0) r[i] = checked_add(r[i], checked_mul(at(i, j), v[j]));
        return r;
    }
};

/// Dense matrix over the rationals, used for the divisible blocks.
struct RatMat {
    size_t rows = 0, cols = 0;
    std::vector<Rat> a;

    RatMat() = default;
    RatMat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}

    Rat& at(size_t i, size_t j) { return a[i * cols + j]; }
    const Rat& at(size_t i, size_t j) const { return a[i * cols + j]; }
};

}  // namespace crt
