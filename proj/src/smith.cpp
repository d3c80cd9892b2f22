#include "crt/smith.hpp"

#include <algorithm>
#include <cstdlib>

namespace crt {

namespace {

void swap_rows(IntMat& m, size_t i, size_t j) {
    if (i == j) return;
    for (size_t k = 0; k < m.cols; ++k) std::swap(m.at(i, k), m.at(j, k));
}

void swap_cols(IntMat& m, size_t i, size_t j) {
    if (i == j) return;
    for (size_t k = 0; k < m.rows; ++k) std::swap(m.at(k, i), m.at(k, j));
}

// row i -= q * row j
void row_sub(IntMat& m, size_t i, size_t j, Int q) {
    if (q == 0) return;
    for (size_t k = 0; k < m.cols; ++k)
        m.at(i, k) = checked_sub(m.at(i, k), checked_mul(q, m.at(j, k)));
}

void col_sub(IntMat& m, size_t i, size_t j, Int q) {
    if (q == 0) return;
    for (size_t k = 0; k < m.rows; ++k)
        m.at(k, i) = checked_sub(m.at(k, i), checked_mul(q, m.at(k, j)));
}

// nearest-integer quotient, minimizes the remainder magnitude
Int quot_near(Int a, Int b) {
    Int q = a / b;
    Int r = a - q * b;
    Int babs = b < 0 ? -b : b;
    if (2 * (r < 0 ? -r : r) > babs) q += (r < 0) == (b < 0) ? 1 : -1;
    return q;
}

}  // namespace

Smith smith_normal_form(const IntMat& m) {
    Smith s;
    s.d = m;
    s.u = IntMat::identity(m.rows);
    s.v = IntMat::identity(m.cols);
    IntMat& d = s.d;

    size_t n = std::min(m.rows, m.cols);
    for (size_t t = 0; t < n; ++t) {
        bool done = false;
        while (!done) {
            // seat the minimal nonzero entry of the trailing submatrix at (t,t)
            size_t pi = t, pj = t;
            Int best = 0;
            for (size_t i = t; i < d.rows; ++i)
                for (size_t j = t; j < d.cols; ++j) {
                    Int v = d.at(i, j) < 0 ? -d.at(i, j) : d.at(i, j);
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            if (best == 0) { done = true; break; }  // trailing block is zero
            swap_rows(d, t, pi);
            swap_rows(s.u, t, pi);
            swap_cols(d, t, pj);
            swap_cols(s.v, t, pj);

            done = true;
            for (size_t i = t + 1; i < d.rows; ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = quot_near(d.at(i, t), d.at(t, t));
                row_sub(d, i, t, q);
                row_sub(s.u, i, t, q);
                if (d.at(i, t) != 0) done = false;  // remainder; re-seat pivot
            }
            for (size_t j = t + 1; j < d.cols; ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = quot_near(d.at(t, j), d.at(t, t));
                col_sub(d, j, t, q);
                col_sub(s.v, j, t, q);
                if (d.at(t, j) != 0) done = false;
            }
            if (!done) continue;
            // pivot must divide the rest of the submatrix
            Int piv = d.at(t, t);
            for (size_t i = t + 1; i < d.rows && done; ++i)
                for (size_t j = t + 1; j < d.cols && done; ++j)
                    if (d.at(i, j) % piv != 0) {
                        // fold row i into row t and keep reducing
                        row_sub(d, t, i, -1);
                        row_sub(s.u, t, i, -1);
                        done = false;
                    }
        }
        if (d.at(t, t) == 0) break;
    }
    // sign normalization
    for (size_t i = 0; i < n; ++i) {
        if (d.at(i, i) < 0) {
            for (size_t k = 0; k < d.cols; ++k) d.at(i, k) = -d.at(i, k);
            for (size_t k = 0; k < s.u.cols; ++k) s.u.at(i, k) = -s.u.at(i, k);
        }
    }
    s.rank = 0;
    for (size_t i = 0; i < n; ++i)
        if (d.at(i, i) != 0) ++s.rank;
    return s;
}

std::vector<std::vector<Int>> kernel_lattice(const IntMat& a) {
    Smith s = smith_normal_form(a);
    std::vector<std::vector<Int>> basis;
    for (size_t j = s.rank; j < a.cols; ++j) {
        std::vector<Int> col(a.cols);
        for (size_t i = 0; i < a.cols; ++i) col[i] = s.v.at(i, j);
        basis.push_back(std::move(col));
    }
    return basis;
}

std::optional<std::vector<Int>> solve_integer(const IntMat& a, const std::vector<Int>& b) {
    Smith s = smith_normal_form(a);
    std::vector<Int> ub = s.u.apply(b);
    std::vector<Int> y(a.cols, 0);
    size_t n = std::min(a.rows, a.cols);
    for (size_t i = 0; i < a.rows; ++i) {
        Int di = i < n ? s.d.at(i, i) : 0;
        if (di == 0) {
            if (ub[i] != 0) return std::nullopt;
        } else {
            if (ub[i] % di != 0) return std::nullopt;
            y[i] = ub[i] / di;
        }
    }
    return s.v.apply(y);
}

std::optional<std::vector<Int>> solve_congruences(const IntMat& a, const std::vector<Int>& b,
                                                  const std::vector<Int>& mods) {
    // Append one slack column per row with a nonzero modulus.
    size_t slack = 0;
    for (Int m : mods)
        if (m != 0) ++slack;
    IntMat ext(a.rows, a.cols + slack);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t j = 0; j < a.cols; ++j) ext.at(i, j) = a.at(i, j);
    size_t k = a.cols;
    for (size_t i = 0; i < a.rows; ++i)
        if (mods[i] != 0) ext.at(i, k++) = mods[i];
    auto sol = solve_integer(ext, b);
    if (!sol) return std::nullopt;
    sol->resize(a.cols);
    return sol;
}

}  // namespace crt
