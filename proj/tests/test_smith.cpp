#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crt/smith.hpp"

using namespace crt;

namespace {

// Independent oracle: brute-force row/column gcd reduction without transform
// tracking. Returns the diagonal entries only.
std::vector<Int> snf_diagonal_oracle(IntMat a) {
    size_t n = std::min(a.rows, a.cols);
    std::vector<Int> diag;
    for (size_t t = 0; t < n; ++t) {
        bool any = false;
        for (size_t i = t; i < a.rows && !any; ++i)
            for (size_t j = t; j < a.cols && !any; ++j)
                if (a.at(i, j) != 0) any = true;
        if (!any) break;
        // reduce until a(t,t) divides everything in its row, column, and the rest
        bool stable = false;
        while (!stable) {
            // move the minimal nonzero entry to (t,t)
            size_t bi = t, bj = t;
            Int best = 0;
            for (size_t i = t; i < a.rows; ++i)
                for (size_t j = t; j < a.cols; ++j) {
                    Int v = a.at(i, j) < 0 ? -a.at(i, j) : a.at(i, j);
                    if (v != 0 && (best == 0 || v < best)) { best = v; bi = i; bj = j; }
                }
            for (size_t k = 0; k < a.cols; ++k) std::swap(a.at(t, k), a.at(bi, k));
            for (size_t k = 0; k < a.rows; ++k) std::swap(a.at(k, t), a.at(k, bj));
            stable = true;
            for (size_t i = t + 1; i < a.rows; ++i) {
                Int q = a.at(i, t) / a.at(t, t);
                if (q != 0)
                    for (size_t k = 0; k < a.cols; ++k) a.at(i, k) -= q * a.at(t, k);
                if (a.at(i, t) != 0) stable = false;
            }
            for (size_t j = t + 1; j < a.cols; ++j) {
                Int q = a.at(t, j) / a.at(t, t);
                if (q != 0)
                    for (size_t k = 0; k < a.rows; ++k) a.at(k, j) -= q * a.at(k, t);
                if (a.at(t, j) != 0) stable = false;
            }
            if (stable) {
                for (size_t i = t + 1; i < a.rows && stable; ++i)
                    for (size_t j = t + 1; j < a.cols && stable; ++j)
                        if (a.at(i, j) % a.at(t, t) != 0) {
                            for (size_t k = 0; k < a.cols; ++k) a.at(t, k) += a.at(i, k);
                            stable = false;
                        }
            }
        }
        diag.push_back(a.at(t, t) < 0 ? -a.at(t, t) : a.at(t, t));
    }
    return diag;
}

IntMat from_rows(std::vector<std::vector<Int>> rows) {
    IntMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
    return m;
}

}  // namespace

TEST_CASE("snf of diag(2,3) is diag(1,6)") {
    Smith s = smith_normal_form(from_rows({{2, 0}, {0, 3}}));
    CHECK(s.diag(0) == 1);
    CHECK(s.diag(1) == 6);
    CHECK(s.rank == 2);
    std::vector<Int> oracle = snf_diagonal_oracle(from_rows({{2, 0}, {0, 3}}));
    REQUIRE(oracle.size() == 2);
    CHECK(oracle[0] == 1);
    CHECK(oracle[1] == 6);
}

TEST_CASE("snf of identity") {
    Smith s = smith_normal_form(IntMat::identity(2));
    CHECK(s.diag(0) == 1);
    CHECK(s.diag(1) == 1);
}

TEST_CASE("snf of [[2,4],[6,8]] is diag(2,4)") {
    // gcd of entries is d1 = 2, |det| = 8 forces d2 = 4
    Smith s = smith_normal_form(from_rows({{2, 4}, {6, 8}}));
    CHECK(s.diag(0) == 2);
    CHECK(s.diag(1) == 4);
}

TEST_CASE("snf transform identity U*A*V = D and unimodularity") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> dim(1, 5), val(-9, 9);
    for (int trial = 0; trial < 200; ++trial) {
        IntMat a(dim(rng), dim(rng));
        for (Int& v : a.a) v = val(rng);
        Smith s = smith_normal_form(a);
        CHECK(s.u * a * s.v == s.d);
        for (size_t i = 0; i + 1 < std::min(a.rows, a.cols); ++i)
            if (s.diag(i + 1) != 0) {
                REQUIRE(s.diag(i) != 0);
                CHECK(s.diag(i + 1) % s.diag(i) == 0);
            }
        // unimodular: invertible over Z, i.e. det = ±1; check via snf of u itself
        Smith su = smith_normal_form(s.u);
        for (size_t i = 0; i < s.u.rows; ++i) CHECK(su.diag(i) == 1);
        Smith sv = smith_normal_form(s.v);
        for (size_t i = 0; i < s.v.rows; ++i) CHECK(sv.diag(i) == 1);
        // invariant factors agree with the oracle
        std::vector<Int> oracle = snf_diagonal_oracle(a);
        for (size_t i = 0; i < oracle.size(); ++i) CHECK(oracle[i] == s.diag(i));
    }
}

TEST_CASE("snf invariant under unimodular pre/post composition") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> val(-6, 6), pick(0, 2);
    IntMat a = from_rows({{4, 2, 0}, {0, 6, 2}});
    Smith base = smith_normal_form(a);
    for (int trial = 0; trial < 50; ++trial) {
        // random elementary row/column operations
        IntMat b = a;
        for (int k = 0; k < 6; ++k) {
            size_t i = pick(rng) % b.rows, j = pick(rng) % b.rows;
            Int c = val(rng);
            if (i != j)
                for (size_t t = 0; t < b.cols; ++t)
                    b.at(i, t) = checked_add(b.at(i, t), checked_mul(c, b.at(j, t)));
            size_t p = pick(rng) % b.cols, q = pick(rng) % b.cols;
            if (p != q)
                for (size_t t = 0; t < b.rows; ++t)
                    b.at(t, p) = checked_add(b.at(t, p), checked_mul(c, b.at(t, q)));
        }
        Smith s = smith_normal_form(b);
        for (size_t i = 0; i < std::min(b.rows, b.cols); ++i) CHECK(s.diag(i) == base.diag(i));
    }
}

TEST_CASE("integer solve and kernel lattice") {
    IntMat a = from_rows({{2, 4}, {6, 8}});
    auto x = solve_integer(a, {2, 6});
    REQUIRE(x.has_value());
    CHECK(a.apply(*x) == std::vector<Int>{2, 6});
    CHECK_FALSE(solve_integer(a, {1, 0}).has_value());
    CHECK(kernel_lattice(a).empty());  // det = -8 != 0

    IntMat b = from_rows({{2, 4}});
    auto k = kernel_lattice(b);
    REQUIRE(k.size() == 1);
    CHECK(b.apply(k[0]) == std::vector<Int>{0});
    CHECK((k[0][0] != 0 || k[0][1] != 0));
}

TEST_CASE("congruence solve") {
    // x = 1 mod 2, x = 2 mod 3  ->  x = 5 mod 6
    IntMat a = from_rows({{1}, {1}});
    auto x = solve_congruences(a, {1, 2}, {2, 3});
    REQUIRE(x.has_value());
    CHECK(mod_pos((*x)[0], 6) == 5);
    // 2x = 1 mod 4 unsolvable
    IntMat b = from_rows({{2}});
    CHECK_FALSE(solve_congruences(b, {1}, {4}).has_value());
}
