#pragma once

#include <optional>
#include <vector>

#include "crt/matrix.hpp"

namespace crt {

/// Smith normal form U*A*V = D with U, V unimodular and the diagonal of D
/// nonnegative with d1 | d2 | ... .
struct Smith {
    IntMat d;  // diagonal, same shape as input
    IntMat u;  // rows x rows
    IntMat v;  // cols x cols
    size_t rank = 0;

    Int diag(size_t i) const { return d.at(i, i); }
};

Smith smith_normal_form(const IntMat& m);

/// Basis of the integer kernel lattice { x : A x = 0 }, one column vector per entry.
std::vector<std::vector<Int>> kernel_lattice(const IntMat& a);

/// An integer solution of A x = b, if one exists.
std::optional<std::vector<Int>> solve_integer(const IntMat& a, const std::vector<Int>& b);

/// Solution of A x = b (mod m-per-row); mods[i] == 0 means an exact equation over Z.
std::optional<std::vector<Int>> solve_congruences(const IntMat& a, const std::vector<Int>& b,
                                                  const std::vector<Int>& mods);

}  // namespace crt
