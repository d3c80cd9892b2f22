#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "crt/abelian_group.hpp"

namespace crt {

inline int degmod8(int d) { return ((d % 8) + 8) % 8; }

/// Degree-indexed (mod 8) family of groups.
struct GradedGroup {
    std::array<AbelianGroup, 8> parts;

    const AbelianGroup& at(int d) const { return parts[degmod8(d)]; }
    AbelianGroup& at(int d) { return parts[degmod8(d)]; }

    static GradedGroup zero() { return GradedGroup{}; }
    bool is_zero() const {
        for (const auto& g : parts)
            if (!g.is_zero()) return false;
        return true;
    }
    friend bool operator==(const GradedGroup& a, const GradedGroup& b) {
        return a.parts == b.parts;
    }
    friend GradedGroup operator+(const GradedGroup& a, const GradedGroup& b) {
        GradedGroup r;
        for (int d = 0; d < 8; ++d) r.parts[d] = a.parts[d] + b.parts[d];
        return r;
    }
    /// (Sigma^k M)_n = M_{n+k}.
    GradedGroup suspend(int k) const {
        GradedGroup r;
        for (int d = 0; d < 8; ++d) r.parts[d] = at(d + k);
        return r;
    }
};

/// Graded homomorphism of some degree: per source degree d, a block matrix
/// mapping domain summands at d to codomain summands at d + degree.
/// Rows index codomain summands, columns domain summands.
struct GroupHom {
    GradedGroup dom, cod;
    int degree = 0;
    std::array<RatMat, 8> blocks;  // indexed by source degree

    static GroupHom zero(const GradedGroup& dom, const GradedGroup& cod, int degree);
    static GroupHom identity(const GradedGroup& g);

    const RatMat& block(int d) const { return blocks[degmod8(d)]; }
    RatMat& block(int d) { return blocks[degmod8(d)]; }

    /// Validates entry well-formedness per the coefficient-class rules.
    void validate() const;

    Element apply(int srcdeg, const Element& e) const;
    bool is_zero_map() const;
    bool is_bijective() const;

    friend GroupHom compose(const GroupHom& g, const GroupHom& f);  // g after f
    friend GroupHom operator+(const GroupHom& a, const GroupHom& b);
    friend GroupHom operator-(const GroupHom& a, const GroupHom& b);
    GroupHom operator-() const;
    friend bool operator==(const GroupHom& a, const GroupHom& b);

    /// Inverse of a bijective hom.
    GroupHom inverse() const;

    /// Plain degree shift of both ends: the same blocks reindexed.
    GroupHom suspend(int k) const;
};

/// Checks that a single block is a valid matrix of homomorphisms between the
/// given groups (entry classes per summand pair). Throws on violation.
void validate_block(const AbelianGroup& dom, const AbelianGroup& cod, const RatMat& m,
                    const std::string& where);

bool entry_acts_zero(const Summand& src, const Summand& dst, const Rat& e);

Element apply_block(const AbelianGroup& dom, const AbelianGroup& cod, const RatMat& m,
                    const Element& e);

RatMat compose_blocks(const AbelianGroup& a, const AbelianGroup& b, const AbelianGroup& c,
                      const RatMat& g, const RatMat& f);  // g: b->c, f: a->b

/// Kernel of one block: the kernel group, plus an injection matrix into dom.
struct BlockKernel {
    AbelianGroup group;
    RatMat inject;  // rows = dom summands, cols = kernel summands
};
BlockKernel block_kernel(const AbelianGroup& dom, const AbelianGroup& cod, const RatMat& m);

/// Cokernel of one block: the quotient group plus the projection matrix.
struct BlockCokernel {
    AbelianGroup group;
    RatMat project;  // rows = coker summands, cols = cod summands
};
BlockCokernel block_cokernel(const AbelianGroup& dom, const AbelianGroup& cod, const RatMat& m);

/// Some preimage of e under m, if one exists.
std::optional<Element> block_preimage(const AbelianGroup& dom, const AbelianGroup& cod,
                                      const RatMat& m, const Element& e);

struct KernelResult {
    GradedGroup group;
    GroupHom inclusion;  // kernel -> dom, degree 0
};
KernelResult kernel(const GroupHom& f);

struct CokernelResult {
    GradedGroup group;
    GroupHom projection;  // cod -> cokernel, degree 0
};
CokernelResult cokernel(const GroupHom& f);

std::optional<Element> preimage(const GroupHom& f, int srcdeg, const Element& target);

/// Exactness of dom(f) -f-> mid -g-> cod(g) at mid, degreewise.
struct ExactnessReport {
    bool exact = true;
    int fail_degree = -1;
    std::string detail;  // witness description on failure
};
ExactnessReport is_exact_at(const GroupHom& f, const GroupHom& g);

}  // namespace crt
