#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crt/matrix.hpp"
#include "crt/rational.hpp"
#include "crt/smith.hpp"

namespace crt {

/// Summand kinds in canonical storage order: finite cyclic, free, rational, Prüfer.
enum class Kind { Zn, Z, Q, Zpinf };

struct Summand {
    Kind kind;
    Int n = 0;  // modulus for Zn (>= 2), prime for Zpinf

    friend bool operator==(const Summand& a, const Summand& b) {
        return a.kind == b.kind && a.n == b.n;
    }
};

struct UnsupportedGroupClass : std::runtime_error {
    explicit UnsupportedGroupClass(const std::string& what) : std::runtime_error(what) {}
};

/// Finite direct sum of Z, Z/n, Q, Z(p^inf) summands in canonical form:
/// invariant factors d1 | d2 | ... first, then Z's, then Q's, then Z(p^inf)
/// sorted by prime. Two groups are equal iff their summand lists are identical.
class AbelianGroup {
  public:
    AbelianGroup() = default;

    /// Canonicalizes an arbitrary summand list (merges cyclic factors into
    /// invariant-factor form, drops trivial factors).
    static AbelianGroup make(std::vector<Summand> parts);

    static AbelianGroup zero() { return AbelianGroup{}; }
    static AbelianGroup cyclic(Int n);  // n == 0 means Z
    static AbelianGroup free(size_t rank);
    static AbelianGroup rational(size_t rank = 1);
    static AbelianGroup prufer(Int p, size_t rank = 1);

    /// Group presented as Z^gens / column-span(relations).
    static AbelianGroup from_presentation(size_t gens, const IntMat& relations,
                                          IntMat* genmap = nullptr);

    const std::vector<Summand>& summands() const { return s_; }
    size_t size() const { return s_.size(); }
    const Summand& at(size_t i) const { return s_[i]; }
    bool is_zero() const { return s_.empty(); }

    bool is_finite() const;
    Int order() const;  // throws if infinite
    bool is_free_abelian() const;
    bool is_divisible() const;  // no Z or Zn summands
    bool has_divisible_part() const;
    bool is_finitely_generated() const;

    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) { return a.s_ == b.s_; }
    friend bool operator!=(const AbelianGroup& a, const AbelianGroup& b) { return !(a == b); }

    std::string str() const;

    friend AbelianGroup operator+(const AbelianGroup& a, const AbelianGroup& b) {
        std::vector<Summand> all = a.s_;
        all.insert(all.end(), b.s_.begin(), b.s_.end());
        return make(all);
    }

  private:
    std::vector<Summand> s_;
};

/// Element of an AbelianGroup: one coordinate per summand.
/// Zn: integer in [0,n); Z: integer; Q: rational; Zpinf: p-power-denominator
/// rational in [0,1).
struct Element {
    std::vector<Rat> c;

    static Element zero(const AbelianGroup& g) { return Element{std::vector<Rat>(g.size())}; }
    static Element basis(const AbelianGroup& g, size_t i);
    bool is_zero() const {
        for (const Rat& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
};

Element normalize(const AbelianGroup& g, Element e);
Element add(const AbelianGroup& g, const Element& a, const Element& b);
Element neg(const AbelianGroup& g, const Element& a);
Element scale(const AbelianGroup& g, Int k, const Element& a);
bool equal(const AbelianGroup& g, const Element& a, const Element& b);
/// Additive order (0 = infinite).
Int element_order(const AbelianGroup& g, const Element& a);

/// All elements of a finite group (throws if infinite or order > bound).
std::vector<Element> enumerate_elements(const AbelianGroup& g, Int bound = 1 << 20);

/// Canonical generating set: one basis element per Zn/Z summand, 1 per Q
/// summand, and 1/p^precision per Zpinf summand.
std::vector<Element> generating_set(const AbelianGroup& g, int prufer_precision = 1);

}  // namespace crt
