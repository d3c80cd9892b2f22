#include "crt/abelian_group.hpp"

#include <algorithm>
#include <map>

namespace crt {

AbelianGroup AbelianGroup::make(std::vector<Summand> parts) {
    // Merge all finite cyclic factors into invariant-factor form by
    // collecting prime-power multiplicities.
    std::map<Int, std::vector<int>> primepows;  // prime -> sorted descending exponents
    size_t rank_z = 0, rank_q = 0;
    std::vector<Int> prufers;
    for (const Summand& p : parts) {
        switch (p.kind) {
            case Kind::Zn: {
                if (p.n < 2) {
                    if (p.n == 1) break;  // trivial factor
                    throw std::invalid_argument("Zn summand needs n >= 2");
                }
                Int n = p.n;
                for (Int q = 2; q * q <= n; ++q) {
                    if (n % q == 0) {
                        int e = 0;
                        while (n % q == 0) { n /= q; ++e; }
                        primepows[q].push_back(e);
                    }
                }
                if (n > 1) primepows[n].push_back(1);
                break;
            }
            case Kind::Z: ++rank_z; break;
            case Kind::Q: ++rank_q; break;
            case Kind::Zpinf: prufers.push_back(p.n); break;
        }
    }
    for (auto& [p, es] : primepows) std::sort(es.begin(), es.end(), std::greater<int>());
    size_t factors = 0;
    for (auto& [p, es] : primepows) factors = std::max(factors, es.size());
    // invariant factor k (from the largest down) is the product of the k-th
    // largest prime power for each prime
    std::vector<Int> invf(factors, 1);
    for (auto& [p, es] : primepows)
        for (size_t i = 0; i < es.size(); ++i) invf[i] = checked_mul(invf[i], ipow(p, es[i]));
    std::sort(invf.begin(), invf.end());  // ascending: d1 | d2 | ...

    AbelianGroup g;
    for (Int d : invf) g.s_.push_back({Kind::Zn, d});
    for (size_t i = 0; i < rank_z; ++i) g.s_.push_back({Kind::Z, 0});
    for (size_t i = 0; i < rank_q; ++i) g.s_.push_back({Kind::Q, 0});
    std::sort(prufers.begin(), prufers.end());
    for (Int p : prufers) g.s_.push_back({Kind::Zpinf, p});
    return g;
}

AbelianGroup AbelianGroup::cyclic(Int n) {
    if (n == 0) return make({{Kind::Z, 0}});
    return make({{Kind::Zn, n}});
}

AbelianGroup AbelianGroup::free(size_t rank) {
    std::vector<Summand> v(rank, {Kind::Z, 0});
    return make(v);
}

AbelianGroup AbelianGroup::rational(size_t rank) {
    std::vector<Summand> v(rank, {Kind::Q, 0});
    return make(v);
}

AbelianGroup AbelianGroup::prufer(Int p, size_t rank) {
    std::vector<Summand> v(rank, {Kind::Zpinf, p});
    return make(v);
}

AbelianGroup AbelianGroup::from_presentation(size_t gens, const IntMat& relations,
                                             IntMat* genmap) {
    if (relations.rows != gens) throw std::invalid_argument("presentation shape mismatch");
    Smith s = smith_normal_form(relations);
    // Z^gens / im(R): coordinates y = U x, relation i: y_i mod d_i.
    std::vector<Summand> parts;
    std::vector<size_t> keep;  // rows of U that survive
    size_t n = std::min(relations.rows, relations.cols);
    for (size_t i = 0; i < gens; ++i) {
        Int d = i < n ? s.d.at(i, i) : 0;
        if (d == 1) continue;
        if (d == 0)
            parts.push_back({Kind::Z, 0});
        else
            parts.push_back({Kind::Zn, d});
        keep.push_back(i);
    }
    // canonical order: torsion summands ascending then free; keep[] rows follow
    std::vector<size_t> order(keep.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        bool ta = parts[a].kind == Kind::Zn, tb = parts[b].kind == Kind::Zn;
        if (ta != tb) return ta;
        if (ta && tb) return parts[a].n < parts[b].n;
        return false;
    });
    std::vector<Summand> sorted;
    for (size_t i : order) sorted.push_back(parts[i]);
    if (genmap) {
        *genmap = IntMat(sorted.size(), gens);
        for (size_t r = 0; r < order.size(); ++r) {
            size_t urow = keep[order[r]];
            for (size_t j = 0; j < gens; ++j) genmap->at(r, j) = s.u.at(urow, j);
        }
    }
    AbelianGroup g;
    g.s_ = sorted;
    return g;
}

bool AbelianGroup::is_finite() const {
    for (const Summand& p : s_)
        if (p.kind != Kind::Zn) return false;
    return true;
}

Int AbelianGroup::order() const {
    Int o = 1;
    for (const Summand& p : s_) {
        if (p.kind != Kind::Zn) throw std::logic_error("order of infinite group");
        o = checked_mul(o, p.n);
    }
    return o;
}

bool AbelianGroup::is_free_abelian() const {
    for (const Summand& p : s_)
        if (p.kind != Kind::Z) return false;
    return true;
}

bool AbelianGroup::is_divisible() const {
    for (const Summand& p : s_)
        if (p.kind == Kind::Z || p.kind == Kind::Zn) return false;
    return true;
}

bool AbelianGroup::has_divisible_part() const {
    for (const Summand& p : s_)
        if (p.kind == Kind::Q || p.kind == Kind::Zpinf) return true;
    return false;
}

bool AbelianGroup::is_finitely_generated() const { return !has_divisible_part(); }

std::string AbelianGroup::str() const {
    if (s_.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < s_.size(); ++i) {
        if (i) out += " + ";
        const Summand& p = s_[i];
        switch (p.kind) {
            case Kind::Zn: out += "Z/" + std::to_string(p.n); break;
            case Kind::Z: out += "Z"; break;
            case Kind::Q: out += "Q"; break;
            case Kind::Zpinf: out += "Z(" + std::to_string(p.n) + "^inf)"; break;
        }
    }
    return out;
}

Element Element::basis(const AbelianGroup& g, size_t i) {
    Element e = zero(g);
    e.c[i] = Rat(1);
    return e;
}

Element normalize(const AbelianGroup& g, Element e) {
    if (e.c.size() != g.size()) throw std::invalid_argument("element size mismatch");
    for (size_t i = 0; i < g.size(); ++i) {
        const Summand& p = g.at(i);
        switch (p.kind) {
            case Kind::Zn:
                if (!e.c[i].is_integer()) throw std::invalid_argument("non-integer Zn coordinate");
                e.c[i] = Rat(mod_pos(e.c[i].num, p.n));
                break;
            case Kind::Z:
                if (!e.c[i].is_integer()) throw std::invalid_argument("non-integer Z coordinate");
                break;
            case Kind::Q: break;
            case Kind::Zpinf: {
                e.c[i] = e.c[i].mod1();
                Int d = e.c[i].den;
                while (d % p.n == 0) d /= p.n;
                if (d != 1)
                    throw std::invalid_argument("Zpinf coordinate with non-p-power denominator");
                break;
            }
        }
    }
    return e;
}

Element add(const AbelianGroup& g, const Element& a, const Element& b) {
    Element r = a;
    for (size_t i = 0; i < g.size(); ++i) r.c[i] = r.c[i] + b.c[i];
    return normalize(g, r);
}

Element neg(const AbelianGroup& g, const Element& a) {
    Element r = a;
    for (size_t i = 0; i < g.size(); ++i) r.c[i] = -r.c[i];
    return normalize(g, r);
}

Element scale(const AbelianGroup& g, Int k, const Element& a) {
    Element r = a;
    for (size_t i = 0; i < g.size(); ++i) r.c[i] = Rat(k) * r.c[i];
    return normalize(g, r);
}

bool equal(const AbelianGroup& g, const Element& a, const Element& b) {
    return normalize(g, a).c == normalize(g, b).c;
}

Int element_order(const AbelianGroup& g, const Element& a) {
    Element e = normalize(g, a);
    Int ord = 1;
    for (size_t i = 0; i < g.size(); ++i) {
        if (e.c[i].is_zero()) continue;
        const Summand& p = g.at(i);
        switch (p.kind) {
            case Kind::Z:
            case Kind::Q: return 0;
            case Kind::Zn: ord = lcm_ll(ord, p.n / gcd_ll(p.n, e.c[i].num)); break;
            case Kind::Zpinf: ord = lcm_ll(ord, e.c[i].den); break;
        }
    }
    return ord;
}

std::vector<Element> enumerate_elements(const AbelianGroup& g, Int bound) {
    if (!g.is_finite() || g.order() > bound)
        throw std::invalid_argument("enumerate_elements: group too large or infinite");
    std::vector<Element> out{Element::zero(g)};
    for (size_t i = 0; i < g.size(); ++i) {
        std::vector<Element> next;
        next.reserve(out.size() * g.at(i).n);
        for (Int v = 0; v < g.at(i).n; ++v)
            for (const Element& e : out) {
                Element e2 = e;
                e2.c[i] = Rat(v);
                next.push_back(std::move(e2));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<Element> generating_set(const AbelianGroup& g, int prufer_precision) {
    std::vector<Element> out;
    for (size_t i = 0; i < g.size(); ++i) {
        Element e = Element::zero(g);
        if (g.at(i).kind == Kind::Zpinf)
            e.c[i] = Rat(1, ipow(g.at(i).n, prufer_precision));
        else
            e.c[i] = Rat(1);
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace crt
