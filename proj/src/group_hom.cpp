#include "crt/group_hom.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace crt {

namespace {

// ---------------------------------------------------------------- rational linear algebra

std::vector<size_t> rat_rref(RatMat& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
        size_t piv = row;
        while (piv < m.rows && m.at(piv, col).is_zero()) ++piv;
        if (piv == m.rows) continue;
        for (size_t j = 0; j < m.cols; ++j) std::swap(m.at(row, j), m.at(piv, j));
        Rat inv = Rat(1) / m.at(row, col);
        for (size_t j = 0; j < m.cols; ++j) m.at(row, j) = m.at(row, j) * inv;
        for (size_t i = 0; i < m.rows; ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            Rat f = m.at(i, col);
            for (size_t j = 0; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

RatMat rat_transpose(const RatMat& m) {
    RatMat t(m.cols, m.rows);
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

std::vector<std::vector<Rat>> rat_right_nullspace(const RatMat& m) {
    RatMat r = m;
    std::vector<size_t> pivots = rat_rref(r);
    std::vector<bool> is_pivot(m.cols, false);
    for (size_t p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Rat>> basis;
    for (size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(m.cols);
        v[free] = Rat(1);
        for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r.at(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::vector<Rat>> rat_left_nullspace(const RatMat& m) {
    return rat_right_nullspace(rat_transpose(m));
}

std::optional<std::vector<Rat>> rat_solve(const RatMat& m, const std::vector<Rat>& rhs) {
    RatMat aug(m.rows, m.cols + 1);
    for (size_t i = 0; i < m.rows; ++i) {
        for (size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = rhs[i];
    }
    std::vector<size_t> pivots = rat_rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt;  // inconsistent
    std::vector<Rat> x(m.cols);
    for (size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.at(k, m.cols);
    return x;
}

// ---------------------------------------------------------------- sector bookkeeping

struct Sectors {
    std::vector<size_t> tor, zfree, q;
    std::map<Int, std::vector<size_t>> div;  // prime -> indices
    std::vector<size_t> lat;                 // tor followed by zfree
};

Sectors classify(const AbelianGroup& g) {
    Sectors s;
    for (size_t i = 0; i < g.size(); ++i) {
        switch (g.at(i).kind) {
            case Kind::Zn: s.tor.push_back(i); break;
            case Kind::Z: s.zfree.push_back(i); break;
            case Kind::Q: s.q.push_back(i); break;
            case Kind::Zpinf: s.div[g.at(i).n].push_back(i); break;
        }
    }
    s.lat = s.tor;
    s.lat.insert(s.lat.end(), s.zfree.begin(), s.zfree.end());
    return s;
}

Int entry_den_as_int(const Rat& r, const std::string& where) {
    if (!r.is_integer()) throw std::invalid_argument(where + ": entry must be an integer");
    return r.num;
}

}  // namespace

// ---------------------------------------------------------------- entry validity

void validate_block(const AbelianGroup& dom, const AbelianGroup& cod, const RatMat& m,
                    const std::string& where) {
    if (m.rows != cod.size() || m.cols != dom.size())
        throw std::invalid_argument(where + ": block shape mismatch");
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) {
            const Rat& e = m.at(i, j);
            if (e.is_zero()) continue;
            const Summand& s = dom.at(j);
            const Summand& t = cod.at(i);
            switch (s.kind) {
                case Kind::Z:
                    if (t.kind == Kind::Z || t.kind == Kind::Zn)
                        entry_den_as_int(e, where);
                    else if (t.kind == Kind::Zpinf) {
                        Rat x = e.mod1();
                        Int d = x.den;
                        while (d % t.n == 0) d /= t.n;
                        if (d != 1)
                            throw std::invalid_argument(where + ": Z->Zpinf entry denominator");
                    }
                    break;  // Z -> Q unrestricted
                case Kind::Zn: {
                    if (t.kind == Kind::Z || t.kind == Kind::Q)
                        throw std::invalid_argument(where + ": torsion cannot map to " +
                                                    (t.kind == Kind::Z ? "Z" : "Q"));
                    if (t.kind == Kind::Zn) {
                        Int v = entry_den_as_int(e, where);
                        if (mod_pos(checked_mul(v, s.n), t.n) != 0)
                            throw std::invalid_argument(where + ": Zn->Zm entry order");
                    } else {  // Zpinf
                        Rat x = (Rat(s.n) * e).mod1();
                        if (!x.is_zero())
                            throw std::invalid_argument(where + ": Zn->Zpinf entry order");
                    }
                    break;
                }
                case Kind::Q:
                    if (t.kind != Kind::Q)
                        throw std::invalid_argument(where + ": Q maps only to Q");
                    break;
                case Kind::Zpinf:
                    if (t.kind != Kind::Zpinf || t.n != s.n)
                        throw std::invalid_argument(where +
                                                    ": Zpinf maps only to Zpinf at the same prime");
                    entry_den_as_int(e, where);
                    break;
            }
        }
}

Element apply_block(const AbelianGroup& dom, const AbelianGroup& cod, const RatMat& m,
                    const Element& e) {
    Element r = Element::zero(cod);
    for (size_t i = 0; i < cod.size(); ++i)
        for (size_t j = 0; j < dom.size(); ++j)
            if (!m.at(i, j).is_zero() && !e.c[j].is_zero()) r.c[i] = r.c[i] + m.at(i, j) * e.c[j];
    return normalize(cod, r);
}

static Rat normalize_entry(const Summand& s, const Summand& t, Rat v) {
    if (t.kind == Kind::Zn && v.is_integer()) return Rat(mod_pos(v.num, t.n));
    if (t.kind == Kind::Zpinf) {
        Rat x = v.mod1();
        // torsion sources only see the p-part of the entry
        (void)s;
        return x;
    }
    return v;
}

RatMat compose_blocks(const AbelianGroup& a, const AbelianGroup& b, const AbelianGroup& c,
                      const RatMat& g, const RatMat& f) {
    RatMat r(c.size(), a.size());
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) {
            Rat acc;
            for (size_t k = 0; k < b.size(); ++k) {
                if (g.at(i, k).is_zero() || f.at(k, j).is_zero()) continue;
                acc = acc + g.at(i, k) * f.at(k, j);
            }
            r.at(i, j) = normalize_entry(a.at(j), c.at(i), acc);
        }
    return r;
}

// ---------------------------------------------------------------- GroupHom basics

GroupHom GroupHom::zero(const GradedGroup& dom, const GradedGroup& cod, int degree) {
    GroupHom h;
    h.dom = dom;
    h.cod = cod;
    h.degree = degree;
    for (int d = 0; d < 8; ++d)
        h.blocks[d] = RatMat(cod.at(d + degree).size(), dom.at(d).size());
    return h;
}

GroupHom GroupHom::identity(const GradedGroup& g) {
    GroupHom h = zero(g, g, 0);
    for (int d = 0; d < 8; ++d)
        for (size_t i = 0; i < g.at(d).size(); ++i) h.blocks[d].at(i, i) = Rat(1);
    return h;
}

void GroupHom::validate() const {
    for (int d = 0; d < 8; ++d) {
        std::ostringstream where;
        where << "hom block at degree " << d;
        validate_block(dom.at(d), cod.at(d + degree), blocks[d], where.str());
    }
}

Element GroupHom::apply(int srcdeg, const Element& e) const {
    return apply_block(dom.at(srcdeg), cod.at(srcdeg + degree), block(srcdeg), e);
}

/// Whether the single entry acts as the zero homomorphism between its summands.
bool entry_acts_zero(const Summand& s, const Summand& t, const Rat& e) {
    if (e.is_zero()) return true;
    switch (s.kind) {
        case Kind::Q: return false;
        case Kind::Zpinf: return e.num == 0;  // integer multiplier
        case Kind::Z:
        case Kind::Zn:
            switch (t.kind) {
                case Kind::Z: return e.num == 0;
                case Kind::Q: return e.is_zero();
                case Kind::Zn: return mod_pos(e.num, t.n) == 0;
                case Kind::Zpinf: return e.mod1().is_zero();
            }
    }
    return false;
}

bool GroupHom::is_zero_map() const {
    for (int d = 0; d < 8; ++d) {
        const AbelianGroup& a = dom.at(d);
        const AbelianGroup& b = cod.at(d + degree);
        for (size_t i = 0; i < b.size(); ++i)
            for (size_t j = 0; j < a.size(); ++j)
                if (!entry_acts_zero(a.at(j), b.at(i), blocks[degmod8(d)].at(i, j))) return false;
    }
    return true;
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
    if (!(f.cod == g.dom)) throw std::invalid_argument("compose: cod(f) != dom(g)");
    GroupHom h;
    h.dom = f.dom;
    h.cod = g.cod;
    h.degree = f.degree + g.degree;
    for (int d = 0; d < 8; ++d)
        h.blocks[d] = compose_blocks(f.dom.at(d), f.cod.at(d + f.degree),
                                     g.cod.at(d + f.degree + g.degree), g.block(d + f.degree),
                                     f.block(d));
    return h;
}

GroupHom operator+(const GroupHom& a, const GroupHom& b) {
    GroupHom h = a;
    for (int d = 0; d < 8; ++d)
        for (size_t k = 0; k < h.blocks[d].a.size(); ++k) {
            Rat v = h.blocks[d].a[k] + b.blocks[d].a[k];
            size_t i = k / std::max<size_t>(h.blocks[d].cols, 1);
            size_t j = k % std::max<size_t>(h.blocks[d].cols, 1);
            h.blocks[d].a[k] = normalize_entry(a.dom.at(d).at(j), a.cod.at(d + a.degree).at(i), v);
        }
    return h;
}

GroupHom operator-(const GroupHom& a, const GroupHom& b) { return a + (-b); }

GroupHom GroupHom::operator-() const {
    GroupHom h = *this;
    for (int d = 0; d < 8; ++d)
        for (size_t k = 0; k < h.blocks[d].a.size(); ++k) {
            Rat v = -h.blocks[d].a[k];
            size_t i = k / std::max<size_t>(h.blocks[d].cols, 1);
            size_t j = k % std::max<size_t>(h.blocks[d].cols, 1);
            h.blocks[d].a[k] = normalize_entry(dom.at(d).at(j), cod.at(d + degree).at(i), v);
        }
    return h;
}

bool operator==(const GroupHom& a, const GroupHom& b) {
    if (!(a.dom == b.dom) || !(a.cod == b.cod) || degmod8(a.degree) != degmod8(b.degree))
        return false;
    GroupHom d = a - b;
    return d.is_zero_map();
}

GroupHom GroupHom::suspend(int k) const {
    GroupHom h;
    h.dom = dom.suspend(k);
    h.cod = cod.suspend(k);
    h.degree = degree;
    for (int d = 0; d < 8; ++d) h.blocks[d] = block(d + k);
    return h;
}

// ---------------------------------------------------------------- kernel

BlockKernel block_kernel(const AbelianGroup& dom, const AbelianGroup& cod, const RatMat& m) {
    Sectors A = classify(dom), B = classify(cod);

    // --- rational sector: rows bQ, unknowns w (aQ) and z (aZ)
    RatMat RQw(B.q.size(), A.q.size()), RQz(B.q.size(), A.zfree.size());
    for (size_t i = 0; i < B.q.size(); ++i) {
        for (size_t j = 0; j < A.q.size(); ++j) RQw.at(i, j) = m.at(B.q[i], A.q[j]);
        for (size_t j = 0; j < A.zfree.size(); ++j) RQz.at(i, j) = m.at(B.q[i], A.zfree[j]);
    }
    std::vector<std::vector<Rat>> wker = rat_right_nullspace(RQw);
    std::vector<std::vector<Rat>> lnull = rat_left_nullspace(RQw);

    // integer conditions on z from rational solvability
    std::vector<std::vector<Int>> cqz_rows;
    for (const auto& y : lnull) {
        std::vector<Rat> row(A.zfree.size());
        Int den = 1;
        for (size_t j = 0; j < A.zfree.size(); ++j) {
            Rat v;
            for (size_t i = 0; i < B.q.size(); ++i) v = v + y[i] * RQz.at(i, j);
            row[j] = v;
            den = lcm_ll(den, v.den);
        }
        std::vector<Int> irow(A.zfree.size());
        bool nonzero = false;
        for (size_t j = 0; j < A.zfree.size(); ++j) {
            irow[j] = checked_mul(row[j].num, den / row[j].den);
            nonzero = nonzero || irow[j] != 0;
        }
        if (nonzero) cqz_rows.push_back(std::move(irow));
    }

    // --- divisible sectors
    struct DivData {
        Int p;
        std::vector<size_t> acols, brows;
        Smith sm;          // of the integer div->div matrix
        int ka = 0, kb = 0;
        size_t nullity = 0;
    };
    std::vector<DivData> divs;
    {
        std::map<Int, std::pair<std::vector<size_t>, std::vector<size_t>>> byp;
        for (auto& [p, idx] : A.div) byp[p].first = idx;
        for (auto& [p, idx] : B.div) byp[p].second = idx;
        for (auto& [p, pr] : byp) {
            DivData dd;
            dd.p = p;
            dd.acols = pr.first;
            dd.brows = pr.second;
            IntMat dmat(dd.brows.size(), dd.acols.size());
            for (size_t i = 0; i < dd.brows.size(); ++i)
                for (size_t j = 0; j < dd.acols.size(); ++j)
                    dmat.at(i, j) = entry_den_as_int(m.at(dd.brows[i], dd.acols[j]), "div entry");
            dd.sm = smith_normal_form(dmat);
            dd.nullity = dd.acols.size() - dd.sm.rank;
            int vden = 0, vtor = 0, vdelta = 0;
            for (size_t i = 0; i < dd.brows.size(); ++i)
                for (size_t j : A.lat)
                    if (!m.at(dd.brows[i], j).is_zero())
                        vden = std::max(vden, valuation(m.at(dd.brows[i], j).den, p));
            for (size_t j : A.tor)
                if (dom.at(j).n % p == 0) vtor = std::max(vtor, valuation(dom.at(j).n, p));
            for (size_t i = 0; i < dd.sm.rank; ++i)
                if (dd.sm.diag(i) % p == 0) vdelta = std::max(vdelta, valuation(dd.sm.diag(i), p));
            dd.ka = vden + vtor + vdelta + 2;
            dd.kb = dd.ka + vden + 1;
            divs.push_back(std::move(dd));
        }
    }

    // --- finite model: variables t | z | (div numerators per prime, model order)
    size_t nt = A.tor.size(), nz = A.zfree.size();
    std::vector<std::pair<const DivData*, size_t>> dvar;  // (prime data, column-in-acols)
    for (const DivData& dd : divs)
        for (size_t j = 0; j < dd.acols.size(); ++j) dvar.push_back({&dd, j});
    size_t nvars = nt + nz + dvar.size();

    std::vector<std::vector<Int>> rows;
    std::vector<Int> mods;
    // exact rows on z from codomain Z summands
    for (size_t bi : B.zfree) {
        std::vector<Int> row(nvars, 0);
        bool nonzero = false;
        for (size_t j = 0; j < nz; ++j) {
            row[nt + j] = entry_den_as_int(m.at(bi, A.zfree[j]), "Z entry");
            nonzero |= row[nt + j] != 0;
        }
        if (nonzero) {
            rows.push_back(std::move(row));
            mods.push_back(0);
        }
    }
    // torsion rows
    for (size_t bi : B.tor) {
        std::vector<Int> row(nvars, 0);
        bool nonzero = false;
        for (size_t j = 0; j < nt; ++j) {
            row[j] = entry_den_as_int(m.at(bi, A.tor[j]), "tor entry");
            nonzero |= row[j] != 0;
        }
        for (size_t j = 0; j < nz; ++j) {
            row[nt + j] = entry_den_as_int(m.at(bi, A.zfree[j]), "tor entry");
            nonzero |= row[nt + j] != 0;
        }
        if (nonzero) {
            rows.push_back(std::move(row));
            mods.push_back(cod.at(bi).n);
        }
    }
    // rational solvability rows
    for (auto& r : cqz_rows) {
        std::vector<Int> row(nvars, 0);
        for (size_t j = 0; j < nz; ++j) row[nt + j] = r[j];
        rows.push_back(std::move(row));
        mods.push_back(0);
    }
    // divisible rows
    for (const DivData& dd : divs) {
        Int pkb = ipow(dd.p, dd.kb);
        Int pshift = ipow(dd.p, dd.kb - dd.ka);
        for (size_t i = 0; i < dd.brows.size(); ++i) {
            std::vector<Int> row(nvars, 0);
            bool nonzero = false;
            for (size_t j = 0; j < nt; ++j) {
                const Rat& e = m.at(dd.brows[i], A.tor[j]);
                if (e.is_zero()) continue;
                row[j] = checked_mul(e.num, pkb / e.den);
                nonzero = true;
            }
            for (size_t j = 0; j < nz; ++j) {
                const Rat& e = m.at(dd.brows[i], A.zfree[j]);
                if (e.is_zero()) continue;
                row[nt + j] = checked_mul(e.num, pkb / e.den);
                nonzero = true;
            }
            for (size_t k = 0; k < dvar.size(); ++k) {
                if (dvar[k].first != &dd) continue;
                Int c = entry_den_as_int(m.at(dd.brows[i], dd.acols[dvar[k].second]), "div");
                if (c == 0) continue;
                row[nt + nz + k] = checked_mul(c, pshift);
                nonzero = true;
            }
            if (nonzero) {
                rows.push_back(std::move(row));
                mods.push_back(pkb);
            }
        }
    }

    // lattice of model solutions, via slack columns
    size_t slack = 0;
    for (Int md : mods)
        if (md != 0) ++slack;
    IntMat eq(rows.size(), nvars + slack);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < nvars; ++j) eq.at(i, j) = rows[i][j];
    {
        size_t k = nvars;
        for (size_t i = 0; i < rows.size(); ++i)
            if (mods[i] != 0) eq.at(i, k++) = mods[i];
    }
    std::vector<std::vector<Int>> khat = kernel_lattice(eq);
    for (auto& v : khat) v.resize(nvars);
    // domain moduli columns (guaranteed solutions; added for robustness)
    auto add_modulus_col = [&](size_t var, Int modulus) {
        std::vector<Int> v(nvars, 0);
        v[var] = modulus;
        khat.push_back(std::move(v));
    };
    for (size_t j = 0; j < nt; ++j) add_modulus_col(j, dom.at(A.tor[j]).n);
    for (size_t k = 0; k < dvar.size(); ++k)
        add_modulus_col(nt + nz + k, ipow(dvar[k].first->p, dvar[k].first->ka));

    // present K_M / (domain moduli + divisible overlap)
    IntMat gens(nvars, khat.size());
    for (size_t j = 0; j < khat.size(); ++j)
        for (size_t i = 0; i < nvars; ++i) gens.at(i, j) = khat[j][i];

    std::vector<std::vector<Int>> relation_targets;
    for (size_t j = 0; j < nt; ++j) {
        std::vector<Int> v(nvars, 0);
        v[j] = dom.at(A.tor[j]).n;
        relation_targets.push_back(std::move(v));
    }
    for (size_t k = 0; k < dvar.size(); ++k) {
        std::vector<Int> v(nvars, 0);
        v[nt + nz + k] = ipow(dvar[k].first->p, dvar[k].first->ka);
        relation_targets.push_back(std::move(v));
    }
    // divisible overlap generators: V columns past the rank, at full model precision
    for (const DivData& dd : divs) {
        for (size_t c = dd.sm.rank; c < dd.acols.size(); ++c) {
            std::vector<Int> v(nvars, 0);
            for (size_t k = 0; k < dvar.size(); ++k)
                if (dvar[k].first == &dd) v[nt + nz + k] = dd.sm.v.at(dvar[k].second, c);
            relation_targets.push_back(std::move(v));
        }
    }
    IntMat rels(khat.size(), relation_targets.size());
    for (size_t c = 0; c < relation_targets.size(); ++c) {
        auto sol = solve_integer(gens, relation_targets[c]);
        if (!sol) throw std::logic_error("kernel: relation not in generated lattice");
        for (size_t i = 0; i < khat.size(); ++i) rels.at(i, c) = (*sol)[i];
    }
    IntMat genmap;
    AbelianGroup reduced = AbelianGroup::from_presentation(khat.size(), rels, &genmap);

    // canonical-generator lifts back into model coordinates: pseudo-invert genmap
    // genmap: reduced-coords = genmap * khat-coeffs ; we need, per reduced summand,
    // a khat-combination mapping to the basis vector.
    std::vector<std::vector<Int>> lifts;  // per reduced summand: model vector
    {
        for (size_t r = 0; r < reduced.size(); ++r) {
            std::vector<Int> target(reduced.size(), 0);
            target[r] = 1;
            // solve genmap * x = target modulo the reduced moduli
            std::vector<Int> tmods(reduced.size());
            for (size_t i = 0; i < reduced.size(); ++i)
                tmods[i] = reduced.at(i).kind == Kind::Zn ? reduced.at(i).n : 0;
            IntMat gm(reduced.size(), khat.size());
            for (size_t i = 0; i < reduced.size(); ++i)
                for (size_t j = 0; j < khat.size(); ++j) gm.at(i, j) = genmap.at(i, j);
            auto sol = solve_congruences(gm, target, tmods);
            if (!sol) throw std::logic_error("kernel: generator lift failed");
            std::vector<Int> model(nvars, 0);
            for (size_t j = 0; j < khat.size(); ++j)
                for (size_t i = 0; i < nvars; ++i)
                    model[i] = checked_add(model[i], checked_mul((*sol)[j], khat[j][i]));
            lifts.push_back(std::move(model));
        }
    }

    auto model_to_element = [&](const std::vector<Int>& x) {
        Element e = Element::zero(dom);
        for (size_t j = 0; j < nt; ++j) e.c[A.tor[j]] = Rat(x[j]);
        for (size_t j = 0; j < nz; ++j) e.c[A.zfree[j]] = Rat(x[nt + j]);
        for (size_t k = 0; k < dvar.size(); ++k) {
            const DivData& dd = *dvar[k].first;
            e.c[dd.acols[dvar[k].second]] = Rat(x[nt + nz + k], ipow(dd.p, dd.ka));
        }
        // rational coordinates forced by z
        if (!A.q.empty()) {
            std::vector<Rat> rhs(B.q.size());
            for (size_t i = 0; i < B.q.size(); ++i) {
                Rat v;
                for (size_t j = 0; j < nz; ++j) v = v + RQz.at(i, j) * Rat(x[nt + j]);
                rhs[i] = -v;
            }
            auto w = rat_solve(RQw, rhs);
            if (!w) throw std::logic_error("kernel: rational sector inconsistent");
            for (size_t j = 0; j < A.q.size(); ++j) e.c[A.q[j]] = (*w)[j];
        }
        return normalize(dom, e);
    };

    // assemble the kernel group in canonical order
    std::vector<Summand> summands = reduced.summands();
    size_t kw = wker.size();
    for (size_t i = 0; i < kw; ++i) summands.push_back({Kind::Q, 0});
    for (const DivData& dd : divs)
        for (size_t c = 0; c < dd.nullity; ++c) summands.push_back({Kind::Zpinf, dd.p});
    BlockKernel out;
    out.group = AbelianGroup::make(summands);
    if (!(out.group.summands() == summands))
        throw std::logic_error("kernel: assembled summands not canonical");
    out.inject = RatMat(dom.size(), out.group.size());

    // reduced columns, with order correction against the divisible part
    for (size_t r = 0; r < reduced.size(); ++r) {
        Element e = model_to_element(lifts[r]);
        if (reduced.at(r).kind == Kind::Zn) {
            Int ord = reduced.at(r).n;
            Element d = scale(dom, ord, e);  // lies in the divisible kernel part
            // divide d by ord inside the divisible part and subtract
            Element h = Element::zero(dom);
            for (size_t j : A.q) h.c[j] = d.c[j] / Rat(ord);
            for (const DivData& dd : divs) {
                if (dd.acols.empty()) continue;
                // y = V^{-1} * d_div, supported on free columns
                std::vector<Rat> dv(dd.acols.size());
                for (size_t j = 0; j < dd.acols.size(); ++j) dv[j] = d.c[dd.acols[j]];
                // V^{-1} = the inverse of the unimodular V; solve V y = dv
                RatMat vmat(dd.acols.size(), dd.acols.size());
                for (size_t i = 0; i < dd.acols.size(); ++i)
                    for (size_t j = 0; j < dd.acols.size(); ++j)
                        vmat.at(i, j) = Rat(dd.sm.v.at(i, j));
                auto y = rat_solve(vmat, dv);
                if (!y) throw std::logic_error("kernel: V solve failed");
                // divide coordinates past the rank by ord (divisible division)
                std::vector<Rat> u(dd.acols.size());
                Int pv = ipow(dd.p, valuation(ord % dd.p == 0 ? ord : 1, dd.p));
                Int unit = ord / pv;
                for (size_t c2 = dd.sm.rank; c2 < dd.acols.size(); ++c2) {
                    Rat yc = (*y)[c2].mod1();
                    if (yc.is_zero()) continue;
                    // solve ord * u = yc in Z(p^inf): strip the unit, extend denominator
                    Int den = checked_mul(yc.den, pv);
                    Int num = yc.num;
                    // multiply by the inverse of `unit` modulo den
                    Int x0, y0;
                    Int g = ext_gcd(mod_pos(unit, den) == 0 ? 1 : mod_pos(unit, den), den, x0, y0);
                    if (g != 1) throw std::logic_error("kernel: unit inversion failed");
                    num = mod_pos(checked_mul(num, x0), den);
                    u[c2] = Rat(num, den);
                }
                for (size_t i = 0; i < dd.acols.size(); ++i) {
                    Rat acc;
                    for (size_t j = 0; j < dd.acols.size(); ++j)
                        acc = acc + Rat(dd.sm.v.at(i, j)) * u[j];
                    h.c[dd.acols[i]] = h.c[dd.acols[i]] + acc;
                }
            }
            h = normalize(dom, h);
            Element check = scale(dom, ord, h);
            for (size_t j = 0; j < dom.size(); ++j)
                if (!(check.c[j] == normalize(dom, d).c[j]))
                    throw std::logic_error("kernel: order correction failed");
            e = add(dom, e, neg(dom, h));
        }
        for (size_t j = 0; j < dom.size(); ++j) out.inject.at(j, r) = e.c[j];
    }
    // rational columns
    for (size_t i = 0; i < kw; ++i)
        for (size_t j = 0; j < A.q.size(); ++j)
            out.inject.at(A.q[j], reduced.size() + i) = wker[i][j];
    // Prüfer columns
    {
        size_t col = reduced.size() + kw;
        for (const DivData& dd : divs)
            for (size_t c = dd.sm.rank; c < dd.acols.size(); ++c, ++col)
                for (size_t j = 0; j < dd.acols.size(); ++j)
                    out.inject.at(dd.acols[j], col) = Rat(dd.sm.v.at(j, c));
    }
    validate_block(out.group, dom, out.inject, "kernel inclusion");
    return out;
}

// ---------------------------------------------------------------- preimage

std::optional<Element> block_preimage(const AbelianGroup& dom, const AbelianGroup& cod,
                                      const RatMat& m, const Element& target0) {
    Element target = normalize(cod, target0);
    Sectors A = classify(dom), B = classify(cod);

    RatMat RQw(B.q.size(), A.q.size()), RQz(B.q.size(), A.zfree.size());
    for (size_t i = 0; i < B.q.size(); ++i) {
        for (size_t j = 0; j < A.q.size(); ++j) RQw.at(i, j) = m.at(B.q[i], A.q[j]);
        for (size_t j = 0; j < A.zfree.size(); ++j) RQz.at(i, j) = m.at(B.q[i], A.zfree[j]);
    }
    std::vector<std::vector<Rat>> lnull = rat_left_nullspace(RQw);

    size_t nt = A.tor.size(), nz = A.zfree.size();
    struct DV {
        Int p;
        std::vector<size_t> acols, brows;
        int ka, kb;
    };
    std::vector<DV> divs;
    {
        std::map<Int, std::pair<std::vector<size_t>, std::vector<size_t>>> byp;
        for (auto& [p, idx] : A.div) byp[p].first = idx;
        for (auto& [p, idx] : B.div) byp[p].second = idx;
        for (auto& [p, pr] : byp) {
            DV dd{p, pr.first, pr.second, 0, 0};
            int vden = 0, vtor = 0, vtarget = 0;
            for (size_t bi : dd.brows) {
                for (size_t j : A.lat)
                    if (!m.at(bi, j).is_zero())
                        vden = std::max(vden, valuation(m.at(bi, j).den, p));
                if (!target.c[bi].is_zero())
                    vtarget = std::max(vtarget, valuation(target.c[bi].den, p));
            }
            IntMat dmat(dd.brows.size(), dd.acols.size());
            for (size_t i = 0; i < dd.brows.size(); ++i)
                for (size_t j = 0; j < dd.acols.size(); ++j)
                    dmat.at(i, j) = m.at(dd.brows[i], dd.acols[j]).num;
            Smith sm = smith_normal_form(dmat);
            int vdelta = 0;
            for (size_t i = 0; i < sm.rank; ++i)
                if (sm.diag(i) % p == 0) vdelta = std::max(vdelta, valuation(sm.diag(i), p));
            for (size_t j : A.tor)
                if (dom.at(j).n % p == 0) vtor = std::max(vtor, valuation(dom.at(j).n, p));
            dd.ka = vden + vtor + vdelta + vtarget + 2;
            dd.kb = dd.ka + vden + 1;
            divs.push_back(dd);
        }
    }
    std::vector<std::pair<const DV*, size_t>> dvar;
    for (const DV& dd : divs)
        for (size_t j = 0; j < dd.acols.size(); ++j) dvar.push_back({&dd, j});
    size_t nvars = nt + nz + dvar.size();

    std::vector<std::vector<Int>> rows;
    std::vector<Int> mods, rhs;
    for (size_t bi : B.zfree) {
        std::vector<Int> row(nvars, 0);
        for (size_t j = 0; j < nz; ++j) row[nt + j] = m.at(bi, A.zfree[j]).num;
        rows.push_back(std::move(row));
        mods.push_back(0);
        rhs.push_back(target.c[bi].num);
    }
    for (size_t bi : B.tor) {
        std::vector<Int> row(nvars, 0);
        for (size_t j = 0; j < nt; ++j) row[j] = m.at(bi, A.tor[j]).num;
        for (size_t j = 0; j < nz; ++j) row[nt + j] = m.at(bi, A.zfree[j]).num;
        rows.push_back(std::move(row));
        mods.push_back(cod.at(bi).n);
        rhs.push_back(target.c[bi].num);
    }
    for (const auto& y : lnull) {
        std::vector<Rat> row(nz);
        Rat r0;
        for (size_t i = 0; i < B.q.size(); ++i) r0 = r0 + y[i] * target.c[B.q[i]];
        Int den = r0.den;
        for (size_t j = 0; j < nz; ++j) {
            Rat v;
            for (size_t i = 0; i < B.q.size(); ++i) v = v + y[i] * RQz.at(i, j);
            row[j] = v;
            den = lcm_ll(den, v.den);
        }
        std::vector<Int> irow(nvars, 0);
        for (size_t j = 0; j < nz; ++j) irow[nt + j] = checked_mul(row[j].num, den / row[j].den);
        rows.push_back(std::move(irow));
        mods.push_back(0);
        rhs.push_back(checked_mul(r0.num, den / r0.den));
    }
    for (const DV& dd : divs) {
        Int pkb = ipow(dd.p, dd.kb);
        Int pshift = ipow(dd.p, dd.kb - dd.ka);
        for (size_t i = 0; i < dd.brows.size(); ++i) {
            std::vector<Int> row(nvars, 0);
            for (size_t j = 0; j < nt; ++j) {
                const Rat& e = m.at(dd.brows[i], A.tor[j]);
                if (!e.is_zero()) row[j] = checked_mul(e.num, pkb / e.den);
            }
            for (size_t j = 0; j < nz; ++j) {
                const Rat& e = m.at(dd.brows[i], A.zfree[j]);
                if (!e.is_zero()) row[nt + j] = checked_mul(e.num, pkb / e.den);
            }
            for (size_t k = 0; k < dvar.size(); ++k) {
                if (dvar[k].first != &dd) continue;
                Int c = m.at(dd.brows[i], dd.acols[dvar[k].second]).num;
                if (c != 0) row[nt + nz + k] = checked_mul(c, pshift);
            }
            rows.push_back(std::move(row));
            mods.push_back(pkb);
            const Rat& t = target.c[dd.brows[i]];
            rhs.push_back(t.is_zero() ? 0 : checked_mul(t.num, pkb / t.den));
        }
    }
    IntMat eq(rows.size(), nvars);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < nvars; ++j) eq.at(i, j) = rows[i][j];
    auto sol = solve_congruences(eq, rhs, mods);
    if (!sol) return std::nullopt;

    Element e = Element::zero(dom);
    for (size_t j = 0; j < nt; ++j) e.c[A.tor[j]] = Rat((*sol)[j]);
    for (size_t j = 0; j < nz; ++j) e.c[A.zfree[j]] = Rat((*sol)[nt + j]);
    for (size_t k = 0; k < dvar.size(); ++k) {
        const DV& dd = *dvar[k].first;
        e.c[dd.acols[dvar[k].second]] = Rat((*sol)[nt + nz + k], ipow(dd.p, dd.ka));
    }
    if (!A.q.empty() || !B.q.empty()) {
        std::vector<Rat> qrhs(B.q.size());
        for (size_t i = 0; i < B.q.size(); ++i) {
            Rat v = target.c[B.q[i]];
            for (size_t j = 0; j < nz; ++j) v = v - RQz.at(i, j) * e.c[A.zfree[j]];
            qrhs[i] = v;
        }
        auto w = rat_solve(RQw, qrhs);
        if (!w) return std::nullopt;
        for (size_t j = 0; j < A.q.size(); ++j) e.c[A.q[j]] = (*w)[j];
    }
    e = normalize(dom, e);
    Element img = apply_block(dom, cod, m, e);
    if (!(img.c == target.c)) throw std::logic_error("preimage: verification failed");
    return e;
}

// ---------------------------------------------------------------- cokernel

BlockCokernel block_cokernel(const AbelianGroup& dom, const AbelianGroup& cod, const RatMat& m) {
    Sectors A = classify(dom), B = classify(cod);

    // rational projection: left null space of the Q->Q sector
    RatMat SQ(B.q.size(), A.q.size());
    for (size_t i = 0; i < B.q.size(); ++i)
        for (size_t j = 0; j < A.q.size(); ++j) SQ.at(i, j) = m.at(B.q[i], A.q[j]);
    std::vector<std::vector<Rat>> pq = rat_left_nullspace(SQ);

    // divisible projections
    struct DP {
        Int p;
        std::vector<size_t> acols, brows;
        Smith sm;
        size_t corank = 0;
    };
    std::vector<DP> dps;
    {
        std::map<Int, std::pair<std::vector<size_t>, std::vector<size_t>>> byp;
        for (auto& [p, idx] : A.div) byp[p].first = idx;
        for (auto& [p, idx] : B.div) byp[p].second = idx;
        for (auto& [p, pr] : byp) {
            if (pr.second.empty()) continue;
            DP dp;
            dp.p = p;
            dp.acols = pr.first;
            dp.brows = pr.second;
            IntMat dmat(dp.brows.size(), dp.acols.size());
            for (size_t i = 0; i < dp.brows.size(); ++i)
                for (size_t j = 0; j < dp.acols.size(); ++j)
                    dmat.at(i, j) = m.at(dp.brows[i], dp.acols[j]).num;
            dp.sm = smith_normal_form(dmat);
            dp.corank = dp.brows.size() - dp.sm.rank;
            dps.push_back(std::move(dp));
        }
    }

    // pushed lattice generators
    size_t nlat = B.lat.size();
    size_t nj = A.lat.size();
    std::vector<std::vector<Int>> glat(nj, std::vector<Int>(nlat, 0));
    for (size_t j = 0; j < nj; ++j)
        for (size_t i = 0; i < nlat; ++i) {
            const Rat& e = m.at(B.lat[i], A.lat[j]);
            if (!e.is_zero()) glat[j][i] = e.num;
        }
    // rational components must project to zero
    for (size_t j : A.zfree)
        for (const auto& row : pq) {
            Rat v;
            for (size_t i = 0; i < B.q.size(); ++i) v = v + row[i] * m.at(B.q[i], j);
            if (!v.is_zero())
                throw UnsupportedGroupClass(
                    "cokernel has a Q-modulo-lattice piece outside the coefficient class");
        }
    // projected divisible components of the generators
    struct DivComp {
        const DP* dp;
        std::vector<Rat> v;  // length corank, entries mod 1
    };
    auto push_div = [&](size_t j) {
        std::vector<DivComp> comps;
        for (const DP& dp : dps) {
            DivComp c;
            c.dp = &dp;
            c.v.assign(dp.corank, Rat());
            for (size_t r = 0; r < dp.corank; ++r) {
                Rat acc;
                for (size_t i = 0; i < dp.brows.size(); ++i)
                    acc = acc + Rat(dp.sm.u.at(dp.sm.rank + r, i)) * m.at(dp.brows[i], j);
                c.v[r] = acc.mod1();
            }
            comps.push_back(std::move(c));
        }
        return comps;
    };
    std::vector<std::vector<DivComp>> gdiv;
    for (size_t j = 0; j < nj; ++j) gdiv.push_back(push_div(A.lat[j]));

    // reduced part: lattice modulo generators and codomain moduli
    IntMat rels(nlat, nj);
    for (size_t j = 0; j < nj; ++j)
        for (size_t i = 0; i < nlat; ++i) rels.at(i, j) = glat[j][i];
    // include codomain torsion moduli as relations
    size_t ntorB = B.tor.size();
    IntMat rels_full(nlat, nj + ntorB);
    for (size_t i = 0; i < nlat; ++i)
        for (size_t j = 0; j < nj; ++j) rels_full.at(i, j) = rels.at(i, j);
    for (size_t k = 0; k < ntorB; ++k) rels_full.at(k, nj + k) = cod.at(B.tor[k]).n;
    IntMat genmap;
    AbelianGroup red = AbelianGroup::from_presentation(nlat, rels_full, &genmap);

    // relations among the projected lattice generators -> finite subgroup F per prime
    std::vector<std::vector<Int>> csols;
    {
        size_t slack = ntorB;
        IntMat eq(nlat, nj + slack);
        for (size_t i = 0; i < nlat; ++i)
            for (size_t j = 0; j < nj; ++j) eq.at(i, j) = rels.at(i, j);
        for (size_t k = 0; k < ntorB; ++k) eq.at(k, nj + k) = cod.at(B.tor[k]).n;
        csols = kernel_lattice(eq);
        for (auto& v : csols) v.resize(nj);
    }
    // per-prime: F generated by sum_j c_j * gdiv[j]
    struct KillF {
        const DP* dp;
        IntMat t;  // corank x corank integer matrix with kernel exactly F
    };
    std::vector<KillF> kills;
    for (size_t di = 0; di < dps.size(); ++di) {
        const DP& dp = dps[di];
        std::vector<std::vector<Rat>> fgens;
        for (const auto& c : csols) {
            std::vector<Rat> f(dp.corank);
            bool nonzero = false;
            for (size_t j = 0; j < nj; ++j) {
                if (c[j] == 0) continue;
                for (size_t r = 0; r < dp.corank; ++r) f[r] = f[r] + Rat(c[j]) * gdiv[j][di].v[r];
            }
            for (auto& x : f) {
                x = x.mod1();
                nonzero = nonzero || !x.is_zero();
            }
            if (nonzero) fgens.push_back(std::move(f));
        }
        KillF kf;
        kf.dp = &dp;
        if (fgens.empty() || dp.corank == 0) {
            kf.t = IntMat::identity(dp.corank);
        } else {
            int lmax = 0;
            for (const auto& f : fgens)
                for (const Rat& x : f)
                    if (!x.is_zero()) lmax = std::max(lmax, valuation(x.den, dp.p));
            Int pl = ipow(dp.p, lmax);
            IntMat g(dp.corank, fgens.size());
            for (size_t c = 0; c < fgens.size(); ++c)
                for (size_t r = 0; r < dp.corank; ++r) {
                    const Rat& x = fgens[c][r];
                    g.at(r, c) = x.is_zero() ? 0 : checked_mul(x.num, pl / x.den);
                }
            Smith sf = smith_normal_form(g);
            // T = Uf^{-1} diag(p^{L - v_p(delta_i)}) Uf
            IntMat diag = IntMat::identity(dp.corank);
            for (size_t i = 0; i < sf.rank; ++i) {
                Int delta = sf.diag(i);
                int v = delta % dp.p == 0 ? valuation(delta, dp.p) : 0;
                diag.at(i, i) = ipow(dp.p, lmax - v);
            }
            // invert the unimodular Uf over the integers via rational solve
            RatMat uf(dp.corank, dp.corank);
            for (size_t i = 0; i < dp.corank; ++i)
                for (size_t j = 0; j < dp.corank; ++j) uf.at(i, j) = Rat(sf.u.at(i, j));
            IntMat ufinv(dp.corank, dp.corank);
            for (size_t c = 0; c < dp.corank; ++c) {
                std::vector<Rat> e(dp.corank);
                e[c] = Rat(1);
                auto x = rat_solve(uf, e);
                if (!x) throw std::logic_error("cokernel: U inversion failed");
                for (size_t i = 0; i < dp.corank; ++i) {
                    if (!(*x)[i].is_integer())
                        throw std::logic_error("cokernel: U not unimodular");
                    ufinv.at(i, c) = (*x)[i].num;
                }
            }
            kf.t = ufinv * diag * sf.u;
        }
        kills.push_back(std::move(kf));
    }

    // correction matrices C (per prime): C * lat-coords cancels the divisible
    // components of the pushed generators
    std::vector<RatMat> corrections;
    for (size_t di = 0; di < dps.size(); ++di) {
        const DP& dp = dps[di];
        const KillF& kf = kills[di];
        RatMat c(dp.corank, nlat);
        if (dp.corank > 0 && nj > 0) {
            // targets: T * (div comp of g_j)
            std::vector<std::vector<Rat>> tv(nj, std::vector<Rat>(dp.corank));
            int lb = 1;
            for (size_t j = 0; j < nj; ++j)
                for (size_t r = 0; r < dp.corank; ++r) {
                    Rat acc;
                    for (size_t s = 0; s < dp.corank; ++s)
                        acc = acc + Rat(kf.t.at(r, s)) * gdiv[j][di].v[s];
                    tv[j][r] = acc.mod1();
                    if (!tv[j][r].is_zero())
                        lb = std::max(lb, valuation(tv[j][r].den, dp.p));
                }
            for (size_t i = 0; i < nlat; ++i)
                if (B.lat[i] < cod.size() && cod.at(B.lat[i]).kind == Kind::Zn &&
                    cod.at(B.lat[i]).n % dp.p == 0)
                    lb = std::max(lb, valuation(cod.at(B.lat[i]).n, dp.p));
            lb += 1;
            Int plb = ipow(dp.p, lb);
            // unknowns u[r][i] over Z_{p^lb}: for each r solve sum_i u[r][i]*glat[j][i]
            //   == plb*tv[j][r] (mod plb), plus order constraints on torsion coords
            for (size_t r = 0; r < dp.corank; ++r) {
                std::vector<std::vector<Int>> rows;
                std::vector<Int> mods, rhs;
                for (size_t j = 0; j < nj; ++j) {
                    std::vector<Int> row(nlat, 0);
                    for (size_t i = 0; i < nlat; ++i) row[i] = glat[j][i];
                    rows.push_back(std::move(row));
                    mods.push_back(plb);
                    const Rat& t = tv[j][r];
                    rhs.push_back(t.is_zero() ? 0 : checked_mul(t.num, plb / t.den));
                }
                for (size_t i = 0; i < B.tor.size(); ++i) {
                    std::vector<Int> row(nlat, 0);
                    row[i] = cod.at(B.tor[i]).n;
                    rows.push_back(std::move(row));
                    mods.push_back(plb);
                    rhs.push_back(0);
                }
                IntMat eq(rows.size(), nlat);
                for (size_t i = 0; i < rows.size(); ++i)
                    for (size_t j2 = 0; j2 < nlat; ++j2) eq.at(i, j2) = rows[i][j2];
                auto sol = solve_congruences(eq, rhs, mods);
                if (!sol) throw std::logic_error("cokernel: correction solve failed");
                for (size_t i = 0; i < nlat; ++i)
                    c.at(r, i) = Rat((*sol)[i], plb).mod1();
            }
        }
        corrections.push_back(std::move(c));
    }

    // assemble the cokernel group
    std::vector<Summand> summands = red.summands();
    for (size_t i = 0; i < pq.size(); ++i) summands.push_back({Kind::Q, 0});
    for (const DP& dp : dps)
        for (size_t r = 0; r < dp.corank; ++r) summands.push_back({Kind::Zpinf, dp.p});
    BlockCokernel out;
    out.group = AbelianGroup::make(summands);
    if (!(out.group.summands() == summands))
        throw std::logic_error("cokernel: assembled summands not canonical");
    out.project = RatMat(out.group.size(), cod.size());
    for (size_t r = 0; r < red.size(); ++r)
        for (size_t i = 0; i < nlat; ++i)
            out.project.at(r, B.lat[i]) =
                normalize_entry(cod.at(B.lat[i]), red.at(r), Rat(genmap.at(r, i)));
    for (size_t r = 0; r < pq.size(); ++r)
        for (size_t i = 0; i < B.q.size(); ++i)
            out.project.at(red.size() + r, B.q[i]) = pq[r][i];
    {
        size_t row = red.size() + pq.size();
        for (size_t di = 0; di < dps.size(); ++di) {
            const DP& dp = dps[di];
            for (size_t r = 0; r < dp.corank; ++r, ++row) {
                // T * P_div on Prüfer coordinates
                for (size_t i = 0; i < dp.brows.size(); ++i) {
                    Int acc = 0;
                    for (size_t s = 0; s < dp.corank; ++s)
                        acc = checked_add(
                            acc, checked_mul(kills[di].t.at(r, s), dp.sm.u.at(dp.sm.rank + s, i)));
                    out.project.at(row, dp.brows[i]) = Rat(acc);
                }
                // minus the correction on lattice coordinates
                for (size_t i = 0; i < nlat; ++i) {
                    Rat v = -corrections[di].at(r, i);
                    out.project.at(row, B.lat[i]) =
                        normalize_entry(cod.at(B.lat[i]),
                                        Summand{Kind::Zpinf, dp.p}, v);
                }
            }
        }
    }
    validate_block(cod, out.group, out.project, "cokernel projection");
    // the projection must kill the image
    RatMat z = compose_blocks(dom, cod, out.group, out.project, m);
    for (size_t i = 0; i < out.group.size(); ++i)
        for (size_t j = 0; j < dom.size(); ++j)
            if (!entry_acts_zero(dom.at(j), out.group.at(i), z.at(i, j)))
                throw std::logic_error("cokernel: projection does not kill image");
    return out;
}

// ---------------------------------------------------------------- graded wrappers

KernelResult kernel(const GroupHom& f) {
    KernelResult r;
    r.inclusion.degree = 0;
    for (int d = 0; d < 8; ++d) {
        BlockKernel bk = block_kernel(f.dom.at(d), f.cod.at(d + f.degree), f.block(d));
        r.group.at(d) = bk.group;
        r.inclusion.blocks[d] = bk.inject;
    }
    r.inclusion.dom = r.group;
    r.inclusion.cod = f.dom;
    return r;
}

CokernelResult cokernel(const GroupHom& f) {
    CokernelResult r;
    r.projection.degree = 0;
    for (int d = 0; d < 8; ++d) {
        int cd = degmod8(d + f.degree);
        BlockCokernel bc = block_cokernel(f.dom.at(d), f.cod.at(cd), f.block(d));
        r.group.at(cd) = bc.group;
        r.projection.blocks[cd] = bc.project;
    }
    r.projection.dom = f.cod;
    r.projection.cod = r.group;
    return r;
}

std::optional<Element> preimage(const GroupHom& f, int srcdeg, const Element& target) {
    return block_preimage(f.dom.at(srcdeg), f.cod.at(srcdeg + f.degree), f.block(srcdeg), target);
}

bool GroupHom::is_bijective() const {
    KernelResult k = kernel(*this);
    if (!k.group.is_zero()) return false;
    CokernelResult c = cokernel(*this);
    return c.group.is_zero();
}

GroupHom GroupHom::inverse() const {
    GroupHom inv;
    inv.dom = cod;
    inv.cod = dom;
    inv.degree = -degree;
    for (int d = 0; d < 8; ++d) {
        int sd = degmod8(d - degree);  // block of the inverse at source degree d maps to sd
        const AbelianGroup& a = dom.at(sd);
        const AbelianGroup& b = cod.at(d);
        const RatMat& m = block(sd);
        RatMat r(a.size(), b.size());
        Sectors B = classify(b);
        // non-divisible columns via preimages of basis elements
        for (size_t j = 0; j < b.size(); ++j) {
            if (b.at(j).kind == Kind::Zpinf) continue;
            auto pre = block_preimage(a, b, m, Element::basis(b, j));
            if (!pre) throw std::logic_error("inverse: hom is not surjective");
            for (size_t i = 0; i < a.size(); ++i) r.at(i, j) = pre->c[i];
        }
        // divisible sector: invert the integer block per prime (must be unimodular)
        for (auto& [p, bidx] : B.div) {
            Sectors A = classify(a);
            auto it = A.div.find(p);
            std::vector<size_t> aidx = it == A.div.end() ? std::vector<size_t>{} : it->second;
            if (aidx.size() != bidx.size())
                throw std::logic_error("inverse: divisible ranks differ");
            RatMat dm(bidx.size(), aidx.size());
            for (size_t i = 0; i < bidx.size(); ++i)
                for (size_t j = 0; j < aidx.size(); ++j) dm.at(i, j) = m.at(bidx[i], aidx[j]);
            for (size_t c = 0; c < bidx.size(); ++c) {
                std::vector<Rat> e(bidx.size());
                e[c] = Rat(1);
                auto x = rat_solve(dm, e);
                if (!x) throw std::logic_error("inverse: divisible block singular");
                for (size_t i = 0; i < aidx.size(); ++i) {
                    if (!(*x)[i].is_integer())
                        throw UnsupportedGroupClass(
                            "inverse of a divisible block needs a non-integer multiplier");
                    r.at(aidx[i], bidx[c]) = (*x)[i];
                }
            }
        }
        inv.blocks[d] = r;
    }
    inv.validate();
    GroupHom check = compose(inv, *this);
    if (!(check == GroupHom::identity(dom)))
        throw std::logic_error("inverse: left identity check failed");
    GroupHom check2 = compose(*this, inv);
    if (!(check2 == GroupHom::identity(cod)))
        throw std::logic_error("inverse: right identity check failed");
    return inv;
}

// ---------------------------------------------------------------- exactness

ExactnessReport is_exact_at(const GroupHom& f, const GroupHom& g) {
    if (!(f.cod == g.dom)) throw std::invalid_argument("is_exact_at: composition mismatch");
    ExactnessReport rep;
    GroupHom gf = compose(g, f);
    for (int d = 0; d < 8; ++d) {
        const AbelianGroup& a = gf.dom.at(d);
        const AbelianGroup& b = gf.cod.at(d + gf.degree);
        for (size_t i = 0; i < b.size(); ++i)
            for (size_t j = 0; j < a.size(); ++j)
                if (!entry_acts_zero(a.at(j), b.at(i), gf.block(d).at(i, j))) {
                    rep.exact = false;
                    rep.fail_degree = d;
                    rep.detail = "g(f(x)) != 0 for domain generator " + std::to_string(j) +
                                 " at degree " + std::to_string(d);
                    return rep;
                }
    }
    KernelResult kg = kernel(g);
    CokernelResult cf = cokernel(f);
    GroupHom h = compose(cf.projection, kg.inclusion);
    for (int d = 0; d < 8; ++d) {
        const AbelianGroup& kd = kg.group.at(d);
        const AbelianGroup& cd = cf.group.at(d);
        for (size_t i = 0; i < cd.size(); ++i)
            for (size_t j = 0; j < kd.size(); ++j)
                if (!entry_acts_zero(kd.at(j), cd.at(i), h.block(d).at(i, j))) {
                    rep.exact = false;
                    rep.fail_degree = d;
                    rep.detail = "kernel generator " + std::to_string(j) + " at degree " +
                                 std::to_string(d) + " maps outside the image";
                    return rep;
                }
    }
    return rep;
}

}  // namespace crt
