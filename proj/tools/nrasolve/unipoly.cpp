#include "nrasolve/unipoly.hpp"

#include "nrasolve/budget.hpp"

#include <algorithm>
#include <sstream>

namespace nra {

using lyapsyn::rat_abs;
using lyapsyn::simplest_rational_between;

UPoly UPoly::from_mpoly(const MPoly& p, VarId v) {
    UPoly u;
    u.c.assign(p.deg(v) + 1, Rational(0));
    for (const auto& [m, coef] : p.terms()) {
        bool pure = true;
        for (const auto& [var, e] : m.pp)
            if (var != v) pure = false;
        if (!pure) throw SolveError("internal: from_mpoly on a non-univariate polynomial");
        u.c[m.deg(v)] += coef;
    }
    u.normalize();
    return u;
}

void UPoly::normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Rational UPoly::eval(const Rational& x) const {
    budget_spend(1 + (long)c.size() / 4);
    Rational acc(0);
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

int UPoly::sign_at(const Rational& x) const {
    Rational v = eval(x);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

UPoly UPoly::derivative() const {
    UPoly d;
    for (size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * Rational((long)i));
    d.normalize();
    return d;
}

UPoly UPoly::operator-() const {
    UPoly n = *this;
    for (auto& k : n.c) k = -k;
    return n;
}

UPoly UPoly::primitive() const {
    if (c.empty()) return *this;
    BigInt gnum(0), glcm(1);
    using boost::multiprecision::gcd;
    using boost::multiprecision::lcm;
    for (const auto& k : c) {
        if (k == 0) continue;
        gnum = gcd(gnum, BigInt(boost::multiprecision::abs(lyapsyn::rat_num(k))));
        glcm = lcm(glcm, lyapsyn::rat_den(k));
    }
    if (gnum == 0) return *this;
    Rational scale(glcm, gnum);
    UPoly out = *this;
    for (auto& k : out.c) k *= scale;
    return out;
}

std::string UPoly::str() const {
    std::ostringstream o;
    for (size_t i = c.size(); i-- > 0;)
        if (c[i] != 0) o << lyapsyn::rat_str(c[i]) << "*x^" << i << (i ? " + " : "");
    return c.empty() ? "0" : o.str();
}

namespace {
thread_local long g_budget = 4000000;
}  // namespace

void budget_reset(long units) { g_budget = units; }

void budget_spend(long units) {
    g_budget -= units;
    if (g_budget < 0) throw BudgetExceeded();
}

UPoly upoly_rem(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw SolveError("upoly_rem by zero");
    budget_spend(1 + a.degree());
    UPoly r = a;
    int db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        Rational q = r.c.back() / b.c.back();
        int shift = r.degree() - db;
        for (int i = 0; i <= db; ++i) r.c[i + shift] -= q * b.c[i];
        r.c.pop_back();
        r.normalize();
    }
    return r;
}

UPoly upoly_gcd(UPoly a, UPoly b) {
    a = a.primitive();
    b = b.primitive();
    while (!b.is_zero()) {
        UPoly r = upoly_rem(a, b).primitive();
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero() && a.c.back() < 0)
        for (auto& k : a.c) k = -k;
    return a;
}

UPoly square_free(const UPoly& p) {
    if (p.degree() <= 1) return p.primitive();
    UPoly g = upoly_gcd(p, p.derivative());
    if (g.degree() == 0) return p.primitive();
    // divide p by g exactly
    UPoly r = p;
    UPoly q;
    q.c.assign(p.degree() - g.degree() + 1, Rational(0));
    while (!r.is_zero() && r.degree() >= g.degree()) {
        Rational k = r.c.back() / g.c.back();
        int shift = r.degree() - g.degree();
        q.c[shift] = k;
        for (int i = 0; i <= g.degree(); ++i) r.c[i + shift] -= k * g.c[i];
        r.c.pop_back();
        r.normalize();
    }
    q.normalize();
    return q.primitive();
}

namespace {

// Sturm chain of a square-free polynomial.
std::vector<UPoly> sturm_chain(const UPoly& sf) {
    std::vector<UPoly> chain;
    chain.push_back(sf);
    chain.push_back(sf.derivative().primitive());
    while (!chain.back().is_zero() && chain.back().degree() >= 0) {
        UPoly r = upoly_rem(chain[chain.size() - 2], chain.back());
        if (r.is_zero()) break;
        r = r.primitive();
        for (auto& k : r.c) k = -k;
        chain.push_back(std::move(r));
        if (chain.back().degree() == 0) break;
    }
    return chain;
}

int variations(const std::vector<UPoly>& chain, const Rational& x) {
    int count = 0, prev = 0;
    for (const auto& p : chain) {
        int s = p.sign_at(x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// Number of roots in (a, b].
int count_roots(const std::vector<UPoly>& chain, const Rational& a, const Rational& b) {
    return variations(chain, a) - variations(chain, b);
}

void isolate_rec(const UPoly& sf, const std::vector<UPoly>& chain, const Rational& a, const Rational& b,
                 int count, std::vector<Root>& out) {
    if (count == 0) return;
    if (count == 1) {
        Root r;
        r.sf = sf;
        if (sf.sign_at(b) == 0) {
            r.exact = true;
            r.point = b;
        } else {
            r.lo = a;
            r.hi = b;
        }
        out.push_back(std::move(r));
        return;
    }
    Rational m = (a + b) / 2;
    int left = count_roots(chain, a, m);
    isolate_rec(sf, chain, a, m, left, out);
    isolate_rec(sf, chain, m, b, count - left, out);
}

}  // namespace

std::vector<Root> isolate_roots(const UPoly& p) {
    UPoly sf = square_free(p);
    if (sf.degree() <= 0) return {};
    if (sf.degree() == 1) {
        Root r;
        r.sf = sf;
        r.exact = true;
        r.point = -sf.c[0] / sf.c[1];
        return {r};
    }
    Rational maxr(0);
    for (int i = 0; i < sf.degree(); ++i) {
        Rational q = rat_abs(sf.c[i] / sf.c.back());
        if (q > maxr) maxr = q;
    }
    Rational bound = maxr + 2;
    auto chain = sturm_chain(sf);
    std::vector<Root> out;
    isolate_rec(sf, chain, -bound, bound, count_roots(chain, -bound, bound), out);
    return out;
}

void refine_root(Root& r) {
    if (r.exact) return;
    Rational m = (r.lo + r.hi) / 2;
    int sm = r.sf.sign_at(m);
    if (sm == 0) {
        r.exact = true;
        r.point = m;
        return;
    }
    // The root is simple and strictly inside; sf(hi) != 0 by construction, so
    // the sign matches hi's side exactly right of the root. (lo may be a
    // different root of sf, so its sign is not usable.)
    if (sm == r.sf.sign_at(r.hi))
        r.hi = m;
    else
        r.lo = m;
}

// Attempts to discover that an isolated root is a (simple) rational: the
// simplest rational in the interval is tested directly; a true rational root
// becomes the unique simplest candidate after enough refinement.
void try_exactify(Root& r, int rounds) {
    for (int i = 0; i < rounds && !r.exact; ++i) {
        auto cand = lyapsyn::simplest_rational_between(r.lo, true, r.hi, true);
        if (cand && r.sf.sign_at(*cand) == 0) {
            r.exact = true;
            r.point = *cand;
            return;
        }
        refine_root(r);
    }
}

int sign_at_root(const UPoly& q, Root& r) {
    if (r.exact) return q.sign_at(r.point);
    if (q.is_zero()) return 0;
    UPoly qsf = square_free(q);
    UPoly g = upoly_gcd(r.sf, qsf);
    if (g.degree() >= 1 && g.sign_at(r.lo) * g.sign_at(r.hi) < 0) return 0;
    auto qchain = sturm_chain(qsf);
    for (int rounds = 0; rounds < 4096; ++rounds) {
        int slo = q.sign_at(r.lo), shi = q.sign_at(r.hi);
        if (slo != 0 && slo == shi && count_roots(qchain, r.lo, r.hi) == 0) return slo;
        refine_root(r);
        if (r.exact) return q.sign_at(r.point);
    }
    throw SolveError("sign_at_root failed to converge");
}

namespace {

struct Critical {
    bool exact;
    Rational point;  // exact
    Root root;       // algebraic (root of the product poly)
    Rational lower() const { return exact ? point : root.lo; }
    Rational upper() const { return exact ? point : root.hi; }
};

struct Simpler {
    bool operator()(const Rational& a, const Rational& b) const {
        const BigInt da = lyapsyn::rat_den(a), db = lyapsyn::rat_den(b);
        if (da != db) return da < db;
        const BigInt na = boost::multiprecision::abs(lyapsyn::rat_num(a)),
                     nb = boost::multiprecision::abs(lyapsyn::rat_num(b));
        if (na != nb) return na < nb;
        return a > b;  // prefer the positive one
    }
};

}  // namespace

UniResult solve_univariate(const std::vector<UniAtom>& atoms_in) {
    std::vector<UniAtom> atoms;
    for (const auto& a : atoms_in) {
        if (a.p.is_zero() || a.p.degree() == 0) {
            int s = a.p.is_zero() ? 0 : (a.p.c[0] > 0 ? 1 : -1);
            if (!rel_holds(a.rel, s)) return {};
            continue;
        }
        atoms.push_back(a);
    }
    UniResult sat_none;
    if (atoms.empty()) {
        sat_none.kind = UniResult::SatModel;
        sat_none.model = Rational(0);
        return sat_none;
    }

    // Distinct square-free parts; rational roots of linear parts become exact
    // criticals, nonlinear parts are isolated per polynomial and merged.
    std::vector<Rational> exact_pts;
    std::vector<UPoly> included;
    for (const auto& a : atoms) {
        UPoly sf = square_free(a.p);
        if (sf.degree() == 1) {
            exact_pts.push_back(-sf.c[0] / sf.c[1]);
            continue;
        }
        bool dup = false;
        for (const auto& other : included)
            if (other == sf) dup = true;
        if (!dup) included.push_back(std::move(sf));
    }
    std::vector<Root> proots;
    for (const auto& sf : included)
        for (auto& r : isolate_roots(sf)) proots.push_back(std::move(r));
    for (auto& r : proots) try_exactify(r, 24);

    // Resolve rational criticals that coincide with isolated roots.
    std::sort(exact_pts.begin(), exact_pts.end());
    exact_pts.erase(std::unique(exact_pts.begin(), exact_pts.end()), exact_pts.end());
    for (auto& r : proots) {
        if (r.exact) continue;
        for (const auto& pt : exact_pts) {
            int guard = 0;
            while (!r.exact && pt > r.lo && pt < r.hi && ++guard < 512) {
                if (r.sf.sign_at(pt) == 0) {
                    r.exact = true;
                    r.point = pt;
                } else {
                    refine_root(r);
                }
            }
        }
    }
    // Deduplicate roots shared between polynomials: if two isolating intervals
    // keep overlapping, decide exact equality through the roots of the gcd.
    for (size_t i = 0; i < proots.size(); ++i) {
        for (size_t j = i + 1; j < proots.size();) {
            Root& a = proots[i];
            Root& b = proots[j];
            auto overlap = [&]() { return !(a.upper() < b.lower() || b.upper() < a.lower()); };
            if ((a.exact && b.exact)) {
                if (a.point == b.point) {
                    proots.erase(proots.begin() + j);
                    continue;
                }
                ++j;
                continue;
            }
            int rounds = 0;
            while (overlap() && rounds++ < 40) {
                refine_root(a);
                refine_root(b);
                if (a.exact && !b.exact && a.point > b.lo && a.point < b.hi &&
                    b.sf.sign_at(a.point) == 0) {
                    b.exact = true;
                    b.point = a.point;
                }
                if (b.exact && !a.exact && b.point > a.lo && b.point < a.hi &&
                    a.sf.sign_at(b.point) == 0) {
                    a.exact = true;
                    a.point = b.point;
                }
            }
            if (!overlap()) {
                ++j;
                continue;
            }
            if (a.exact && b.exact && a.point == b.point) {
                proots.erase(proots.begin() + j);
                continue;
            }
            // Persistent overlap: equal iff both are the same root of the gcd.
            UPoly g = upoly_gcd(a.sf, b.sf);
            bool equal = false;
            if (g.degree() >= 1) {
                auto groots = isolate_roots(g);
                auto locate = [&](Root& target) -> int {
                    for (int it = 0; it < 256; ++it) {
                        for (size_t k = 0; k < groots.size(); ++k) {
                            const Root& gr = groots[k];
                            if (target.lower() >= gr.lower() && target.upper() <= gr.upper())
                                return (int)k;
                        }
                        refine_root(target);
                        for (auto& gr : groots) refine_root(gr);
                    }
                    return -1;
                };
                int ka = locate(a), kb = locate(b);
                equal = ka >= 0 && ka == kb;
            }
            if (equal)
                proots.erase(proots.begin() + j);
            else
                ++j;
        }
    }
    // Final separation pass and assembly.
    bool changed = true;
    int guard = 0;
    do {
        changed = false;
        for (size_t i = 0; i < proots.size(); ++i)
            for (size_t j = i + 1; j < proots.size(); ++j) {
                Root& a = proots[i];
                Root& b = proots[j];
                if (a.exact && b.exact) continue;
                if (!(a.upper() < b.lower() || b.upper() < a.lower())) {
                    refine_root(a);
                    refine_root(b);
                    changed = true;
                }
            }
    } while (changed && ++guard < 4096);
    std::vector<Critical> crits;
    for (const auto& pt : exact_pts) {
        bool dup = false;
        for (const auto& r : proots)
            if (r.exact && r.point == pt) dup = true;
        if (!dup) crits.push_back(Critical{true, pt, Root{}});
    }
    for (auto& r : proots) {
        Critical c;
        c.exact = r.exact;
        if (r.exact)
            c.point = r.point;
        else
            c.root = r;
        crits.push_back(std::move(c));
    }
    std::sort(crits.begin(), crits.end(), [](const Critical& a, const Critical& b) {
        if (a.exact && b.exact) return a.point < b.point;
        return a.upper() < b.lower();
    });

    auto atom_signs_ok_at_rational = [&](const Rational& x) {
        for (const auto& a : atoms)
            if (!rel_holds(a.rel, a.p.sign_at(x))) return false;
        return true;
    };

    // Candidate models: rational criticals (descending), then gap samples by
    // simplicity.
    std::vector<Rational> rational_cands;
    for (const auto& c : crits)
        if (c.exact) rational_cands.push_back(c.point);
    std::sort(rational_cands.begin(), rational_cands.end(), std::greater<Rational>());
    for (const auto& x : rational_cands) {
        if (atom_signs_ok_at_rational(x)) {
            UniResult res;
            res.kind = UniResult::SatModel;
            res.model = x;
            return res;
        }
    }
    std::vector<Rational> samples;
    if (crits.empty()) {
        samples.push_back(Rational(0));
    } else {
        auto lo_of = [&](const Critical& c) { return c.exact ? c.point : c.root.lo; };
        auto hi_of = [&](const Critical& c) { return c.exact ? c.point : c.root.hi; };
        auto s0 = simplest_rational_between(std::nullopt, false, lo_of(crits.front()), true);
        if (s0) samples.push_back(*s0);
        for (size_t i = 0; i + 1 < crits.size(); ++i) {
            auto s = simplest_rational_between(hi_of(crits[i]), crits[i].exact,
                                               lo_of(crits[i + 1]), crits[i + 1].exact);
            if (s) samples.push_back(*s);
        }
        auto s1 = simplest_rational_between(hi_of(crits.back()), true, std::nullopt, false);
        if (s1) samples.push_back(*s1);
    }
    std::sort(samples.begin(), samples.end(), Simpler{});
    for (const auto& x : samples) {
        if (atom_signs_ok_at_rational(x)) {
            UniResult res;
            res.kind = UniResult::SatModel;
            res.model = x;
            return res;
        }
    }
    // Algebraic criticals can still witness satisfiability (no rational model).
    for (auto& c : crits) {
        if (c.exact) continue;
        bool ok = true;
        for (const auto& a : atoms) {
            UPoly p = a.p;
            if (!rel_holds(a.rel, sign_at_root(p, c.root))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            UniResult res;
            res.kind = UniResult::SatNoRational;
            return res;
        }
    }
    return {};
}

}  // namespace nra
