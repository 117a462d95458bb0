#include "nrasolve/elim.hpp"

#include "nrasolve/simplex.hpp"
#include "nrasolve/budget.hpp"

#include <algorithm>

namespace nra {

namespace {

constexpr int kMaxDepth = 64;
constexpr size_t kLocalDnfCap = 50000;
constexpr long kWorkBudget = 120000;

thread_local long g_work = 0;

Rel mirror_rel(Rel r) {
    switch (r) {
        case Rel::LT: return Rel::GT;
        case Rel::GT: return Rel::LT;
        case Rel::LE: return Rel::GE;
        case Rel::GE: return Rel::LE;
        default: return r;
    }
}

// Canonical atom: primitive polynomial with positive leading sign.
PAtom canonicalize(const PAtom& a) {
    MPoly p = a.p.primitive();
    if (p.leading_sign() < 0) return PAtom{-p, mirror_rel(a.rel)};
    return PAtom{p, a.rel};
}

enum class Sign { Pos, Neg, Zero, Unknown };

Sign sign_from_conj(const MPoly& c, const Conj& conj) {
    if (c.is_const()) {
        if (c.is_zero()) return Sign::Zero;
        return c.const_value() > 0 ? Sign::Pos : Sign::Neg;
    }
    MPoly cp = c.primitive();
    bool flipped = cp.leading_sign() < 0;
    if (flipped) cp = -cp;
    // c = k * (+-cp) with k > 0.
    for (const auto& a : conj) {
        if (!(a.p == cp)) continue;
        switch (a.rel) {
            case Rel::GT: return flipped ? Sign::Neg : Sign::Pos;
            case Rel::LT: return flipped ? Sign::Pos : Sign::Neg;
            case Rel::EQ: return Sign::Zero;
            default: break;
        }
    }
    return Sign::Unknown;
}

MPoly rebuild_without_power(const MPoly& p, VarId v, unsigned k) {
    auto cs = p.coeffs_in(v);
    MPoly acc;
    for (size_t i = 0; i < cs.size(); ++i) {
        if (i == k) continue;
        acc = acc + cs[i] * MPoly::var(v).pow((unsigned)i);
    }
    return acc;
}

struct Bound {
    MPoly num;   // v >=/<= num/den
    MPoly den;   // sign-known positive
    bool strict;
};

struct VarInfo {
    unsigned maxdeg = 0;
    bool linear_const = true;    // all occurrences deg 1 with constant coefficient
    bool linear_signed = true;   // all occurrences deg 1 with sign-determined coefficient
    bool vs_ok = true;           // deg <= 2, deg-2 coefs const, deg-1 atoms const coef
    MPoly blocker;               // a coefficient with unknown sign, when relevant
    bool has_blocker = false;
};

DecideOutcome decide(Conj conj, int depth);

DecideOutcome decide_formula(const Conj& fixed, const BForm& extra, int depth) {
    std::vector<Conj> branches = dnf(nnf(extra), kLocalDnfCap);
    bool any_unknown = false, any_nomodel = false;
    for (const auto& b : branches) {
        Conj merged = fixed;
        merged.insert(merged.end(), b.begin(), b.end());
        DecideOutcome sub = decide(std::move(merged), depth + 1);
        if (sub.kind == DecideOutcome::Sat) return sub;
        if (sub.kind == DecideOutcome::Unknown) any_unknown = true;
        if (sub.kind == DecideOutcome::SatNoModel) any_nomodel = true;
    }
    DecideOutcome out;
    out.kind = any_nomodel ? DecideOutcome::SatNoModel
                           : (any_unknown ? DecideOutcome::Unknown : DecideOutcome::Unsat);
    return out;
}

// ---------------------------------------------------------------------------
// Virtual substitution test points
// ---------------------------------------------------------------------------

struct TestPoint {
    enum Kind { MinusInf, Lin, Quad } kind = MinusInf;
    // Lin: v = num/den with den of known nonzero sign.
    // Quad: v = (-b + sign*sqrt(disc))/(2a) with constant a.
    MPoly num, den;
    int den_sign = 1;
    Rational a{0};
    MPoly b, c;
    int sqrt_sign = 1;
    bool plus_delta = false;
    MPoly disc() const { return b * b - MPoly::constant(Rational(4) * a) * c; }
};

// Condition for "value rel 0" where value = (A + B*sqrt(s)) and s >= 0.
BForm sqrt_cond(const MPoly& A, const MPoly& B, const MPoly& s, Rel rel) {
    auto atom = [](const MPoly& p, Rel r) { return BForm::make_atom(p, r); };
    MPoly mag = A * A - s * (B * B);
    switch (rel) {
        case Rel::GE:
            return BForm::make_or({BForm::make_and({atom(A, Rel::GE), atom(B, Rel::GE)}),
                                   BForm::make_and({atom(B, Rel::GE), atom(-mag, Rel::GE)}),
                                   BForm::make_and({atom(A, Rel::GE), atom(mag, Rel::GE)})});
        case Rel::GT:
            return BForm::make_or({BForm::make_and({atom(A, Rel::GT), atom(B, Rel::GE)}),
                                   BForm::make_and({atom(B, Rel::GE), atom(-mag, Rel::GT)}),
                                   BForm::make_and({atom(A, Rel::GT), atom(mag, Rel::GT)})});
        case Rel::LE: return sqrt_cond(-A, -B, s, Rel::GE);
        case Rel::LT: return sqrt_cond(-A, -B, s, Rel::GT);
        case Rel::EQ:
            return BForm::make_and({atom(A * B, Rel::LE), atom(mag, Rel::EQ)});
        case Rel::NE:
            return BForm::make_or({atom(A * B, Rel::GT), atom(mag, Rel::NE)});
    }
    return BForm::make_false();
}

// Condition for "P(test point) rel 0" (no delta), P given by coefficients in v.
BForm value_cond(const std::vector<MPoly>& coefs, const TestPoint& tp, Rel rel) {
    if (tp.kind == TestPoint::Lin) {
        // P(n/d) * d^deg, with sign(d) known
        MPoly acc;
        std::vector<MPoly> dpows(coefs.size());
        for (size_t i = 0; i < coefs.size(); ++i)
            dpows[i] = tp.den.pow((unsigned)(coefs.size() - 1 - i));
        MPoly npow = MPoly::constant(Rational(1));
        for (size_t i = 0; i < coefs.size(); ++i) {
            acc = acc + coefs[i] * npow * dpows[i];
            npow = npow * tp.num;
        }
        bool flip = tp.den_sign < 0 && ((coefs.size() - 1) % 2 == 1);
        return BForm::make_atom(acc, flip ? mirror_rel(rel) : rel);
    }
    if (tp.kind == TestPoint::Quad) {
        // v = (q + r*sqrt(s)) / t with q = -b, r = +-1, t = 2a constant.
        MPoly s = tp.disc();
        MPoly q = -tp.b;
        Rational t = 2 * tp.a;
        int deg = (int)coefs.size() - 1;
        // alpha_k + beta_k*sqrt(s) = (q + r*sqrt(s))^k
        MPoly A, B;
        MPoly alpha = MPoly::constant(Rational(1)), beta;
        for (int k = 0; k <= deg; ++k) {
            Rational tp_scale = lyapsyn::rat_pow(t, (unsigned)(deg - k));
            A = A + coefs[k] * alpha.scaled(tp_scale);
            B = B + coefs[k] * beta.scaled(tp_scale);
            if (k < deg) {
                MPoly alpha2 = q * alpha + s * beta.scaled(Rational(tp.sqrt_sign));
                MPoly beta2 = alpha.scaled(Rational(tp.sqrt_sign)) + q * beta;
                alpha = std::move(alpha2);
                beta = std::move(beta2);
            }
        }
        bool flip = t < 0 && (deg % 2 == 1);
        return sqrt_cond(A, B, s, flip ? mirror_rel(rel) : rel);
    }
    // MinusInf: cascade over the highest nonzero coefficient.
    std::vector<BForm> cases;
    for (int k = (int)coefs.size() - 1; k >= 0; --k) {
        std::vector<BForm> conj;
        for (int j = (int)coefs.size() - 1; j > k; --j) conj.push_back(BForm::make_atom(coefs[j], Rel::EQ));
        bool odd = (k % 2) == 1;
        Rel eff;
        switch (rel) {
            case Rel::GT:
            case Rel::GE: eff = Rel::GT; break;
            case Rel::LT:
            case Rel::LE: eff = Rel::LT; break;
            case Rel::EQ: continue;  // only the all-zero case below
            case Rel::NE: eff = Rel::NE; break;
        }
        if (k > 0 && odd) eff = mirror_rel(eff);
        conj.push_back(BForm::make_atom(coefs[k], eff));
        cases.push_back(BForm::make_and(std::move(conj)));
    }
    if (rel == Rel::GE || rel == Rel::LE || rel == Rel::EQ) {
        std::vector<BForm> allz;
        for (const auto& c : coefs) allz.push_back(BForm::make_atom(c, Rel::EQ));
        cases.push_back(BForm::make_and(std::move(allz)));
    }
    return BForm::make_or(std::move(cases));
}

// Condition for "P(test point + delta) rel 0": sign of the first nonzero
// derivative at the test point.
BForm delta_cond(const std::vector<MPoly>& coefs, VarId v, const TestPoint& tp, Rel rel) {
    // derivative coefficient lists: d_j[i] coefficients of P^(j)
    std::vector<std::vector<MPoly>> derivs;
    derivs.push_back(coefs);
    while (derivs.back().size() > 1) {
        const auto& prev = derivs.back();
        std::vector<MPoly> d;
        for (size_t i = 1; i < prev.size(); ++i) d.push_back(prev[i].scaled(Rational((long)i)));
        derivs.push_back(std::move(d));
    }
    Rel want;
    switch (rel) {
        case Rel::GT:
        case Rel::GE: want = Rel::GT; break;
        case Rel::LT:
        case Rel::LE: want = Rel::LT; break;
        case Rel::EQ: want = Rel::EQ; break;
        case Rel::NE: want = Rel::NE; break;
    }
    std::vector<BForm> cases;
    if (want == Rel::EQ) {
        std::vector<BForm> allz;
        for (const auto& d : derivs) allz.push_back(value_cond(d, tp, Rel::EQ));
        return BForm::make_and(std::move(allz));
    }
    if (want == Rel::NE) {
        for (size_t k = 0; k < derivs.size(); ++k) {
            std::vector<BForm> conj;
            for (size_t j = 0; j < k; ++j) conj.push_back(value_cond(derivs[j], tp, Rel::EQ));
            conj.push_back(value_cond(derivs[k], tp, Rel::NE));
            cases.push_back(BForm::make_and(std::move(conj)));
        }
        return BForm::make_or(std::move(cases));
    }
    for (size_t k = 0; k < derivs.size(); ++k) {
        std::vector<BForm> conj;
        for (size_t j = 0; j < k; ++j) conj.push_back(value_cond(derivs[j], tp, Rel::EQ));
        conj.push_back(value_cond(derivs[k], tp, want));
        cases.push_back(BForm::make_and(std::move(conj)));
    }
    if (rel == Rel::GE || rel == Rel::LE) {
        std::vector<BForm> allz;
        for (const auto& d : derivs) allz.push_back(value_cond(d, tp, Rel::EQ));
        cases.push_back(BForm::make_and(std::move(allz)));
    }
    return BForm::make_or(std::move(cases));
}

// ---------------------------------------------------------------------------
// Model reconstruction helpers
// ---------------------------------------------------------------------------

std::optional<Rational> pick_from_bounds(const std::vector<std::pair<Rational, bool>>& lowers,
                                         const std::vector<std::pair<Rational, bool>>& uppers) {
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& [val, strict] : lowers) {
        if (!lo || val > *lo) {
            lo = val;
            lo_strict = strict;
        } else if (val == *lo && strict) {
            lo_strict = true;
        }
    }
    for (const auto& [val, strict] : uppers) {
        if (!hi || val < *hi) {
            hi = val;
            hi_strict = strict;
        } else if (val == *hi && strict) {
            hi_strict = true;
        }
    }
    if (lo && hi && (*lo > *hi || (*lo == *hi && (lo_strict || hi_strict)))) return std::nullopt;
    // Boundary preference: the greatest closed rational endpoint.
    if (hi && !hi_strict) return *hi;
    if (lo && !lo_strict) return *lo;
    return lyapsyn::simplest_rational_between(lo, lo_strict, hi, hi_strict);
}

// ---------------------------------------------------------------------------
// The decision procedure
// ---------------------------------------------------------------------------

DecideOutcome decide(Conj conj, int depth) {
    DecideOutcome out;
    if (depth > kMaxDepth || ++g_work > kWorkBudget) {
        out.kind = DecideOutcome::Unknown;
        out.reason = depth > kMaxDepth ? "depth limit" : "work budget exceeded";
        return out;
    }
    // Normalize: canonical atoms, fold constants, dedupe, split NE.
    Conj atoms;
    for (const auto& raw : conj) {
        PAtom a = canonicalize(raw);
        if (a.p.is_const()) {
            int s = a.p.is_zero() ? 0 : (a.p.const_value() > 0 ? 1 : -1);
            if (!rel_holds(a.rel, s)) {
                out.kind = DecideOutcome::Unsat;
                return out;
            }
            continue;
        }
        bool dup = false;
        for (const auto& b : atoms)
            if (b.rel == a.rel && b.p == a.p) dup = true;
        if (!dup) atoms.push_back(std::move(a));
    }
    // Same-polynomial contradictions kill a branch before any elimination.
    for (size_t i = 0; i < atoms.size(); ++i)
        for (size_t j = i + 1; j < atoms.size(); ++j) {
            if (!(atoms[i].p == atoms[j].p)) continue;
            Rel x = atoms[i].rel, y = atoms[j].rel;
            if (x > y) std::swap(x, y);
            bool clash = (x == Rel::LT && (y == Rel::GT || y == Rel::GE || y == Rel::EQ)) ||
                         (x == Rel::LE && y == Rel::GT) || (x == Rel::GT && y == Rel::EQ);
            if (clash) {
                out.kind = DecideOutcome::Unsat;
                return out;
            }
        }
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].rel != Rel::NE) continue;
        PAtom gt{atoms[i].p, Rel::GT}, lt{atoms[i].p, Rel::LT};
        Conj rest = atoms;
        rest[i] = gt;
        DecideOutcome first = decide(rest, depth + 1);
        if (first.kind == DecideOutcome::Sat) return first;
        rest[i] = lt;
        DecideOutcome second = decide(rest, depth + 1);
        if (second.kind == DecideOutcome::Sat) return second;
        for (auto k : {first.kind, second.kind})
            if (k == DecideOutcome::SatNoModel) {
                out.kind = DecideOutcome::SatNoModel;
                return out;
            }
        for (auto k : {first.kind, second.kind})
            if (k == DecideOutcome::Unknown) {
                out.kind = DecideOutcome::Unknown;
                return out;
            }
        out.kind = DecideOutcome::Unsat;
        return out;
    }
    if (atoms.empty()) {
        out.kind = DecideOutcome::Sat;
        return out;
    }
    std::set<VarId> var_set;
    for (const auto& a : atoms)
        for (VarId v : a.p.vars()) var_set.insert(v);
    std::vector<VarId> vars(var_set.begin(), var_set.end());

    // Univariate endgame.
    if (vars.size() == 1) {
        std::vector<UniAtom> us;
        for (const auto& a : atoms) us.push_back({UPoly::from_mpoly(a.p, vars[0]), a.rel});
        UniResult ur = solve_univariate(us);
        switch (ur.kind) {
            case UniResult::Unsat: out.kind = DecideOutcome::Unsat; return out;
            case UniResult::SatNoRational: out.kind = DecideOutcome::SatNoModel; return out;
            case UniResult::SatModel:
                out.kind = DecideOutcome::Sat;
                out.model[vars[0]] = ur.model;
                return out;
        }
    }

    // Pure linear conjunction: exact simplex with its own model policy.
    bool all_linear = true;
    for (const auto& a : atoms)
        if (a.p.total_deg() > 1) all_linear = false;
    if (all_linear) return solve_linear(atoms, vars);

    // Equality substitution: v = rhs with constant coefficient.
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        VarId v = *it;
        for (size_t i = 0; i < atoms.size(); ++i) {
            const PAtom& a = atoms[i];
            if (a.rel != Rel::EQ || a.p.deg(v) != 1) continue;
            auto cs = a.p.coeffs_in(v);
            if (!cs[1].is_const()) continue;
            MPoly rhs = cs[0].scaled(Rational(-1) / cs[1].const_value());
            Conj reduced;
            for (size_t j = 0; j < atoms.size(); ++j) {
                if (j == i) continue;
                reduced.push_back({atoms[j].p.subst(v, rhs), atoms[j].rel});
            }
            DecideOutcome sub = decide(std::move(reduced), depth + 1);
            if (sub.kind != DecideOutcome::Sat) return sub;
            for (VarId w : vars)
                if (w != v && !sub.model.count(w)) sub.model[w] = Rational(0);
            sub.model[v] = rhs.eval(sub.model);
            return sub;
        }
    }

    // Classify variables.
    std::map<VarId, VarInfo> info;
    for (VarId v : vars) info[v] = VarInfo{};
    for (const auto& a : atoms) {
        for (VarId v : vars) {
            unsigned d = a.p.deg(v);
            if (d == 0) continue;
            VarInfo& vi = info[v];
            vi.maxdeg = std::max(vi.maxdeg, d);
            auto cs = a.p.coeffs_in(v);
            if (d > 2) vi.vs_ok = false;
            if (d >= 2) {
                vi.linear_const = vi.linear_signed = false;
                if (d == 2 && !cs[2].is_const()) {
                    Sign s2 = sign_from_conj(cs[2], atoms);
                    if (s2 == Sign::Zero) {
                        Conj rewritten = atoms;
                        for (auto& at : rewritten) {
                            auto cc = at.p.coeffs_in(v);
                            if (cc.size() > 2 && cc[2] == cs[2]) at.p = rebuild_without_power(at.p, v, 2);
                        }
                        return decide(std::move(rewritten), depth + 1);
                    }
                    vi.vs_ok = false;
                    // Splitting helps only while the sign is open; a known-sign
                    // polynomial lead stays outside the VS fragment.
                    if (s2 == Sign::Unknown && !vi.has_blocker) {
                        vi.blocker = cs[2];
                        vi.has_blocker = true;
                    }
                }
            }
            if (d == 1) {
                if (!cs[1].is_const()) {
                    vi.linear_const = false;
                    Sign s = sign_from_conj(cs[1], atoms);
                    if (s == Sign::Unknown) {
                        vi.linear_signed = false;
                        vi.vs_ok = false;
                        if (!vi.has_blocker) {
                            vi.blocker = cs[1];
                            vi.has_blocker = true;
                        }
                    } else if (s == Sign::Zero) {
                        // Coefficient entailed zero: rewrite and restart.
                        Conj rewritten = atoms;
                        for (auto& at : rewritten) {
                            auto cc = at.p.coeffs_in(v);
                            if (cc.size() > 1 && cc[1] == cs[1]) at.p = rebuild_without_power(at.p, v, 1);
                        }
                        return decide(std::move(rewritten), depth + 1);
                    }
                    // sign-entailed coefficients stay eligible for VS roots
                }
            }
        }
    }

    // Fourier-Motzkin elimination of a linear variable (highest id first).
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        VarId v = *it;
        const VarInfo& vi = info[v];
        if (vi.maxdeg != 1 || !(vi.linear_const || vi.linear_signed)) continue;
        std::vector<Bound> lowers, uppers;
        Conj reduced;
        bool ok = true;
        for (const auto& a : atoms) {
            if (a.p.deg(v) == 0) {
                reduced.push_back(a);
                continue;
            }
            auto cs = a.p.coeffs_in(v);
            MPoly c = cs[1], d = cs[0];
            Sign s = c.is_const() ? (c.const_value() > 0 ? Sign::Pos : Sign::Neg) : sign_from_conj(c, atoms);
            if (s != Sign::Pos && s != Sign::Neg) {
                ok = false;
                break;
            }
            MPoly den = s == Sign::Pos ? c : -c;  // positive
            MPoly num = s == Sign::Pos ? -d : d;
            // c*v + d rel 0  <=>  v rel' num/den
            Rel rel = s == Sign::Pos ? a.rel : mirror_rel(a.rel);
            switch (rel) {
                case Rel::GE: lowers.push_back({num, den, false}); break;
                case Rel::GT: lowers.push_back({num, den, true}); break;
                case Rel::LE: uppers.push_back({num, den, false}); break;
                case Rel::LT: uppers.push_back({num, den, true}); break;
                case Rel::EQ:
                    lowers.push_back({num, den, false});
                    uppers.push_back({num, den, false});
                    break;
                default: ok = false; break;
            }
            if (!ok) break;
        }
        if (!ok) continue;
        for (const auto& lo : lowers)
            for (const auto& hi : uppers) {
                // num_lo/den_lo <= num_hi/den_hi with positive denominators
                MPoly diff = hi.num * lo.den - lo.num * hi.den;
                reduced.push_back({diff, (lo.strict || hi.strict) ? Rel::GT : Rel::GE});
            }
        DecideOutcome sub = decide(std::move(reduced), depth + 1);
        if (sub.kind != DecideOutcome::Sat) return sub;
        for (VarId w : vars)
            if (w != v && !sub.model.count(w)) sub.model[w] = Rational(0);
        std::vector<std::pair<Rational, bool>> lvals, uvals;
        for (const auto& lo : lowers)
            lvals.push_back({lo.num.eval(sub.model) / lo.den.eval(sub.model), lo.strict});
        for (const auto& hi : uppers)
            uvals.push_back({hi.num.eval(sub.model) / hi.den.eval(sub.model), hi.strict});
        auto val = pick_from_bounds(lvals, uvals);
        if (!val) {
            out.kind = DecideOutcome::Unknown;
            out.reason = "internal: empty FM interval";
            return out;
        }
        sub.model[v] = *val;
        return sub;
    }

    // Sign split on a blocking coefficient.
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        const VarInfo& vi = info[*it];
        if (!vi.has_blocker) continue;
        const MPoly& c = vi.blocker;
        bool any_unknown = false, any_nomodel = false;
        for (Rel r : {Rel::GT, Rel::LT, Rel::EQ}) {
            Conj branch = atoms;
            branch.push_back({c, r});
            DecideOutcome sub = decide(std::move(branch), depth + 1);
            if (sub.kind == DecideOutcome::Sat) return sub;
            if (sub.kind == DecideOutcome::Unknown) any_unknown = true;
            if (sub.kind == DecideOutcome::SatNoModel) any_nomodel = true;
        }
        out.kind = any_nomodel ? DecideOutcome::SatNoModel
                               : (any_unknown ? DecideOutcome::Unknown : DecideOutcome::Unsat);
        return out;
    }

    // Quadratic virtual substitution (highest eligible variable).
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        VarId v = *it;
        const VarInfo& vi = info[v];
        if (!vi.vs_ok || vi.maxdeg < 1 || vi.maxdeg > 2) continue;
        Conj fixed;
        std::vector<const PAtom*> with_v;
        for (const auto& a : atoms) {
            if (a.p.deg(v) == 0)
                fixed.push_back(a);
            else
                with_v.push_back(&a);
        }
        std::vector<TestPoint> tps;
        tps.push_back(TestPoint{});  // -inf
        bool roots_ok = true;
        auto add_roots = [&](bool delta) {
            for (const PAtom* ap : with_v) {
                auto cs = ap->p.coeffs_in(v);
                if (cs.size() == 2) {
                    TestPoint tp;
                    tp.kind = TestPoint::Lin;
                    tp.num = -cs[0];
                    tp.den = cs[1];
                    if (cs[1].is_const()) {
                        tp.den_sign = cs[1].const_value() > 0 ? 1 : -1;
                    } else {
                        Sign s = sign_from_conj(cs[1], atoms);
                        if (s == Sign::Pos)
                            tp.den_sign = 1;
                        else if (s == Sign::Neg)
                            tp.den_sign = -1;
                        else {
                            roots_ok = false;
                            return;
                        }
                    }
                    tp.plus_delta = delta;
                    tps.push_back(std::move(tp));
                } else if (cs.size() == 3) {
                    for (int sgn : {-1, 1}) {
                        TestPoint tp;
                        tp.kind = TestPoint::Quad;
                        tp.a = cs[2].const_value();
                        tp.b = cs[1];
                        tp.c = cs[0];
                        tp.sqrt_sign = sgn;
                        tp.plus_delta = delta;
                        tps.push_back(std::move(tp));
                    }
                }
            }
        };
        add_roots(false);
        if (roots_ok) add_roots(true);
        if (!roots_ok) continue;

        bool any_unknown = false, any_nomodel = false;
        for (const auto& tp : tps) {
            std::vector<BForm> cond;
            if (tp.kind == TestPoint::Quad) cond.push_back(BForm::make_atom(tp.disc(), Rel::GE));
            for (const PAtom* ap : with_v) {
                auto cs = ap->p.coeffs_in(v);
                cond.push_back(tp.kind != TestPoint::MinusInf && tp.plus_delta
                                   ? delta_cond(cs, v, tp, ap->rel)
                                   : value_cond(cs, tp, ap->rel));
            }
            DecideOutcome sub = decide_formula(fixed, BForm::make_and(std::move(cond)), depth);
            if (sub.kind == DecideOutcome::Unknown) {
                any_unknown = true;
                continue;
            }
            if (sub.kind == DecideOutcome::SatNoModel) {
                any_nomodel = true;
                continue;
            }
            if (sub.kind != DecideOutcome::Sat) continue;
            // Recover a rational value for v from the original atoms.
            for (VarId w : vars) {
                if (w == v) continue;
                if (!sub.model.count(w)) sub.model[w] = Rational(0);
            }
            std::vector<UniAtom> us;
            bool eval_ok = true;
            for (const PAtom* ap : with_v) {
                MPoly p = ap->p;
                for (const auto& [w, val] : sub.model)
                    if (w != v) p = p.subst_rat(w, val);
                if (p.vars().count(v) == 0 && !p.is_const()) {
                    eval_ok = false;
                    break;
                }
                us.push_back({UPoly::from_mpoly(p, v), ap->rel});
            }
            if (!eval_ok) {
                any_unknown = true;
                continue;
            }
            UniResult ur = solve_univariate(us);
            if (ur.kind == UniResult::SatModel) {
                sub.model[v] = ur.model;
                return sub;
            }
            if (ur.kind == UniResult::SatNoRational) {
                any_nomodel = true;
                continue;
            }
            any_unknown = true;  // should not happen: test point guarantees existence
        }
        out.kind = any_nomodel ? DecideOutcome::SatNoModel
                               : (any_unknown ? DecideOutcome::Unknown : DecideOutcome::Unsat);
        return out;
    }

    out.kind = DecideOutcome::Unknown;
    out.reason = "no elimination strategy applies (degree too high in multiple variables)";
    return out;
}

}  // namespace

DecideOutcome decide_conj(const Conj& conj, int depth) {
    g_work = 0;
    try {
        return decide(conj, depth);
    } catch (const BudgetExceeded&) {
        DecideOutcome out;
        out.kind = DecideOutcome::Unknown;
        out.reason = "work budget exceeded";
        return out;
    }
}

}  // namespace nra
