#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nrasolve/solver.hpp"
#include "nrasolve/unipoly.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace nra;
using lyapsyn::Rational;
using lyapsyn::rat_str;

namespace {

std::string run_script(const std::string& script) {
    std::istringstream in(script);
    std::ostringstream out, err;
    run_session(in, out, err);
    return out.str();
}

std::string first_line(const std::string& s) {
    auto nl = s.find('\n');
    return nl == std::string::npos ? s : s.substr(0, nl);
}

MPoly from_expr(const std::string& text, SymTab& syms) {
    // tiny helper: parse via formula machinery by comparing to 0
    auto nodes = lyapsyn::sexpr_parse_all("(= " + text + " 0)");
    BForm f = parse_formula(nodes[0], syms);
    REQUIRE(f.kind == BForm::Atom);
    return f.atom.p;
}

}  // namespace

TEST_CASE("mpoly arithmetic and substitution") {
    SymTab syms;
    VarId x = syms.intern("x"), y = syms.intern("y");
    MPoly p = (MPoly::var(x) + MPoly::var(y)).pow(2);
    CHECK(p.deg(x) == 2);
    CHECK(p.coeffs_in(x).size() == 3);
    CHECK(p.coeffs_in(x)[1] == MPoly::var(y).scaled(Rational(2)));
    MPoly q = p.subst_rat(y, Rational(1, 2));
    CHECK(q.eval({{x, Rational(1, 2)}}) == Rational(1));
    CHECK(p.derivative(x) == MPoly::var(x).scaled(Rational(2)) + MPoly::var(y).scaled(Rational(2)));
    CHECK((MPoly::var(x) * MPoly::var(x) - MPoly::var(x) * MPoly::var(x)).is_zero());
}

TEST_CASE("univariate root isolation") {
    SymTab syms;
    VarId x = syms.intern("x");
    // x*(x-2)*(x^2+6)/12 : roots exactly 0 and 2
    MPoly p = MPoly::var(x) * (MPoly::var(x) - MPoly::constant(Rational(2))) *
              (MPoly::var(x) * MPoly::var(x) + MPoly::constant(Rational(6)));
    auto roots = isolate_roots(UPoly::from_mpoly(p, x));
    REQUIRE(roots.size() == 2);
    try_exactify(roots[0], 24);
    try_exactify(roots[1], 24);
    CHECK(roots[0].exact);
    CHECK(roots[0].point == Rational(0));
    CHECK(roots[1].exact);
    CHECK(roots[1].point == Rational(2));

    // 2x^2 + 3x - 6: irrational roots (-3 +- sqrt(57))/4
    UPoly q;
    q.c = {Rational(-6), Rational(3), Rational(2)};
    auto qroots = isolate_roots(q);
    REQUIRE(qroots.size() == 2);
    long double r0 = (-3.0L - sqrtl(57.0L)) / 4, r1 = (-3.0L + sqrtl(57.0L)) / 4;
    for (int i = 0; i < 30; ++i) refine_root(qroots[0]), refine_root(qroots[1]);
    CHECK((long double)lyapsyn::rat_to_ld(qroots[0].lo) <= r0);
    CHECK((long double)lyapsyn::rat_to_ld(qroots[0].hi) >= r0);
    CHECK((long double)lyapsyn::rat_to_ld(qroots[1].lo) <= r1);
    CHECK((long double)lyapsyn::rat_to_ld(qroots[1].hi) >= r1);
}

TEST_CASE("isolation agrees with float roots on random cubics") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        UPoly p;
        for (int i = 0; i < 4; ++i) p.c.push_back(Rational((long)(rng() % 21) - 10));
        p.normalize();
        if (p.degree() < 1) continue;
        auto roots = isolate_roots(p);
        // count real roots by dense sampling of sign changes of the square-free part
        UPoly sf = square_free(p);
        int changes = 0;
        long double prev = 0;
        bool first = true;
        for (long double t = -50; t <= 50; t += 0.01L) {
            long double v = 0;
            for (int i = sf.degree(); i >= 0; --i) v = v * t + lyapsyn::rat_to_ld(sf.c[i]);
            if (!first && prev * v < 0) ++changes;
            if (v != 0) {
                prev = v;
                first = false;
            }
        }
        CHECK((int)roots.size() >= changes);
    }
}

TEST_CASE("sign at algebraic root") {
    SymTab syms;
    VarId x = syms.intern("x");
    // root: sqrt(2) in x^2 - 2; evaluate x - 1 (positive), x - 2 (negative), x^2 - 2 (zero)
    UPoly p;
    p.c = {Rational(-2), Rational(0), Rational(1)};
    auto roots = isolate_roots(p);
    REQUIRE(roots.size() == 2);
    Root pos = roots[1];
    UPoly lin1;
    lin1.c = {Rational(-1), Rational(1)};
    UPoly lin2;
    lin2.c = {Rational(-2), Rational(1)};
    CHECK(sign_at_root(lin1, pos) == 1);
    CHECK(sign_at_root(lin2, pos) == -1);
    CHECK(sign_at_root(p, pos) == 0);
}

TEST_CASE("univariate conjunctions: decisions and the boundary-first model policy") {
    auto atom = [](std::vector<Rational> coefs, Rel rel) {
        UPoly p;
        p.c = std::move(coefs);
        p.normalize();
        return UniAtom{p, rel};
    };
    // x in [-1, 1]: boundary preference picks +1
    auto r = solve_univariate({atom({Rational(-1), Rational(0), Rational(1)}, Rel::LE)});
    REQUIRE(r.kind == UniResult::SatModel);
    CHECK(r.model == Rational(1));
    // x in (-inf, 0]: picks the closed endpoint 0
    r = solve_univariate({atom({Rational(0), Rational(1)}, Rel::LE)});
    REQUIRE(r.kind == UniResult::SatModel);
    CHECK(r.model == Rational(0));
    // 0 < x < 1/2: interior simplest 1/3
    r = solve_univariate({atom({Rational(0), Rational(1)}, Rel::GT),
                          atom({Rational(-1, 2), Rational(1)}, Rel::LT)});
    REQUIRE(r.kind == UniResult::SatModel);
    CHECK(r.model == Rational(1, 3));
    // x^2 <= 0 && x > 0: unsat
    r = solve_univariate({atom({Rational(0), Rational(0), Rational(1)}, Rel::LE),
                          atom({Rational(0), Rational(1)}, Rel::GT)});
    CHECK(r.kind == UniResult::Unsat);
    // x^2 = 2: satisfiable but only at irrational points
    r = solve_univariate({atom({Rational(-2), Rational(0), Rational(1)}, Rel::EQ)});
    CHECK(r.kind == UniResult::SatNoRational);
    // x^2 = 2 plus x < 0 still satisfiable algebraically
    r = solve_univariate({atom({Rational(-2), Rational(0), Rational(1)}, Rel::EQ),
                          atom({Rational(0), Rational(1)}, Rel::LT)});
    CHECK(r.kind == UniResult::SatNoRational);
    // x^2 = 4: rational roots, greatest first
    r = solve_univariate({atom({Rational(-4), Rational(0), Rational(1)}, Rel::EQ)});
    REQUIRE(r.kind == UniResult::SatModel);
    CHECK(r.model == Rational(2));
    // strict window above an irrational root: (sqrt(57)-3)/4 < x < 2 -> 3/2
    r = solve_univariate({atom({Rational(-6), Rational(3), Rational(2)}, Rel::GT),
                          atom({Rational(0), Rational(1)}, Rel::GT),
                          atom({Rational(-2), Rational(1)}, Rel::LT)});
    REQUIRE(r.kind == UniResult::SatModel);
    CHECK(r.model == Rational(3, 2));
}

TEST_CASE("decide_conj handles the paper's warm-up system") {
    // x1^2 + x2^2 <= 1 && x1 + x2 = 1 : sat; with x1 + x2 = 2 : unsat
    SymTab syms;
    VarId x1 = syms.intern("x1"), x2 = syms.intern("x2");
    MPoly circle = MPoly::var(x1) * MPoly::var(x1) + MPoly::var(x2) * MPoly::var(x2) -
                   MPoly::constant(Rational(1));
    MPoly line = MPoly::var(x1) + MPoly::var(x2) - MPoly::constant(Rational(1));
    auto res = decide_conj({PAtom{circle, Rel::LE}, PAtom{line, Rel::EQ}});
    REQUIRE(res.kind == DecideOutcome::Sat);
    Rational a = res.model.at(x1), b = res.model.at(x2);
    CHECK(a + b == Rational(1));
    CHECK(a * a + b * b <= Rational(1));
    MPoly line2 = MPoly::var(x1) + MPoly::var(x2) - MPoly::constant(Rational(2));
    auto res2 = decide_conj({PAtom{circle, Rel::LE}, PAtom{line2, Rel::EQ}});
    CHECK(res2.kind == DecideOutcome::Unsat);
}

TEST_CASE("full scripts through the session") {
    std::string verdict = first_line(run_script(
        "(set-logic QF_NRA)\n(declare-const x1 Real)\n(declare-const x2 Real)\n"
        "(assert (<= (+ (* x1 x1) (* x2 x2) (- 1)) 0))\n(assert (= (+ x1 x2 (- 1)) 0))\n"
        "(check-sat)\n(get-model)\n"));
    CHECK(verdict == "sat");
    CHECK(first_line(run_script("(declare-const x Real)\n(assert (> (* x x) 0))\n(assert (= x 0))\n"
                                "(check-sat)\n")) == "unsat");
    CHECK(first_line(run_script("(declare-const x Real)\n(assert (or (< x (- 1)) (> x 1)))\n"
                                "(assert (< (* x x) 4))\n(check-sat)\n")) == "sat");
}

TEST_CASE("session model text binds every declared constant") {
    std::string out = run_script(
        "(declare-const a Real)\n(declare-const b Real)\n(assert (> a 0))\n(check-sat)\n(get-model)\n");
    CHECK(out.find("define-fun a () Real") != std::string::npos);
    CHECK(out.find("define-fun b () Real") != std::string::npos);
}

TEST_CASE("linear model policy: bound snapping with delta resolution") {
    // {p1 > 0, p2 > 0} -> (1, 1)
    std::string out = run_script(
        "(declare-const p1 Real)\n(declare-const p2 Real)\n(assert (> p1 0))\n(assert (> p2 0))\n"
        "(check-sat)\n(get-model)\n");
    CHECK(out.find("define-fun p1 () Real 1)") != std::string::npos);
    CHECK(out.find("define-fun p2 () Real 1)") != std::string::npos);
    // {p1 + p2 > 0, p1 - 2 p2 <= 0} -> on the boundary p1 = 2 p2
    std::string out2 = run_script(
        "(declare-const p1 Real)\n(declare-const p2 Real)\n"
        "(assert (> (+ p1 p2) 0))\n(assert (<= (- p1 (* 2 p2)) 0))\n(check-sat)\n(get-model)\n");
    CHECK(out2.find("(/ 2 3)") != std::string::npos);
    CHECK(out2.find("(/ 1 3)") != std::string::npos);
    // infeasible strict chain
    CHECK(first_line(run_script("(declare-const p Real)\n(assert (> p 0))\n(assert (< p 0))\n"
                                "(check-sat)\n")) == "unsat");
    // mixed: p >= 0 and p <= 0 pins p = 0
    std::string out3 = run_script(
        "(declare-const p Real)\n(declare-const q Real)\n(assert (>= p 0))\n(assert (<= p 0))\n"
        "(assert (> (+ p q) 2))\n(check-sat)\n(get-model)\n");
    CHECK(first_line(out3) == "sat");
    CHECK(out3.find("define-fun p () Real 0)") != std::string::npos);
}

TEST_CASE("ite terms (absolute values) are hoisted") {
    std::string script =
        "(declare-const x Real)\n"
        "(assert (<= (ite (>= x 0) x (- x)) 2))\n"
        "(assert (< x 0))\n(check-sat)\n(get-model)\n";
    std::string out = run_script(script);
    CHECK(first_line(out) == "sat");
    CHECK(out.find("(- ") != std::string::npos);  // model is negative
}

TEST_CASE("fuzz: decisions agree with dense grid sampling") {
    std::mt19937_64 rng(31415);
    SymTab syms;
    VarId x = syms.intern("x"), y = syms.intern("y");
    auto rand_poly = [&](int maxdeg) {
        MPoly p;
        for (int xd = 0; xd <= maxdeg; ++xd)
            for (int yd = 0; xd + yd <= maxdeg; ++yd) {
                long c = (long)(rng() % 9) - 4;
                if (c == 0) continue;
                p = p + (MPoly::var(x).pow(xd) * MPoly::var(y).pow(yd)).scaled(Rational(c));
            }
        return p;
    };
    int sat_checked = 0, unsat_checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Conj conj;
        int n = 1 + (int)(rng() % 3);
        for (int i = 0; i < n; ++i) {
            Rel rel = std::vector<Rel>{Rel::LT, Rel::LE, Rel::GT, Rel::GE}[rng() % 4];
            conj.push_back({rand_poly(2), rel});
        }
        // box to keep the grid finite
        conj.push_back({MPoly::var(x) * MPoly::var(x) - MPoly::constant(Rational(9)), Rel::LE});
        conj.push_back({MPoly::var(y) * MPoly::var(y) - MPoly::constant(Rational(9)), Rel::LE});
        DecideOutcome res = decide_conj(conj);
        // grid check
        bool grid_sat = false;
        for (int xi = -30; xi <= 30 && !grid_sat; ++xi)
            for (int yi = -30; yi <= 30 && !grid_sat; ++yi) {
                std::map<VarId, Rational> pt{{x, Rational(xi, 10)}, {y, Rational(yi, 10)}};
                bool ok = true;
                for (const auto& a : conj) {
                    Rational v = a.p.eval(pt);
                    if (!rel_holds(a.rel, v > 0 ? 1 : (v < 0 ? -1 : 0))) ok = false;
                }
                grid_sat = ok;
            }
        if (res.kind == DecideOutcome::Unsat) {
            CHECK_FALSE(grid_sat);
            ++unsat_checked;
        } else if (res.kind == DecideOutcome::Sat) {
            for (const auto& a : conj) {
                std::map<VarId, Rational> pt = res.model;
                if (!pt.count(x)) pt[x] = Rational(0);
                if (!pt.count(y)) pt[y] = Rational(0);
                Rational v = a.p.eval(pt);
                CHECK(rel_holds(a.rel, v > 0 ? 1 : (v < 0 ? -1 : 0)));
            }
            ++sat_checked;
        }
    }
    CHECK(sat_checked > 15);
    CHECK(unsat_checked >= 3);
}
