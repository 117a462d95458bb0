#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/approx.hpp"

#include <cmath>
#include <random>

using namespace lyapsyn;

namespace {

Box box1(const char* var, const char* lo, const char* hi, bool strict = true) {
    Box b;
    b.intervals[var] = Interval{Bound{rat_parse(lo), strict}, Bound{rat_parse(hi), strict}};
    return b;
}

long double true_fn(FuncKind k, long double x) {
    switch (k) {
        case FuncKind::Exp: return expl(x);
        case FuncKind::Sin: return sinl(x);
        case FuncKind::Arctan: return atanl(x);
        default: return 0;
    }
}

// Sampled remainder soundness over [-r, r].
void check_remainder(FuncKind kind, int order, long double r, int samples, const ApproxFlags& flags = {}) {
    ApproxScheme s = builtin_scheme(kind, order, flags);
    Expr x = Expr::var("x");
    Expr ser = s.series(x);
    Expr bnd = s.bound(x);
    std::mt19937_64 rng(1234 + order);
    for (int i = 0; i <= samples; ++i) {
        long double t;
        if (i <= 2) {
            t = (i == 0 ? -r : (i == 1 ? r : 0));
        } else {
            t = ((long double)(rng() % 2000001) / 1000000.0L - 1.0L) * r;
        }
        FloatPoint pt{{"x", t}};
        long double err = fabsl(true_fn(kind, t) - ser.eval_float(pt));
        long double allowed = bnd.eval_float(pt) + 1e-12L;
        REQUIRE_MESSAGE(err <= allowed, "kind=", (int)kind, " N=", order, " x=", (double)t);
    }
}

}  // namespace

TEST_CASE("exp scheme matches the printed series and bound") {
    ApproxScheme s = builtin_scheme(FuncKind::Exp, 3);
    Expr x = Expr::var("x");
    CHECK(s.series(x) == Expr::parse("1 + x + 1/2*x^2 + 1/6*x^3"));
    CHECK(s.bound(x) == Expr::parse("1/12*x^4"));  // 2|x|^4/4!
    CHECK(*s.validity_radius() == Rational(5, 2));
    CHECK(ApproxScheme::minimal_order(FuncKind::Exp, Rational(2)) == 2);
    CHECK(ApproxScheme::minimal_order(FuncKind::Exp, Rational(5, 2)) == 3);
    CHECK(ApproxScheme::minimal_order(FuncKind::Exp, Rational(1)) == 0);
    ApproxScheme s2 = builtin_scheme(FuncKind::Exp, 2);
    CHECK(s2.bound(x) == Expr::parse("1/3*x^2*abs(x)"));  // 2|x|^3/3!
    CHECK(*s2.validity_radius() == Rational(2));
}

TEST_CASE("sin scheme matches the printed series and bound") {
    ApproxScheme s = builtin_scheme(FuncKind::Sin, 3);
    Expr x = Expr::var("x");
    CHECK(s.series(x) == Expr::parse("x - 1/6*x^3 + 1/120*x^5 - 1/5040*x^7"));
    CHECK(s.bound(x) == Expr::parse("1/24*x^4"));  // |x|^4/4!
    CHECK_FALSE(s.validity_radius().has_value());
    ApproxFlags tight;
    tight.tight_sin_bound = true;
    ApproxScheme st = builtin_scheme(FuncKind::Sin, 3, tight);
    CHECK(st.bound(x) == Expr::parse("1/40320*x^8"));  // |x|^(2N+2)/(2N+2)!
}

TEST_CASE("arctan scheme: sound bound by default, paper bound behind a flag") {
    Expr x = Expr::var("x");
    ApproxScheme s = builtin_scheme(FuncKind::Arctan, 5);
    CHECK(s.series(x) ==
          Expr::parse("x - 1/3*x^3 + 1/5*x^5 - 1/7*x^7 + 1/9*x^9 - 1/11*x^11"));
    CHECK(s.bound(x) == Expr::parse("1/13*x^12*abs(x)"));  // |x|^13/13
    CHECK(*s.validity_radius() == Rational(1));
    ApproxFlags paper;
    paper.paper_arctan_bound = true;
    CHECK(builtin_scheme(FuncKind::Arctan, 5, paper).bound(x) == Expr::parse("1/26*x^12*abs(x)"));
}

TEST_CASE("bounds are even in x") {
    std::mt19937_64 rng(9);
    for (auto [kind, order] : std::vector<std::pair<FuncKind, int>>{
             {FuncKind::Exp, 2}, {FuncKind::Exp, 3}, {FuncKind::Sin, 1}, {FuncKind::Arctan, 5}}) {
        Expr b = builtin_scheme(kind, order).bound(Expr::var("x"));
        for (int i = 0; i < 50; ++i) {
            Rational t((long)(rng() % 65) - 32, 16);
            CHECK(b.eval_rational({{"x", t}}) == b.eval_rational({{"x", Rational(-t)}}));
        }
    }
}

TEST_CASE("remainder soundness by sampling") {
    check_remainder(FuncKind::Exp, 2, 2.0L, 2000);
    check_remainder(FuncKind::Exp, 3, 2.5L, 2000);
    check_remainder(FuncKind::Exp, 5, 3.5L, 2000);
    check_remainder(FuncKind::Sin, 1, 3.0L, 2000);
    check_remainder(FuncKind::Sin, 3, 3.0L, 2000);
    ApproxFlags tight;
    tight.tight_sin_bound = true;
    check_remainder(FuncKind::Sin, 3, 6.0L, 2000, tight);
    check_remainder(FuncKind::Arctan, 3, 1.0L, 2000);
    check_remainder(FuncKind::Arctan, 5, 1.0L, 2000);
}

TEST_CASE("the paper's arctan bound is refuted by sampling (why it is not the default)") {
    ApproxFlags paper;
    paper.paper_arctan_bound = true;
    ApproxScheme s = builtin_scheme(FuncKind::Arctan, 5, paper);
    Expr x = Expr::var("x");
    long double err = fabsl(atanl(1.0L) - s.series(x).eval_float({{"x", 1.0L}}));
    long double bound = s.bound(x).eval_float({{"x", 1.0L}});
    CHECK(err > bound + 1e-12L);
}

TEST_CASE("relax rewrites exp with a shared eps variable") {
    // 2*p*x*(x^2 + 1 - exp(x)) at N=2 over (-2, 2)
    Expr e = Expr::parse("2*p*x*(x^2 + 1 - exp(x))", {"p"});
    Relaxation r = relax(e, {{FuncKind::Exp, 2}}, box1("x", "-2", "2"));
    REQUIRE(r.eps_bounds.size() == 1);
    CHECK(r.eps_bounds[0].eps_id == 0);
    CHECK(r.eps_bounds[0].bound == Expr::parse("1/3*x^2*abs(x)"));
    Expr expected = Expr::parse("2*p*x*(x^2 + 1 - (1 + x + 1/2*x^2) - eps0)", {"p"});
    CHECK(r.rewritten == expected);
    CHECK_FALSE(r.rewritten.contains_transcendental());
    CHECK(r.table.at(0).kind == FuncKind::Exp);
    CHECK(r.table.at(0).order == 2);
}

TEST_CASE("identical occurrences share one eps") {
    Expr e = Expr::parse("exp(x) + exp(x)*y");
    Relaxation r = relax(e, {{FuncKind::Exp, 2}}, box1("x", "-1", "1"));
    CHECK(r.eps_bounds.size() == 1);
}

TEST_CASE("validity violations are reported with the minimal admissible order") {
    Expr e = Expr::parse("exp(x)");
    try {
        relax(e, {{FuncKind::Exp, 1}}, box1("x", "-2", "2"));
        FAIL("expected ApproxError");
    } catch (const ApproxError& err) {
        std::string msg = err.what();
        CHECK(msg.find("3/2") != std::string::npos);       // validity radius at N=1
        CHECK(msg.find("N = 2") != std::string::npos);     // minimal admissible order
    }
    // closure of the open interval: sup = 2 admits exactly N = 2
    CHECK_NOTHROW(relax(e, {{FuncKind::Exp, 2}}, box1("x", "-2", "2")));
    CHECK_THROWS_AS(relax(Expr::parse("arctan(y)"), {{FuncKind::Arctan, 5}}, box1("y", "-2", "1")),
                    ApproxError);
}

TEST_CASE("no transcendental nodes: relax is the identity") {
    Expr e = Expr::parse("x1 + x2");
    Relaxation r = relax(e, {}, Box{});
    CHECK(r.rewritten == e);
    CHECK(r.eps_bounds.empty());
}

TEST_CASE("composite and unbounded arguments are rejected") {
    CHECK_THROWS_AS(relax(Expr::parse("exp(x + 1)"), {{FuncKind::Exp, 5}}, box1("x", "-1", "1")),
                    ApproxError);
    CHECK_THROWS_AS(relax(Expr::parse("sin(x)"), {{FuncKind::Sin, 3}}, Box{}), ApproxError);
}

TEST_CASE("relax inside abs nodes (discrete-time composition)") {
    Expr e = Expr::parse("abs(1/2*x1 - 1/4*arctan(x2))");
    Box b;
    b.intervals["x1"] = Interval{Bound{Rational(-1), true}, Bound{Rational(1), true}};
    b.intervals["x2"] = Interval{Bound{Rational(-1), true}, Bound{Rational(1), true}};
    Relaxation r = relax(e, {{FuncKind::Arctan, 5}}, b);
    REQUIRE(r.eps_bounds.size() == 1);
    CHECK(r.eps_bounds[0].bound == Expr::parse("1/13*x2^12*abs(x2)"));
    CHECK_FALSE(r.rewritten.contains_transcendental());
}

TEST_CASE("conservativity: the true transcendental value stays inside the eps box") {
    std::mt19937_64 rng(77);
    Expr e = Expr::parse("x^2 - exp(x) + 1");
    Relaxation r = relax(e, {{FuncKind::Exp, 3}}, box1("x", "-2", "2"));
    REQUIRE(r.eps_bounds.size() == 1);
    ApproxScheme s = builtin_scheme(FuncKind::Exp, 3);
    Expr ser = s.series(Expr::var("x"));
    for (int i = 0; i < 2000; ++i) {
        long double t = ((long double)(rng() % 4000001) / 1000000.0L) - 2.0L;
        FloatPoint pt{{"x", t}};
        long double eps_true = expl(t) - ser.eval_float(pt);
        long double bound = r.eps_bounds[0].bound.eval_float(pt);
        CHECK(fabsl(eps_true) <= bound + 1e-12L);
        // rewriting at the true eps reproduces the true dynamics value
        FloatPoint full = pt;
        full["eps0"] = eps_true;
        CHECK(fabsl(r.rewritten.eval_float(full) - e.eval_float(pt)) <= 1e-10L);
    }
}
