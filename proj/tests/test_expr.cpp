#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/expr.hpp"

#include <cmath>
#include <random>

using namespace lyapsyn;

namespace {

// Independent oracle: a straight recursive-descent interpreter over the same
// grammar, evaluating on the fly without any normalization. Used to check
// that parsing + canonicalization preserve values.
struct OracleEval {
    const std::string& s;
    size_t i = 0;
    const Point& pt;

    void ws() {
        while (i < s.size() && isspace((unsigned char)s[i])) ++i;
    }
    bool eat(char c) {
        ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    Rational expr() {
        Rational acc = term();
        while (true) {
            ws();
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }
    Rational term() {
        Rational acc = factor();
        while (eat('*')) acc *= factor();
        return acc;
    }
    Rational factor() {
        Rational base = atom();
        ws();
        if (eat('^')) {
            std::string digits;
            ws();
            while (i < s.size() && isdigit((unsigned char)s[i])) digits.push_back(s[i++]);
            return rat_pow(base, std::stoul(digits));
        }
        return base;
    }
    Rational atom() {
        ws();
        if (eat('-')) return -atom();
        if (eat('(')) {
            Rational r = expr();
            eat(')');
            return r;
        }
        if (eat('|')) {
            Rational r = expr();
            eat('|');
            return rat_abs(r);
        }
        if (isdigit((unsigned char)s[i])) {
            std::string num;
            while (i < s.size() && isdigit((unsigned char)s[i])) num.push_back(s[i++]);
            ws();
            if (i < s.size() && s[i] == '/') {
                ++i;
                ws();
                std::string den;
                while (i < s.size() && isdigit((unsigned char)s[i])) den.push_back(s[i++]);
                return Rational(BigInt(num), BigInt(den));
            }
            return Rational(BigInt(num));
        }
        std::string name;
        while (i < s.size() && (isalnum((unsigned char)s[i]) || s[i] == '_')) name.push_back(s[i++]);
        if (name == "abs") {
            eat('(');
            Rational r = expr();
            eat(')');
            return rat_abs(r);
        }
        return pt.at(name);
    }
};

Rational oracle_eval(const std::string& text, const Point& pt) {
    OracleEval ev{text, 0, pt};
    return ev.expr();
}

// Random polynomial-ish expression source text (no transcendentals).
std::string random_poly_text(std::mt19937_64& rng, const std::vector<std::string>& vars, bool with_abs) {
    std::uniform_int_distribution<int> terms(1, 5), deg(0, 3), coef(-6, 6), pick(0, (int)vars.size() - 1);
    std::string out;
    int n = terms(rng);
    for (int t = 0; t < n; ++t) {
        int c = coef(rng);
        std::string term = std::to_string(std::abs(c));
        if (rng() % 3 == 0) term += "/" + std::to_string(1 + (int)(rng() % 7));
        for (size_t k = 0; k < vars.size(); ++k) {
            int d = deg(rng);
            if (d == 0) continue;
            std::string v = vars[pick(rng)];
            if (with_abs && rng() % 5 == 0)
                term += "*abs(" + v + ")";
            else
                term += "*" + v + (d > 1 ? "^" + std::to_string(d) : "");
        }
        if (t == 0)
            out += (c < 0 ? "-" : "") + term;
        else
            out += (c < 0 ? " - " : " + ") + term;
    }
    return out;
}

Point random_point(std::mt19937_64& rng, const std::vector<std::string>& vars) {
    Point pt;
    for (const auto& v : vars) pt[v] = Rational((long)(rng() % 33) - 16, (long)(rng() % 7) + 1);
    return pt;
}

}  // namespace

TEST_CASE("parsing matches the grammar examples") {
    Expr e = Expr::parse("p1*x1^2 + p2*x2^2", {"p1", "p2"});
    CHECK(e.str() == "p1*x1^2 + p2*x2^2");
    Expr f = Expr::parse("x^2 - exp(x) + 1");
    CHECK(f.str() == "x^2 - exp(x) + 1");
    CHECK_FALSE(f.is_polynomial());
    CHECK(f.contains_transcendental());
    CHECK_THROWS_AS(Expr::parse("x1^(-1)"), ParseError);
    CHECK_THROWS_AS(Expr::parse("foo(x)"), ParseError);
    CHECK_THROWS_AS(Expr::parse("x +"), ParseError);
    CHECK_THROWS_AS(Expr::parse("x1^2.5"), ParseError);
    CHECK(Expr::parse("|x1|").str() == "abs(x1)");
    CHECK(Expr::parse("|x1 - x2|").str() == Expr::parse("abs(x1 - x2)").str());
}

TEST_CASE("parse error positions") {
    try {
        Expr::parse("x1 + \n  3/");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("round trip: print then parse is identity on canonical text") {
    std::mt19937_64 rng(2024);
    std::vector<std::string> vars{"x1", "x2", "y"};
    for (int i = 0; i < 300; ++i) {
        std::string text = random_poly_text(rng, vars, true);
        Expr e = Expr::parse(text);
        Expr back = Expr::parse(e.str());
        CHECK(back == e);
        CHECK(back.str() == e.str());
    }
}

TEST_CASE("simplification preserves exact values against the oracle") {
    std::mt19937_64 rng(99);
    std::vector<std::string> vars{"x1", "x2", "y"};
    for (int i = 0; i < 100; ++i) {
        std::string text = random_poly_text(rng, vars, true);
        Expr e = Expr::parse(text);
        for (int k = 0; k < 100; ++k) {
            Point pt = random_point(rng, vars);
            CHECK(e.eval_rational(pt) == oracle_eval(text, pt));
        }
    }
}

TEST_CASE("differentiate: power rule examples") {
    Expr v = Expr::parse("p1*x1^2 + p2*x2^2", {"p1", "p2"});
    CHECK(v.differentiate("x1").str() == "2*p1*x1");
    CHECK(Expr::parse("5/3").differentiate("x").is_zero());
    CHECK(Expr::parse("p*x^2", {"p"}).differentiate("x").str() == "2*p*x");
    CHECK_THROWS_AS(Expr::parse("exp(x)").differentiate("x"), ExprError);
    CHECK_THROWS_AS(Expr::parse("abs(x)").differentiate("x"), ExprError);
}

TEST_CASE("differentiate against central differences") {
    std::mt19937_64 rng(5150);
    std::vector<std::string> vars{"x1", "x2"};
    const long double h = 1e-4L;
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        std::string text = random_poly_text(rng, vars, false);
        Expr e = Expr::parse(text);
        const std::string& v = vars[rng() % vars.size()];
        Expr de = e.differentiate(v);
        FloatPoint pt;
        for (const auto& name : vars) pt[name] = ((long double)(rng() % 2001) - 1000) / 1000.0L;
        FloatPoint hi = pt, lo = pt;
        hi[v] += h;
        lo[v] -= h;
        long double numeric = (e.eval_float(hi) - e.eval_float(lo)) / (2 * h);
        long double symbolic = de.eval_float(pt);
        CHECK(fabsl(numeric - symbolic) <= 1e-6L * (1 + fabsl(symbolic)));
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("lie derivative matches the worked systems") {
    Expr v = Expr::parse("p1*x1^2 + p2*x2^2", {"p1", "p2"});
    Expr f1 = Expr::parse("x2"), f2 = Expr::parse("-x1 - x2");
    Expr vdot = lie_derivative(v, {"x1", "x2"}, {f1, f2});
    Expr expected = Expr::parse("2*p1*x1*x2 + 2*p2*x2*(-x1 - x2)", {"p1", "p2"});
    CHECK(vdot == expected);

    CHECK(lie_derivative(Expr::parse("p*x^2", {"p"}), {"x"}, {Expr::parse("-x")}).str() == "-2*p*x^2");

    Expr vc = lie_derivative(v, {"x1", "x2"},
                             {Expr::parse("-x1^3 + x2"), Expr::parse("-sin(x1) - x2")});
    Expr vc_expected =
        Expr::parse("2*p1*x1*(-x1^3 + x2) + 2*p2*x2*(-sin(x1) - x2)", {"p1", "p2"});
    CHECK(vc == vc_expected);

    CHECK_THROWS_AS(lie_derivative(v, {"x1", "x2"}, {f1}), ExprError);
}

TEST_CASE("substitution examples") {
    CHECK(Expr::parse("x1 + x2")
              .substitute({{"x1", Expr::constant(0)}, {"x2", Expr::constant(0)}})
              .is_zero());
    Expr inst = Expr::parse("p*x^2", {"p"}).substitute({{"p", Expr::constant(Rational(1, 4))}});
    CHECK(inst.str() == "1/4*x^2");
    Expr composed = Expr::parse("|x1|").substitute(
        {{"x1", Expr::parse("1/2*x1 - 1/4*arctan(x2)")}});
    CHECK(composed.str() == "abs(1/2*x1 - 1/4*arctan(x2))");
    // simultaneous, not sequential
    Expr swap = Expr::parse("x1 - x2").substitute({{"x1", Expr::var("x2")}, {"x2", Expr::var("x1")}});
    CHECK(swap.str() == "-x1 + x2");
}

TEST_CASE("substitution and evaluation commute") {
    std::mt19937_64 rng(31337);
    std::vector<std::string> vars{"x1", "x2"};
    for (int i = 0; i < 100; ++i) {
        Expr e = Expr::parse(random_poly_text(rng, vars, true));
        Expr repl = Expr::parse(random_poly_text(rng, {"y"}, false));
        Point pt = random_point(rng, {"x2", "y"});
        Point inner{{"y", pt.at("y")}};
        Point direct = pt;
        direct["x1"] = repl.eval_rational(inner);
        CHECK(e.substitute({{"x1", repl}}).eval_rational(pt) == e.eval_rational(direct));
    }
}

TEST_CASE("exact evaluation examples") {
    Expr e = Expr::parse("1/2*x1^2 + 1/2*x2^2");
    CHECK(e.eval_rational({{"x1", Rational(1)}, {"x2", Rational(1)}}) == Rational(1));
    Expr vdot = Expr::parse("2*p1*x1*x2 + 2*p2*x2*(-x1 - x2)", {"p1", "p2"});
    Point pt{{"p1", Rational(1, 4)}, {"p2", Rational(1, 4)}, {"x1", Rational(1)}, {"x2", Rational(-1)}};
    CHECK(vdot.eval_rational(pt) == Rational(-1, 2));
    CHECK(Expr::parse("|0 - 3/2|").eval_rational({}) == Rational(3, 2));
    CHECK_THROWS_AS(Expr::parse("exp(x)").eval_rational({{"x", Rational(0)}}), ExprError);
    CHECK_THROWS_AS(Expr::parse("x + y").eval_rational({{"x", Rational(1)}}), ExprError);
}

TEST_CASE("float evaluation uses true transcendentals") {
    CHECK(Expr::parse("exp(x)").eval_float({{"x", 0.0L}}) == doctest::Approx(1.0));
    CHECK(Expr::parse("sin(x)").eval_float({{"x", 1.57079632679489662L}}) == doctest::Approx(1.0));
    long double v = Expr::parse("x^2 - exp(x) + 1").eval_float({{"x", 1.0L}});
    CHECK((double)v == doctest::Approx(2.0 - std::exp(1.0)).epsilon(1e-12));
    CHECK(Expr::parse("arctan(x)").eval_float({{"x", 1.0L}}) == doctest::Approx(0.78539816339744831));
}

TEST_CASE("abs powers normalize to even polynomial parts") {
    CHECK(Expr::parse("abs(x)^13").str() == "x^12*abs(x)");
    CHECK(Expr::parse("abs(x)^4").str() == "x^4");
    CHECK(Expr::parse("abs(x)*abs(x)").str() == "x^2");
    CHECK(Expr::parse("abs(-x)").str() == "abs(x)");
    CHECK(Expr::parse("abs(x^2)").str() == "x^2");
    CHECK(Expr::parse("abs(abs(x))").str() == "abs(x)");
}
