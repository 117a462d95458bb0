#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/smt.hpp"
#include "helpers.hpp"

using namespace lyapsyn;

namespace {

SmtScript tiny_script() {
    // x^2 - 1 <= 0  and  x - 1/2 = 0
    std::vector<SmtFormula> asserts;
    asserts.push_back(SmtFormula::make_atom(Expr::parse("x^2 - 1"), SmtCmp::LE));
    asserts.push_back(SmtFormula::make_atom(Expr::parse("x - 1/2"), SmtCmp::EQ));
    return emit(asserts, {"x"});
}

}  // namespace

TEST_CASE("emission is deterministic and canonical") {
    std::string a = tiny_script().text();
    std::string b = tiny_script().text();
    CHECK(a == b);
    CHECK(a ==
          "(set-logic QF_NRA)\n"
          "(declare-const x Real)\n"
          "(assert (<= (+ (* x x) (- 1)) 0))\n"
          "(assert (= (+ x (- (/ 1 2))) 0))\n"
          "(check-sat)\n(get-model)\n");
}

TEST_CASE("declarations are sorted and deduplicated") {
    SmtScript s = emit({}, {"x2", "x1", "eps0", "x1"});
    CHECK(s.text().find("(declare-const eps0 Real)\n(declare-const x1 Real)\n(declare-const x2 Real)") !=
          std::string::npos);
}

TEST_CASE("abs renders as ite, transcendentals are rejected") {
    std::vector<SmtFormula> asserts;
    asserts.push_back(SmtFormula::make_atom(Expr::parse("abs(x) - 1"), SmtCmp::LE));
    std::string text = emit(asserts, {"x"}).text();
    CHECK(text.find("(ite (>= x 0) x (- x))") != std::string::npos);
    std::vector<SmtFormula> bad;
    bad.push_back(SmtFormula::make_atom(Expr::parse("exp(x)"), SmtCmp::LE));
    CHECK_THROWS_AS(emit(bad, {"x"}).text(), SmtError);
}

TEST_CASE("disjunctions render as or") {
    std::vector<SmtFormula> asserts;
    asserts.push_back(SmtFormula::make_or({SmtFormula::make_atom(Expr::parse("v"), SmtCmp::LE),
                                           SmtFormula::make_atom(Expr::parse("d"), SmtCmp::GT)}));
    std::string text = emit(asserts, {"v", "d"}).text();
    CHECK(text.find("(assert (or (<= v 0) (> d 0)))") != std::string::npos);
}

TEST_CASE("model literal grammar") {
    // exercised through the public parser by faking solver output? keep to the
    // documented literal forms via a real solver run below; here: negatives.
    std::vector<SmtFormula> asserts;
    asserts.push_back(SmtFormula::make_atom(Expr::parse("x + 3/2"), SmtCmp::EQ));
    SmtScript s = emit(asserts, {"x"});
    SolverResult r = run_solver(s.text(), nrasolve_cmd(), 10000);
    REQUIRE(r.verdict == SolverResult::Sat);
    CHECK(r.model.at("x") == Rational(-3, 2));
}

TEST_CASE("solver round trip on the warm-up system") {
    std::vector<SmtFormula> asserts;
    asserts.push_back(SmtFormula::make_atom(Expr::parse("x1^2 + x2^2 - 1"), SmtCmp::LE));
    asserts.push_back(SmtFormula::make_atom(Expr::parse("x1 + x2 - 1"), SmtCmp::EQ));
    SmtScript s = emit(asserts, {"x1", "x2"});
    SolverResult r = run_solver(s.text(), nrasolve_cmd(), 10000);
    REQUIRE(r.verdict == SolverResult::Sat);
    // model faithfulness: every assertion holds exactly
    for (const auto& a : s.asserts) CHECK(formula_holds(a, r.model));

    std::vector<SmtFormula> asserts2;
    asserts2.push_back(SmtFormula::make_atom(Expr::parse("x1^2 + x2^2 - 1"), SmtCmp::LE));
    asserts2.push_back(SmtFormula::make_atom(Expr::parse("x1 + x2 - 2"), SmtCmp::EQ));
    SolverResult r2 = run_solver(emit(asserts2, {"x1", "x2"}).text(), nrasolve_cmd(), 10000);
    CHECK(r2.verdict == SolverResult::Unsat);
}

TEST_CASE("missing solver binary is a distinct error") {
    CHECK_THROWS_AS(run_solver("(check-sat)\n", "/nonexistent/solver-binary", 2000), SmtError);
}

TEST_CASE("timeouts surface as unknown") {
    SolverResult r = run_solver("(check-sat)\n", "sleep 30", 200);
    CHECK(r.verdict == SolverResult::Unknown);
    CHECK(r.reason == "timeout");
}

TEST_CASE("solver command resolution") {
    CHECK(resolve_solver_cmd("my-solver --flag") == "my-solver --flag");
    // with the env var set, it wins over auto-detection
    setenv("LYAPSYN_SOLVER", "env-solver -in", 1);
    CHECK(resolve_solver_cmd("") == "env-solver -in");
    unsetenv("LYAPSYN_SOLVER");
}
