#ifndef LYAPSYN_SMT_HPP
#define LYAPSYN_SMT_HPP

#include "expr.hpp"

#include <string>
#include <vector>

namespace lyapsyn {

struct SmtError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SmtCmp { LT, LE, GT, GE, EQ, NE };

struct SmtAtom {
    Expr lhs;  // compared against 0
    SmtCmp op;
};

// Minimal assertion tree: atoms, conjunctions, disjunctions.
struct SmtFormula {
    enum Kind { Atom, And, Or } kind = Atom;
    SmtAtom atom{Expr(), SmtCmp::EQ};
    std::vector<SmtFormula> kids;

    static SmtFormula make_atom(Expr lhs, SmtCmp op);
    static SmtFormula make_and(std::vector<SmtFormula> kids);
    static SmtFormula make_or(std::vector<SmtFormula> kids);
};

// Deterministic SMT-LIB2 script: equal inputs yield byte-identical text.
struct SmtScript {
    std::string logic = "QF_NRA";
    std::vector<std::string> decls;  // sorted real constants
    std::vector<SmtFormula> asserts;
    std::string text() const;
};

SmtScript emit(std::vector<SmtFormula> assertions, std::vector<std::string> decls,
               const std::string& logic = "QF_NRA");

struct SolverResult {
    enum Verdict { Sat, Unsat, Unknown } verdict = Unknown;
    Point model;
    std::string reason;
};

// Runs `cmd` through /bin/sh with the script on stdin; parses the verdict and,
// on sat, the rational model. A timeout yields Unknown("timeout").
SolverResult run_solver(const std::string& script_text, const std::string& cmd, long timeout_ms);

// Resolution order: explicit cmd > LYAPSYN_SOLVER > "z3 -in" if z3 is on PATH
// > bundled nrasolve next to the current executable.
std::string resolve_solver_cmd(const std::string& explicit_cmd);

// Exact rational evaluation of an atom / formula at a model point.
bool atom_holds(const SmtAtom& a, const Point& pt);
bool formula_holds(const SmtFormula& f, const Point& pt);

}  // namespace lyapsyn

#endif
