#ifndef LYAPSYN_PROBLEM_HPP
#define LYAPSYN_PROBLEM_HPP

#include "approx.hpp"
#include "box.hpp"
#include "expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lyapsyn {

struct ProblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TimeKind { Continuous, Discrete };

enum class CmpOp { LT, LE, GT, GE };
const char* cmp_text(CmpOp op);

// Polynomial inequality atom "lhs op 0".
struct GuardAtom {
    Expr lhs;
    CmpOp op;
};

struct Region {
    int index = 0;
    std::vector<GuardAtom> guard;  // empty = always active
    std::vector<Expr> dynamics;    // one per state variable
};

struct SystemDef {
    TimeKind time = TimeKind::Continuous;
    std::vector<std::string> state;
    std::vector<Region> regions;
    Box domain;
};

// Candidate V(x; p) = sum_i p_i * phi_i(x), linear in the parameters.
struct TemplateDef {
    std::vector<std::string> params;
    std::vector<Expr> basis;
    Expr v_of_params() const;  // symbolic V with Param symbols
    Expr instantiate(const std::vector<Rational>& values) const;
};

struct CegisConfig {
    int max_iter = 100;
    int window = 0;  // 0 = keep all counterexamples
    std::optional<std::vector<Rational>> initial_params;
    unsigned long long seed = 0;
    std::string solver_cmd;  // empty = resolve automatically
    long timeout_ms = 10000;
};

struct ProblemFile {
    std::string name;
    SystemDef sys;
    TemplateDef tmpl;
    std::map<FuncKind, int> approx_orders;
    ApproxFlags approx_flags;
    CegisConfig cegis;
};

ProblemFile load_problem(const std::string& path);
ProblemFile load_problem_json(const std::string& json_text, const std::string& name = "problem");
std::string dump_problem(const ProblemFile& p);

// The predicate "x is not the origin": disjunction of x_i != 0.
struct OriginExclusion {
    std::vector<std::string> vars;
};
OriginExclusion origin_exclusion(const std::vector<std::string>& vars);

// Parses "p1=1/2,p2=1/4" against the template's parameter list.
std::vector<Rational> parse_candidate(const TemplateDef& tmpl, const std::string& text);

}  // namespace lyapsyn

#endif
