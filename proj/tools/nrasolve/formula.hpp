#ifndef NRASOLVE_FORMULA_HPP
#define NRASOLVE_FORMULA_HPP

#include "nrasolve/mpoly.hpp"
#include "util/sexpr.hpp"

#include <map>
#include <string>
#include <vector>

namespace nra {

using lyapsyn::SNode;

struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Rel { LT, LE, GT, GE, EQ, NE };
Rel negate_rel(Rel r);
bool rel_holds(Rel r, int sign);
bool rel_strict(Rel r);

// Polynomial atom "p rel 0".
struct PAtom {
    MPoly p;
    Rel rel;
};

struct BForm {
    enum Kind { True, False, Atom, And, Or, Not } kind = True;
    PAtom atom{MPoly(), Rel::EQ};
    std::vector<BForm> kids;

    static BForm make_true() { return BForm{}; }
    static BForm make_false() {
        BForm f;
        f.kind = False;
        return f;
    }
    static BForm make_atom(MPoly p, Rel rel);
    static BForm make_and(std::vector<BForm> kids);
    static BForm make_or(std::vector<BForm> kids);
    static BForm make_not(BForm f);
};

struct SymTab {
    std::vector<std::string> names;
    std::map<std::string, VarId> ids;
    VarId intern(const std::string& name);
    VarId lookup(const std::string& name) const;  // throws on unknown
};

BForm parse_formula(const SNode& n, SymTab& syms);

BForm nnf(const BForm& f, bool negate = false);

using Conj = std::vector<PAtom>;

// Disjunctive normal form of an NNF formula. Earlier conjuncts vary slowest,
// so branch order follows assertion order. NE atoms split into GT then LT.
std::vector<Conj> dnf(const BForm& f, size_t cap);

}  // namespace nra

#endif
