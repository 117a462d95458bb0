#ifndef NRASOLVE_ELIM_HPP
#define NRASOLVE_ELIM_HPP

#include "nrasolve/unipoly.hpp"

#include <map>

namespace nra {

struct DecideOutcome {
    enum Kind { Sat, Unsat, Unknown, SatNoModel } kind = Unknown;
    std::map<VarId, Rational> model;
    std::string reason;
};

// Decides a conjunction of polynomial atoms over the reals and produces a
// rational model when one exists on the satisfying cell that was found.
DecideOutcome decide_conj(const Conj& conj, int depth = 0);

}  // namespace nra

#endif
