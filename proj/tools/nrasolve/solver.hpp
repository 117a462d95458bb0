#ifndef NRASOLVE_SOLVER_HPP
#define NRASOLVE_SOLVER_HPP

#include "nrasolve/elim.hpp"

#include <iostream>

namespace nra {

struct SolverSession {
    SymTab syms;
    std::vector<VarId> declared;
    std::vector<BForm> asserts;
    bool poisoned = false;

    std::string verdict;  // after check()
    std::map<VarId, Rational> model;

    std::string check();
    std::string model_text() const;
};

// Processes an SMT-LIB2 script on `in`, responses on `out`.
int run_session(std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace nra

#endif
