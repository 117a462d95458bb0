#ifndef NRASOLVE_SIMPLEX_HPP
#define NRASOLVE_SIMPLEX_HPP

#include "nrasolve/elim.hpp"

namespace nra {

// Decides a pure-linear conjunction with an exact general simplex over
// delta-rationals (strict bounds as infinitesimal offsets). The model policy
// is the solver's: zero-initialized values snapped to asserted bounds,
// lowest-index pivoting, delta resolved to the largest admissible rational
// capped at 1.
DecideOutcome solve_linear(const Conj& atoms, const std::vector<VarId>& vars);

}  // namespace nra

#endif
