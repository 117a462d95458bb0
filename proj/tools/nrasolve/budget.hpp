#ifndef NRASOLVE_BUDGET_HPP
#define NRASOLVE_BUDGET_HPP

#include "nrasolve/formula.hpp"

namespace nra {

// Per-query work budget. Polynomial-heavy primitives spend units; exceeding
// the budget aborts the query with an exception that surfaces as "unknown".
struct BudgetExceeded : SolveError {
    BudgetExceeded() : SolveError("work budget exceeded") {}
};

void budget_reset(long units);
void budget_spend(long units);

}  // namespace nra

#endif
