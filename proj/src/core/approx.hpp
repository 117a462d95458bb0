#ifndef LYAPSYN_APPROX_HPP
#define LYAPSYN_APPROX_HPP

#include "box.hpp"
#include "expr.hpp"

#include <map>
#include <vector>

namespace lyapsyn {

struct ApproxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApproxFlags {
    bool tight_sin_bound = false;   // use |x|^(2N+2)/(2N+2)! instead of the printed sin bound
    bool paper_arctan_bound = false;  // replicate the paper's |x|^(2N+3)/(2(2N+3)) (not a sound bound)
};

// Truncated Taylor scheme for one transcendental function: the polynomial
// series, a remainder bound in |x|, and the validity region of the bound.
struct ApproxScheme {
    FuncKind kind;
    int order;  // N
    ApproxFlags flags;

    // Series and bound as expressions in the given argument variable.
    Expr series(const Expr& x) const;
    Expr bound(const Expr& x) const;
    // sup|x| must be <= this for the bound to be valid; nullopt = no
    // restriction (sin, whose bound is instead guarded by sampling).
    std::optional<Rational> validity_radius() const;
    // Smallest admissible order for a domain with the given sup|x|.
    static int minimal_order(FuncKind kind, const Rational& abs_sup);
    std::string describe_validity() const;
};

ApproxScheme builtin_scheme(FuncKind kind, int order, const ApproxFlags& flags = {});

struct EpsBound {
    int eps_id;
    Expr bound;     // |eps| <= bound (an expression in |arg|)
    Expr argument;  // the argument variable expression
};

struct RelaxEntry {
    FuncKind kind;
    Expr argument;
    int order;
};

// Result of rewriting transcendental nodes into series + bounded eps vars.
struct Relaxation {
    Expr rewritten;  // transcendental-free
    std::vector<EpsBound> eps_bounds;
    std::map<int, RelaxEntry> table;
    bool empty() const { return eps_bounds.empty(); }
};

// Replaces every Exp/Sin/Arctan node of e by its truncated series plus a
// fresh bounded eps variable. Identical occurrences (same kind, argument,
// order) share one eps variable. Arguments must be single state variables
// whose domain interval (closure) lies inside the scheme's validity region.
// eps ids are assigned from eps_id_base in first-encounter order.
Relaxation relax(const Expr& e, const std::map<FuncKind, int>& orders, const Box& domain,
                 const ApproxFlags& flags = {}, int eps_id_base = 0);

}  // namespace lyapsyn

#endif
