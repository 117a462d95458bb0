#ifndef NRASOLVE_UNIPOLY_HPP
#define NRASOLVE_UNIPOLY_HPP

#include "nrasolve/formula.hpp"

#include <optional>

namespace nra {

// Univariate polynomial, dense exact-rational coefficients, c[i] * x^i.
struct UPoly {
    std::vector<Rational> c;

    static UPoly from_mpoly(const MPoly& p, VarId v);
    void normalize();
    int degree() const { return (int)c.size() - 1; }
    bool is_zero() const { return c.empty(); }
    Rational eval(const Rational& x) const;
    int sign_at(const Rational& x) const;
    UPoly derivative() const;
    UPoly operator-() const;
    bool operator==(const UPoly& o) const { return c == o.c; }
    // Scales to integer-primitive form with positive leading coefficient sign
    // preserved (divides by a positive rational).
    UPoly primitive() const;
    std::string str() const;
};

UPoly upoly_rem(const UPoly& a, const UPoly& b);
UPoly upoly_gcd(UPoly a, UPoly b);  // primitive, positive leading coefficient
UPoly square_free(const UPoly& p);

// One real root of a square-free polynomial: either an exact rational or an
// open interval (lo, hi) with sf(lo) != 0, sf(hi) != 0 containing exactly one
// root.
struct Root {
    UPoly sf;
    bool exact = false;
    Rational point;
    Rational lo, hi;

    Rational lower() const { return exact ? point : lo; }
    Rational upper() const { return exact ? point : hi; }
};

std::vector<Root> isolate_roots(const UPoly& p);  // ascending
void refine_root(Root& r);
void try_exactify(Root& r, int rounds);

// Sign of q at the root (exact).
int sign_at_root(const UPoly& q, Root& r);

struct UniAtom {
    UPoly p;
    Rel rel;
};

struct UniResult {
    enum Kind { Unsat, SatModel, SatNoRational } kind = Unsat;
    Rational model;
};

// Decides a conjunction of univariate atoms. Model policy: satisfying
// rational critical points in descending order first (boundary preference),
// then gap samples ordered by simplicity.
UniResult solve_univariate(const std::vector<UniAtom>& atoms_in);

}  // namespace nra

#endif
