#ifndef NRASOLVE_MPOLY_HPP
#define NRASOLVE_MPOLY_HPP

#include "core/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace nra {

using lyapsyn::BigInt;
using lyapsyn::Rational;

using VarId = int;

// Power product: sorted (var, exponent) pairs, exponents >= 1.
struct Mono {
    std::vector<std::pair<VarId, unsigned>> pp;

    unsigned deg(VarId v) const {
        for (const auto& [var, e] : pp)
            if (var == v) return e;
        return 0;
    }
    unsigned total_deg() const {
        unsigned d = 0;
        for (const auto& [var, e] : pp) d += e;
        return d;
    }
    bool operator==(const Mono& o) const { return pp == o.pp; }
    bool operator<(const Mono& o) const { return pp < o.pp; }
};

// Sparse multivariate polynomial with exact rational coefficients.
class MPoly {
public:
    MPoly() = default;
    static MPoly constant(Rational c);
    static MPoly var(VarId v);

    MPoly operator+(const MPoly& o) const;
    MPoly operator-(const MPoly& o) const;
    MPoly operator*(const MPoly& o) const;
    MPoly operator-() const;
    MPoly scaled(const Rational& c) const;
    MPoly pow(unsigned e) const;

    bool is_zero() const { return terms_.empty(); }
    bool is_const() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.pp.empty()); }
    Rational const_value() const;

    unsigned deg(VarId v) const;
    unsigned total_deg() const;
    std::set<VarId> vars() const;
    bool contains(VarId v) const { return deg(v) > 0; }

    // Coefficients of powers of v: result[i] is the coefficient of v^i.
    std::vector<MPoly> coeffs_in(VarId v) const;
    MPoly subst(VarId v, const MPoly& value) const;
    MPoly subst_rat(VarId v, const Rational& value) const;
    MPoly derivative(VarId v) const;
    Rational eval(const std::map<VarId, Rational>& pt) const;

    // Divides by the positive gcd of coefficient numerators/denominators so
    // that proportional polynomials compare equal up to sign.
    MPoly primitive() const;
    int leading_sign() const;  // sign of the first (Mono-ordered) coefficient

    const std::vector<std::pair<Mono, Rational>>& terms() const { return terms_; }
    bool operator==(const MPoly& o) const { return terms_ == o.terms_; }
    bool operator<(const MPoly& o) const { return terms_ < o.terms_; }
    std::string str() const;  // debugging, x<i> names

private:
    explicit MPoly(std::vector<std::pair<Mono, Rational>> raw);
    std::vector<std::pair<Mono, Rational>> terms_;  // sorted by Mono, nonzero coefs
};

}  // namespace nra

#endif
