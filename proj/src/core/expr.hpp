#ifndef LYAPSYN_EXPR_HPP
#define LYAPSYN_EXPR_HPP

#include "rational.hpp"

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lyapsyn {

enum class SymKind { Var, Param, Eps };
enum class FuncKind { Abs, Exp, Sin, Arctan };

const char* func_name(FuncKind k);

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

// Domain errors: non-polynomial differentiation, unbound variables,
// transcendental nodes in exact evaluation.
struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Expr;

// One multiplicative factor of a term: either a named symbol or a function
// node applied to a sub-expression.
struct Factor {
    bool is_func = false;
    std::string sym;  // symbol name (Eps symbols are named "eps<k>")
    SymKind symkind = SymKind::Var;
    FuncKind func = FuncKind::Abs;
    std::shared_ptr<const Expr> arg;
    std::string key;  // canonical sort/equality key, cached

    static Factor symbol(std::string name, SymKind k);
    static Factor function(FuncKind f, std::shared_ptr<const Expr> a);
    bool operator==(const Factor& o) const { return key == o.key; }
};

struct Term {
    Rational coef;
    std::vector<std::pair<Factor, unsigned>> factors;  // sorted by key, exponents >= 1
    unsigned degree_of(const std::string& sym) const;
};

// Immutable symbolic expression over exact rationals, kept in a canonical
// expanded normal form: a sum of terms, each a rational coefficient times a
// power product of symbols and function atoms. Two expressions are equal iff
// their normal forms are identical, which makes printing deterministic.
class Expr {
public:
    Expr() = default;  // zero
    static Expr constant(Rational q);
    static Expr constant(long v) { return constant(Rational(v)); }
    static Expr symbol(const std::string& name, SymKind k);
    static Expr var(const std::string& name) { return symbol(name, SymKind::Var); }
    static Expr param(const std::string& name) { return symbol(name, SymKind::Param); }
    static Expr eps(int id) { return symbol("eps" + std::to_string(id), SymKind::Eps); }
    static Expr func(FuncKind k, const Expr& arg);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    Expr operator-() const;
    Expr pow(unsigned e) const;
    Expr scaled(const Rational& c) const;

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // pre: is_constant()
    // No Abs/Exp/Sin/Arctan node anywhere (eps symbols allowed).
    bool is_polynomial() const;
    bool contains_transcendental() const;  // Exp/Sin/Arctan (not Abs)
    void collect_symbols(std::set<std::pair<std::string, SymKind>>& out) const;
    bool contains_symbol(const std::string& name) const;

    Expr differentiate(const std::string& v) const;
    Expr substitute(const std::map<std::string, Expr>& bind) const;
    Rational eval_rational(const Point& pt) const;
    long double eval_float(const FloatPoint& pt) const;

    std::string str() const;
    bool operator==(const Expr& o) const;
    bool operator!=(const Expr& o) const { return !(*this == o); }

    const std::vector<Term>& terms() const { return terms_; }

    // Parses the expression grammar. Names in `params` become Param symbols,
    // names of the form eps<k> become Eps symbols, all others Var.
    static Expr parse(const std::string& text, const std::set<std::string>& params = {});

private:
    explicit Expr(std::vector<Term> raw);
    std::vector<Term> terms_;
};

Expr lie_derivative(const Expr& v, const std::vector<std::string>& state, const std::vector<Expr>& dynamics);

}  // namespace lyapsyn

#endif
