#include "expr.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <map>

namespace lyapsyn {

const char* func_name(FuncKind k) {
    switch (k) {
        case FuncKind::Abs: return "abs";
        case FuncKind::Exp: return "exp";
        case FuncKind::Sin: return "sin";
        case FuncKind::Arctan: return "arctan";
    }
    return "?";
}

Factor Factor::symbol(std::string name, SymKind k) {
    Factor f;
    f.is_func = false;
    f.sym = std::move(name);
    f.symkind = k;
    f.key = "0" + f.sym;
    return f;
}

Factor Factor::function(FuncKind fk, std::shared_ptr<const Expr> a) {
    Factor f;
    f.is_func = true;
    f.func = fk;
    f.arg = std::move(a);
    f.key = std::string("1") + func_name(fk) + "(" + f.arg->str() + ")";
    return f;
}

unsigned Term::degree_of(const std::string& sym) const {
    for (const auto& [f, e] : factors)
        if (!f.is_func && f.sym == sym) return e;
    return 0;
}

namespace {

// Term order: elementwise (factor key asc, exponent desc); at exhaustion the
// term with remaining factors sorts first, so pure constants come last.
bool term_before(const Term& a, const Term& b) {
    size_t n = std::min(a.factors.size(), b.factors.size());
    for (size_t i = 0; i < n; ++i) {
        if (a.factors[i].first.key != b.factors[i].first.key)
            return a.factors[i].first.key < b.factors[i].first.key;
        if (a.factors[i].second != b.factors[i].second)
            return a.factors[i].second > b.factors[i].second;
    }
    return a.factors.size() > b.factors.size();
}

bool term_same_shape(const Term& a, const Term& b) {
    if (a.factors.size() != b.factors.size()) return false;
    for (size_t i = 0; i < a.factors.size(); ++i)
        if (a.factors[i].second != b.factors[i].second || !(a.factors[i].first == b.factors[i].first))
            return false;
    return true;
}

// A term that is trivially nonnegative for every assignment: positive
// coefficient, even symbol exponents, and only Abs/Exp function factors.
bool term_obviously_nonneg(const Term& t) {
    if (t.coef <= 0) return false;
    for (const auto& [f, e] : t.factors) {
        if (f.is_func) {
            if (f.func != FuncKind::Abs && f.func != FuncKind::Exp) return false;
        } else if (e % 2 != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace

Expr::Expr(std::vector<Term> raw) {
    std::sort(raw.begin(), raw.end(), term_before);
    for (auto& t : raw) {
        if (t.coef == 0) continue;
        if (!terms_.empty() && term_same_shape(terms_.back(), t)) {
            terms_.back().coef += t.coef;
            if (terms_.back().coef == 0) terms_.pop_back();
        } else {
            terms_.push_back(std::move(t));
        }
    }
}

Expr Expr::constant(Rational q) {
    if (q == 0) return Expr();
    Term t;
    t.coef = std::move(q);
    return Expr(std::vector<Term>{std::move(t)});
}

Expr Expr::symbol(const std::string& name, SymKind k) {
    Term t;
    t.coef = 1;
    t.factors.push_back({Factor::symbol(name, k), 1});
    return Expr(std::vector<Term>{std::move(t)});
}

Expr Expr::func(FuncKind k, const Expr& arg) {
    if (arg.is_constant()) {
        Rational c = arg.constant_value();
        if (k == FuncKind::Abs) return constant(rat_abs(c));
        if (c == 0) return k == FuncKind::Exp ? constant(1) : Expr();
        // exp/sin/arctan of a nonzero constant stays symbolic (irrational).
    }
    Expr a = arg;
    if (k == FuncKind::Abs) {
        if (!a.terms_.empty() && a.terms_[0].coef < 0) a = -a;  // |u| = |-u|, canonical sign
        if (a.terms_.size() == 1 && term_obviously_nonneg(a.terms_[0])) return a;
    }
    Term t;
    t.coef = 1;
    t.factors.push_back({Factor::function(k, std::make_shared<const Expr>(std::move(a))), 1});
    return Expr(std::vector<Term>{std::move(t)});
}

Expr operator+(const Expr& a, const Expr& b) {
    std::vector<Term> raw = a.terms_;
    raw.insert(raw.end(), b.terms_.begin(), b.terms_.end());
    return Expr(std::move(raw));
}

Expr Expr::operator-() const {
    std::vector<Term> raw = terms_;
    for (auto& t : raw) t.coef = -t.coef;
    return Expr(std::move(raw));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr Expr::scaled(const Rational& c) const {
    if (c == 0) return Expr();
    std::vector<Term> raw = terms_;
    for (auto& t : raw) t.coef *= c;
    return Expr(std::move(raw));
}

Expr operator*(const Expr& a, const Expr& b) {
    auto has_abs = [](const Expr& e) {
        for (const auto& t : e.terms_)
            for (const auto& [f, ex] : t.factors)
                if (f.is_func && f.func == FuncKind::Abs) return true;
        return false;
    };
    // Fast path: no Abs-power reduction can arise.
    if (!(has_abs(a) && has_abs(b))) {
        std::vector<Term> raw;
        raw.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& ta : a.terms_) {
            for (const auto& tb : b.terms_) {
                Term out;
                out.coef = ta.coef * tb.coef;
                size_t i = 0, j = 0;
                while (i < ta.factors.size() || j < tb.factors.size()) {
                    if (j >= tb.factors.size() ||
                        (i < ta.factors.size() && ta.factors[i].first.key < tb.factors[j].first.key)) {
                        out.factors.push_back(ta.factors[i++]);
                    } else if (i >= ta.factors.size() || tb.factors[j].first.key < ta.factors[i].first.key) {
                        out.factors.push_back(tb.factors[j++]);
                    } else {
                        out.factors.push_back({ta.factors[i].first, ta.factors[i].second + tb.factors[j].second});
                        ++i;
                        ++j;
                    }
                }
                raw.push_back(std::move(out));
            }
        }
        return Expr(std::move(raw));
    }
    // Slow path: merge factor powers and reduce |u|^(2k) to u^(2k).
    Expr acc;
    for (const auto& ta : a.terms_) {
        for (const auto& tb : b.terms_) {
            std::map<std::string, std::pair<Factor, unsigned>> merged;
            for (const auto& [f, e] : ta.factors)
                merged.emplace(f.key, std::make_pair(f, 0u)).first->second.second += e;
            for (const auto& [f, e] : tb.factors)
                merged.emplace(f.key, std::make_pair(f, 0u)).first->second.second += e;
            Term out;
            out.coef = ta.coef * tb.coef;
            std::vector<Expr> pending;
            for (auto& [key, fe] : merged) {
                auto& [f, e] = fe;
                if (f.is_func && f.func == FuncKind::Abs && e >= 2) {
                    pending.push_back(f.arg->pow(e - (e % 2)));
                    e %= 2;
                }
                if (e > 0) out.factors.push_back({f, e});
            }
            Expr piece(std::vector<Term>{std::move(out)});
            for (const auto& p : pending) piece = piece * p;
            acc = acc + piece;
        }
    }
    return acc;
}

Expr Expr::pow(unsigned e) const {
    Expr acc = constant(1);
    Expr base = *this;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = base * base;
        e >>= 1u;
    }
    return acc;
}

bool Expr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].factors.empty());
}

Rational Expr::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw ExprError("constant_value on non-constant expression");
    return terms_[0].coef;
}

bool Expr::is_polynomial() const {
    for (const auto& t : terms_)
        for (const auto& [f, e] : t.factors)
            if (f.is_func) return false;
    return true;
}

bool Expr::contains_transcendental() const {
    for (const auto& t : terms_)
        for (const auto& [f, e] : t.factors)
            if (f.is_func) {
                if (f.func != FuncKind::Abs) return true;
                if (f.arg->contains_transcendental()) return true;
            }
    return false;
}

void Expr::collect_symbols(std::set<std::pair<std::string, SymKind>>& out) const {
    for (const auto& t : terms_)
        for (const auto& [f, e] : t.factors) {
            if (f.is_func)
                f.arg->collect_symbols(out);
            else
                out.insert({f.sym, f.symkind});
        }
}

bool Expr::contains_symbol(const std::string& name) const {
    std::set<std::pair<std::string, SymKind>> syms;
    collect_symbols(syms);
    for (const auto& [n, k] : syms)
        if (n == name) return true;
    return false;
}

Expr Expr::differentiate(const std::string& v) const {
    Expr acc;
    for (const auto& t : terms_) {
        for (const auto& [f, e] : t.factors)
            if (f.is_func)
                throw ExprError(std::string("differentiate: non-polynomial node '") + func_name(f.func) +
                                "' present");
        for (size_t i = 0; i < t.factors.size(); ++i) {
            const auto& [f, e] = t.factors[i];
            if (f.sym != v) continue;
            Expr part = constant(t.coef * Rational(e));
            for (size_t j = 0; j < t.factors.size(); ++j) {
                unsigned ex = t.factors[j].second - (j == i ? 1 : 0);
                if (ex > 0) part = part * symbol(t.factors[j].first.sym, t.factors[j].first.symkind).pow(ex);
            }
            acc = acc + part;
        }
    }
    return acc;
}

Expr Expr::substitute(const std::map<std::string, Expr>& bind) const {
    Expr acc;
    for (const auto& t : terms_) {
        Expr part = constant(t.coef);
        for (const auto& [f, e] : t.factors) {
            Expr base;
            if (f.is_func)
                base = func(f.func, f.arg->substitute(bind));
            else {
                auto it = bind.find(f.sym);
                base = (it != bind.end()) ? it->second : symbol(f.sym, f.symkind);
            }
            part = part * base.pow(e);
        }
        acc = acc + part;
    }
    return acc;
}

Rational Expr::eval_rational(const Point& pt) const {
    Rational acc(0);
    for (const auto& t : terms_) {
        Rational part = t.coef;
        for (const auto& [f, e] : t.factors) {
            Rational v;
            if (f.is_func) {
                if (f.func != FuncKind::Abs)
                    throw ExprError(std::string("eval_rational: transcendental node '") + func_name(f.func) +
                                    "' present");
                v = rat_abs(f.arg->eval_rational(pt));
            } else {
                auto it = pt.find(f.sym);
                if (it == pt.end()) throw ExprError("eval_rational: unbound symbol '" + f.sym + "'");
                v = it->second;
            }
            part *= rat_pow(v, e);
        }
        acc += part;
    }
    return acc;
}

long double Expr::eval_float(const FloatPoint& pt) const {
    long double acc = 0;
    for (const auto& t : terms_) {
        long double part = rat_to_ld(t.coef);
        for (const auto& [f, e] : t.factors) {
            long double v;
            if (f.is_func) {
                long double a = f.arg->eval_float(pt);
                switch (f.func) {
                    case FuncKind::Abs: v = fabsl(a); break;
                    case FuncKind::Exp: v = expl(a); break;
                    case FuncKind::Sin: v = sinl(a); break;
                    case FuncKind::Arctan: v = atanl(a); break;
                    default: v = 0;
                }
            } else {
                auto it = pt.find(f.sym);
                if (it == pt.end()) throw ExprError("eval_float: unbound symbol '" + f.sym + "'");
                v = it->second;
            }
            part *= powl(v, (long double)e);
        }
        acc += part;
    }
    return acc;
}

std::string Expr::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = rat_abs(t.coef);
        bool neg = t.coef < 0;
        std::string body;
        if (t.factors.empty()) {
            body = rat_str(c);
        } else {
            if (c != 1) body = rat_str(c) + "*";
            bool ffirst = true;
            for (const auto& [f, e] : t.factors) {
                if (!ffirst) body += "*";
                ffirst = false;
                if (f.is_func)
                    body += std::string(func_name(f.func)) + "(" + f.arg->str() + ")";
                else
                    body += f.sym;
                if (e >= 2) body += "^" + std::to_string(e);
            }
        }
        if (first) {
            out = (neg ? "-" : "") + body;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + body;
        }
    }
    return out;
}

bool Expr::operator==(const Expr& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].coef != o.terms_[i].coef) return false;
        if (!term_same_shape(terms_[i], o.terms_[i])) return false;
    }
    return true;
}

Expr lie_derivative(const Expr& v, const std::vector<std::string>& state, const std::vector<Expr>& dynamics) {
    if (state.size() != dynamics.size())
        throw ExprError("lie_derivative: dimension mismatch between state and dynamics");
    Expr acc;
    for (size_t i = 0; i < state.size(); ++i) acc = acc + v.differentiate(state[i]) * dynamics[i];
    return acc;
}

// ---------------------------------------------------------------------------
// Parser (recursive descent over the expression grammar)
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum Kind { INT, NAME, OP, END } kind;
    std::string text;
    int line, col;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;
    Token cur;

    explicit Lexer(const std::string& s) : src(s) { advance(); }

    void bump(char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void advance() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) bump(src[pos]);
        cur.line = line;
        cur.col = col;
        if (pos >= src.size()) {
            cur = {Token::END, "", line, col};
            return;
        }
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string t;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                t.push_back(src[pos]);
                bump(src[pos]);
            }
            cur = {Token::INT, t, cur.line, cur.col};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string t;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
                t.push_back(src[pos]);
                bump(src[pos]);
            }
            cur = {Token::NAME, t, cur.line, cur.col};
            return;
        }
        static const std::string ops = "+-*^()|/";
        if (ops.find(c) != std::string::npos) {
            cur = {Token::OP, std::string(1, c), cur.line, cur.col};
            bump(c);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
};

struct Parser {
    Lexer lex;
    const std::set<std::string>& params;

    Parser(const std::string& s, const std::set<std::string>& p) : lex(s), params(p) {}

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, lex.cur.line, lex.cur.col); }

    bool is_op(const char* o) const { return lex.cur.kind == Token::OP && lex.cur.text == o; }

    void expect_op(const char* o, const char* what) {
        if (!is_op(o)) fail(std::string("expected '") + o + "' " + what);
        lex.advance();
    }

    Expr parse_expr() {
        Expr acc = parse_term();
        while (is_op("+") || is_op("-")) {
            bool plus = lex.cur.text == "+";
            lex.advance();
            Expr t = parse_term();
            acc = plus ? acc + t : acc - t;
        }
        return acc;
    }

    Expr parse_term() {
        Expr acc = parse_factor();
        while (is_op("*")) {
            lex.advance();
            acc = acc * parse_factor();
        }
        return acc;
    }

    Expr parse_factor() {
        // Unary minus binds looser than '^' so that canonical output like
        // "-x^4" round-trips as -(x^4).
        if (is_op("-")) {
            lex.advance();
            return -parse_factor();
        }
        Expr a = parse_atom();
        if (is_op("^")) {
            lex.advance();
            if (lex.cur.kind != Token::INT) {
                if (lex.cur.kind == Token::OP && (lex.cur.text == "-" || lex.cur.text == "("))
                    fail("exponent must be a nonnegative integer (negative or fractional exponents are not allowed)");
                fail("expected nonnegative integer exponent after '^'");
            }
            if (lex.cur.text.size() > 4) fail("exponent too large");
            unsigned long e = std::stoul(lex.cur.text);
            lex.advance();
            a = a.pow(static_cast<unsigned>(e));
        }
        return a;
    }

    Expr parse_atom() {
        if (lex.cur.kind == Token::INT) {
            BigInt num(lex.cur.text);
            lex.advance();
            if (is_op("/")) {
                lex.advance();
                if (lex.cur.kind != Token::INT) fail("expected positive integer denominator");
                BigInt den(lex.cur.text);
                if (den == 0) fail("zero denominator");
                lex.advance();
                return Expr::constant(Rational(num, den));
            }
            return Expr::constant(Rational(num));
        }
        if (lex.cur.kind == Token::NAME) {
            std::string name = lex.cur.text;
            lex.advance();
            if (is_op("(")) {
                FuncKind k;
                if (name == "exp")
                    k = FuncKind::Exp;
                else if (name == "sin")
                    k = FuncKind::Sin;
                else if (name == "arctan")
                    k = FuncKind::Arctan;
                else if (name == "abs")
                    k = FuncKind::Abs;
                else
                    fail("unknown function name '" + name + "'");
                lex.advance();
                Expr inner = parse_expr();
                expect_op(")", "to close function argument");
                return Expr::func(k, inner);
            }
            if (name == "exp" || name == "sin" || name == "arctan" || name == "abs")
                fail("function name '" + name + "' requires an argument list");
            if (params.count(name)) return Expr::param(name);
            if (name.size() > 3 && name.compare(0, 3, "eps") == 0 &&
                std::all_of(name.begin() + 3, name.end(),
                            [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                return Expr::symbol(name, SymKind::Eps);
            return Expr::var(name);
        }
        if (is_op("(")) {
            lex.advance();
            Expr inner = parse_expr();
            expect_op(")", "to close parenthesis");
            return inner;
        }
        if (is_op("-")) {
            lex.advance();
            return -parse_atom();
        }
        if (is_op("|")) {
            lex.advance();
            Expr inner = parse_expr();
            expect_op("|", "to close absolute value");
            return Expr::func(FuncKind::Abs, inner);
        }
        fail("expected a number, name, '(', '-', or '|'");
    }
};

}  // namespace

Expr Expr::parse(const std::string& text, const std::set<std::string>& params) {
    Parser p(text, params);
    Expr e = p.parse_expr();
    if (p.lex.cur.kind != Token::END) p.fail("unexpected trailing input");
    return e;
}

}  // namespace lyapsyn
