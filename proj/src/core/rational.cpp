#include "rational.hpp"

#include <cctype>
#include <cmath>

namespace lyapsyn {

int rat_sign(const Rational& q) {
    if (q > 0) return 1;
    if (q < 0) return -1;
    return 0;
}

Rational rat_pow(const Rational& base, unsigned exp) {
    Rational acc(1);
    Rational b = base;
    unsigned e = exp;
    while (e > 0) {
        if (e & 1u) acc *= b;
        b *= b;
        e >>= 1u;
    }
    return acc;
}

BigInt factorial(unsigned n) {
    BigInt acc(1);
    for (unsigned i = 2; i <= n; ++i) acc *= i;
    return acc;
}

Rational rat_parse(const std::string& text) {
    auto bad = [&]() { throw std::invalid_argument("malformed rational: '" + text + "'"); };
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            if (s.find('.') != std::string::npos) return rat_from_decimal(s);
            return Rational(BigInt(s));
        }
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den <= 0) bad();
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rational(0);
}

std::string rat_str(const Rational& q) {
    std::string s = rat_num(q).str();
    if (rat_den(q) != 1) s += "/" + rat_den(q).str();
    return s;
}

long double rat_to_ld(const Rational& q) {
    // cpp_rational converts via long double exactly when representable;
    // otherwise this is the usual nearest conversion.
    return q.convert_to<long double>();
}

Rational rat_from_decimal(const std::string& text) {
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string head = text.substr(0, dot);
    std::string tail = text.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (neg) head = head.substr(1);
    if (head.empty()) head = "0";
    if (tail.empty()) tail = "0";
    for (char c : head + tail)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("malformed decimal: '" + text + "'");
    BigInt scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    BigInt num = BigInt(head) * scale + BigInt(tail);
    Rational r(num, scale);
    return neg ? Rational(-r) : r;
}

namespace {

// Simplest rational in (lo, hi) with 0 <= lo < hi, both finite, where each
// side may be attainable (non-strict). Continued-fraction descent.
Rational simplest_nonneg(Rational lo, bool lo_open, Rational hi, bool hi_open) {
    BigInt fl = rat_num(lo) / rat_den(lo);  // floor for nonnegative lo
    Rational n(fl);
    if (n < lo || (lo_open && n == lo)) n += 1;
    if (n < hi || (!hi_open && n == hi)) return n;  // an integer fits
    // No integer fits: lo, hi share integer part fl with fractional parts.
    Rational flo = lo - Rational(fl);
    Rational fhi = hi - Rational(fl);
    if (flo == 0) {
        // Interval (fl, fl + fhi): pick fl + 1/t for the smallest valid integer t.
        Rational tmin = Rational(1) / fhi;
        BigInt tfl = rat_num(tmin) / rat_den(tmin);
        Rational t(tfl);
        while (t < tmin || (hi_open && t == tmin) || t <= 0) t += 1;
        return Rational(fl) + Rational(1) / t;
    }
    // Recurse on reciprocal interval (1/fhi, 1/flo); openness swaps sides.
    Rational inner = simplest_nonneg(Rational(1) / fhi, hi_open, Rational(1) / flo, lo_open);
    return Rational(fl) + Rational(1) / inner;
}

}  // namespace

std::optional<Rational> simplest_rational_between(const std::optional<Rational>& lo, bool lo_strict,
                                                  const std::optional<Rational>& hi, bool hi_strict) {
    if (lo && hi) {
        if (*lo > *hi) return std::nullopt;
        if (*lo == *hi) {
            if (lo_strict || hi_strict) return std::nullopt;
            return *lo;
        }
    }
    Rational zero(0);
    bool zero_ok = (!lo || *lo < zero || (*lo == zero && !lo_strict)) &&
                   (!hi || *hi > zero || (*hi == zero && !hi_strict));
    if (zero_ok) return zero;
    if (!lo) {
        // (-inf, hi) with hi <= 0: mirror of the positive unbounded case.
        auto m = simplest_rational_between(Rational(-*hi), hi_strict, std::nullopt, false);
        return Rational(-*m);
    }
    if (!hi) {
        if (*lo < 0) return Rational(0);  // covered above, defensive
        BigInt fl = rat_num(*lo) / rat_den(*lo);
        Rational n(fl);
        while (n < *lo || (lo_strict && n == *lo)) n += 1;
        return n;
    }
    if (*hi <= 0) {
        auto m = simplest_rational_between(Rational(-*hi), hi_strict, Rational(-*lo), lo_strict);
        if (!m) return std::nullopt;
        return Rational(-*m);
    }
    return simplest_nonneg(*lo, lo_strict, *hi, hi_strict);
}

}  // namespace lyapsyn
