#include "nrasolve/mpoly.hpp"

#include <algorithm>
#include <sstream>

namespace nra {

MPoly::MPoly(std::vector<std::pair<Mono, Rational>> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [m, c] : raw) {
        if (c == 0) continue;
        if (!terms_.empty() && terms_.back().first == m) {
            terms_.back().second += c;
            if (terms_.back().second == 0) terms_.pop_back();
        } else {
            terms_.emplace_back(std::move(m), std::move(c));
        }
    }
}

MPoly MPoly::constant(Rational c) {
    if (c == 0) return MPoly();
    return MPoly({{Mono{}, std::move(c)}});
}

MPoly MPoly::var(VarId v) { return MPoly({{Mono{{{v, 1}}}, Rational(1)}}); }

MPoly MPoly::operator+(const MPoly& o) const {
    auto raw = terms_;
    raw.insert(raw.end(), o.terms_.begin(), o.terms_.end());
    return MPoly(std::move(raw));
}

MPoly MPoly::operator-() const {
    auto raw = terms_;
    for (auto& [m, c] : raw) c = -c;
    return MPoly(std::move(raw));
}

MPoly MPoly::operator-(const MPoly& o) const { return *this + (-o); }

MPoly MPoly::scaled(const Rational& c) const {
    if (c == 0) return MPoly();
    auto raw = terms_;
    for (auto& [m, k] : raw) k *= c;
    return MPoly(std::move(raw));
}

MPoly MPoly::operator*(const MPoly& o) const {
    std::vector<std::pair<Mono, Rational>> raw;
    raw.reserve(terms_.size() * o.terms_.size());
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Mono m;
            size_t i = 0, j = 0;
            while (i < ma.pp.size() || j < mb.pp.size()) {
                if (j >= mb.pp.size() || (i < ma.pp.size() && ma.pp[i].first < mb.pp[j].first))
                    m.pp.push_back(ma.pp[i++]);
                else if (i >= ma.pp.size() || mb.pp[j].first < ma.pp[i].first)
                    m.pp.push_back(mb.pp[j++]);
                else {
                    m.pp.push_back({ma.pp[i].first, ma.pp[i].second + mb.pp[j].second});
                    ++i;
                    ++j;
                }
            }
            raw.emplace_back(std::move(m), ca * cb);
        }
    }
    return MPoly(std::move(raw));
}

MPoly MPoly::pow(unsigned e) const {
    MPoly acc = constant(Rational(1));
    MPoly base = *this;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = base * base;
        e >>= 1u;
    }
    return acc;
}

Rational MPoly::const_value() const {
    if (terms_.empty()) return Rational(0);
    return terms_[0].second;
}

unsigned MPoly::deg(VarId v) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.deg(v));
    return d;
}

unsigned MPoly::total_deg() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_deg());
    return d;
}

std::set<VarId> MPoly::vars() const {
    std::set<VarId> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m.pp) out.insert(v);
    return out;
}

std::vector<MPoly> MPoly::coeffs_in(VarId v) const {
    std::vector<std::vector<std::pair<Mono, Rational>>> buckets(deg(v) + 1);
    for (const auto& [m, c] : terms_) {
        unsigned d = m.deg(v);
        Mono rest;
        for (const auto& [var, e] : m.pp)
            if (var != v) rest.pp.push_back({var, e});
        buckets[d].emplace_back(std::move(rest), c);
    }
    std::vector<MPoly> out;
    for (auto& b : buckets) out.push_back(MPoly(std::move(b)));
    return out;
}

MPoly MPoly::subst(VarId v, const MPoly& value) const {
    auto cs = coeffs_in(v);
    MPoly acc;
    for (size_t i = cs.size(); i-- > 0;) acc = acc * value + cs[i];
    return acc;
}

MPoly MPoly::subst_rat(VarId v, const Rational& value) const { return subst(v, MPoly::constant(value)); }

MPoly MPoly::derivative(VarId v) const {
    std::vector<std::pair<Mono, Rational>> raw;
    for (const auto& [m, c] : terms_) {
        unsigned d = m.deg(v);
        if (d == 0) continue;
        Mono dm;
        for (const auto& [var, e] : m.pp) {
            if (var == v) {
                if (e > 1) dm.pp.push_back({var, e - 1});
            } else {
                dm.pp.push_back({var, e});
            }
        }
        raw.emplace_back(std::move(dm), c * Rational(d));
    }
    return MPoly(std::move(raw));
}

Rational MPoly::eval(const std::map<VarId, Rational>& pt) const {
    Rational acc(0);
    for (const auto& [m, c] : terms_) {
        Rational part = c;
        for (const auto& [v, e] : m.pp) {
            auto it = pt.find(v);
            if (it == pt.end()) throw std::runtime_error("mpoly eval: unbound variable");
            part *= lyapsyn::rat_pow(it->second, e);
        }
        acc += part;
    }
    return acc;
}

MPoly MPoly::primitive() const {
    if (terms_.empty()) return *this;
    BigInt gnum(0), glcm(1);
    using boost::multiprecision::gcd;
    using boost::multiprecision::lcm;
    for (const auto& [m, c] : terms_) {
        gnum = gcd(gnum, BigInt(boost::multiprecision::abs(lyapsyn::rat_num(c))));
        glcm = lcm(glcm, lyapsyn::rat_den(c));
    }
    if (gnum == 0) return *this;
    Rational scale = Rational(glcm, gnum);
    return scaled(scale);
}

int MPoly::leading_sign() const {
    if (terms_.empty()) return 0;
    return terms_[0].second > 0 ? 1 : -1;
}

std::string MPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        out << (first ? "" : " + ") << lyapsyn::rat_str(c);
        for (const auto& [v, e] : m.pp) {
            out << "*x" << v;
            if (e > 1) out << "^" << e;
        }
        first = false;
    }
    return out.str();
}

}  // namespace nra
