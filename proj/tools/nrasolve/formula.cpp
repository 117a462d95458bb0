#include "nrasolve/formula.hpp"

#include <algorithm>
#include <cctype>

namespace nra {

Rel negate_rel(Rel r) {
    switch (r) {
        case Rel::LT: return Rel::GE;
        case Rel::LE: return Rel::GT;
        case Rel::GT: return Rel::LE;
        case Rel::GE: return Rel::LT;
        case Rel::EQ: return Rel::NE;
        case Rel::NE: return Rel::EQ;
    }
    return Rel::EQ;
}

bool rel_holds(Rel r, int sign) {
    switch (r) {
        case Rel::LT: return sign < 0;
        case Rel::LE: return sign <= 0;
        case Rel::GT: return sign > 0;
        case Rel::GE: return sign >= 0;
        case Rel::EQ: return sign == 0;
        case Rel::NE: return sign != 0;
    }
    return false;
}

bool rel_strict(Rel r) { return r == Rel::LT || r == Rel::GT || r == Rel::NE; }

BForm BForm::make_atom(MPoly p, Rel rel) {
    if (p.is_const()) {
        int s = p.is_zero() ? 0 : (p.const_value() > 0 ? 1 : -1);
        return rel_holds(rel, s) ? make_true() : make_false();
    }
    BForm f;
    f.kind = Atom;
    f.atom = PAtom{std::move(p), rel};
    return f;
}

BForm BForm::make_and(std::vector<BForm> kids) {
    std::vector<BForm> keep;
    for (auto& k : kids) {
        if (k.kind == False) return make_false();
        if (k.kind == True) continue;
        keep.push_back(std::move(k));
    }
    if (keep.empty()) return make_true();
    if (keep.size() == 1) return keep[0];
    BForm f;
    f.kind = And;
    f.kids = std::move(keep);
    return f;
}

BForm BForm::make_or(std::vector<BForm> kids) {
    std::vector<BForm> keep;
    for (auto& k : kids) {
        if (k.kind == True) return make_true();
        if (k.kind == False) continue;
        keep.push_back(std::move(k));
    }
    if (keep.empty()) return make_false();
    if (keep.size() == 1) return keep[0];
    BForm f;
    f.kind = Or;
    f.kids = std::move(keep);
    return f;
}

BForm BForm::make_not(BForm f) {
    BForm n;
    n.kind = Not;
    n.kids.push_back(std::move(f));
    return n;
}

VarId SymTab::intern(const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    VarId v = (VarId)names.size();
    names.push_back(name);
    ids.emplace(name, v);
    return v;
}

VarId SymTab::lookup(const std::string& name) const {
    auto it = ids.find(name);
    if (it == ids.end()) throw SolveError("undeclared symbol '" + name + "'");
    return it->second;
}

namespace {

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i >= s.size()) return false;
    bool digits = false;
    for (; i < s.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(s[i])))
            digits = true;
        else if (s[i] != '.')
            return false;
    }
    return digits;
}

// A term value guarded by a conjunction of side conditions from ite nodes.
struct GTerm {
    std::vector<BForm> conds;
    MPoly val;
};

std::vector<GTerm> parse_term(const SNode& n, SymTab& syms);

std::vector<GTerm> combine(const std::vector<std::vector<GTerm>>& args,
                           const std::function<MPoly(const std::vector<MPoly>&)>& op) {
    std::vector<GTerm> acc{{std::vector<BForm>{}, MPoly()}};
    std::vector<GTerm> out;
    // cartesian product, left argument varying slowest
    std::vector<size_t> idx(args.size(), 0);
    std::function<void(size_t, std::vector<BForm>&, std::vector<MPoly>&)> rec =
        [&](size_t k, std::vector<BForm>& conds, std::vector<MPoly>& vals) {
            if (k == args.size()) {
                out.push_back({conds, op(vals)});
                return;
            }
            for (const auto& g : args[k]) {
                size_t nc = conds.size();
                conds.insert(conds.end(), g.conds.begin(), g.conds.end());
                vals.push_back(g.val);
                rec(k + 1, conds, vals);
                vals.pop_back();
                conds.resize(nc);
            }
        };
    std::vector<BForm> conds;
    std::vector<MPoly> vals;
    rec(0, conds, vals);
    return out;
}

std::vector<GTerm> parse_term(const SNode& n, SymTab& syms) {
    if (n.is_atom) {
        if (is_number(n.atom)) {
            Rational q = n.atom.find('.') != std::string::npos ? lyapsyn::rat_from_decimal(n.atom)
                                                               : Rational(BigInt(n.atom));
            return {{{}, MPoly::constant(q)}};
        }
        return {{{}, MPoly::var(syms.lookup(n.atom))}};
    }
    if (n.kids.empty()) throw SolveError("empty term");
    const std::string& head = n.kids[0].atom;
    if (head == "ite") {
        if (n.kids.size() != 4) throw SolveError("ite needs 3 arguments");
        BForm c = parse_formula(n.kids[1], syms);
        auto then_cases = parse_term(n.kids[2], syms);
        auto else_cases = parse_term(n.kids[3], syms);
        std::vector<GTerm> out;
        for (auto& g : then_cases) {
            g.conds.insert(g.conds.begin(), c);
            out.push_back(std::move(g));
        }
        for (auto& g : else_cases) {
            g.conds.insert(g.conds.begin(), BForm::make_not(c));
            out.push_back(std::move(g));
        }
        return out;
    }
    std::vector<std::vector<GTerm>> args;
    for (size_t i = 1; i < n.kids.size(); ++i) args.push_back(parse_term(n.kids[i], syms));
    if (head == "+")
        return combine(args, [](const std::vector<MPoly>& vs) {
            MPoly acc;
            for (const auto& v : vs) acc = acc + v;
            return acc;
        });
    if (head == "*")
        return combine(args, [](const std::vector<MPoly>& vs) {
            MPoly acc = MPoly::constant(Rational(1));
            for (const auto& v : vs) acc = acc * v;
            return acc;
        });
    if (head == "-") {
        if (args.size() == 1)
            return combine(args, [](const std::vector<MPoly>& vs) { return -vs[0]; });
        return combine(args, [](const std::vector<MPoly>& vs) {
            MPoly acc = vs[0];
            for (size_t i = 1; i < vs.size(); ++i) acc = acc - vs[i];
            return acc;
        });
    }
    if (head == "/") {
        if (args.size() != 2) throw SolveError("/ needs 2 arguments");
        return combine(args, [](const std::vector<MPoly>& vs) {
            if (!vs[1].is_const() || vs[1].is_zero())
                throw SolveError("division only by nonzero constants");
            return vs[0].scaled(Rational(1) / vs[1].const_value());
        });
    }
    throw SolveError("unsupported term head '" + head + "'");
}

BForm cmp_formula(const std::vector<GTerm>& a, const std::vector<GTerm>& b, Rel rel) {
    std::vector<BForm> cases;
    for (const auto& ga : a)
        for (const auto& gb : b) {
            std::vector<BForm> conj = ga.conds;
            conj.insert(conj.end(), gb.conds.begin(), gb.conds.end());
            conj.push_back(BForm::make_atom(ga.val - gb.val, rel));
            cases.push_back(BForm::make_and(std::move(conj)));
        }
    return BForm::make_or(std::move(cases));
}

}  // namespace

BForm parse_formula(const SNode& n, SymTab& syms) {
    if (n.is_atom) {
        if (n.atom == "true") return BForm::make_true();
        if (n.atom == "false") return BForm::make_false();
        throw SolveError("boolean atoms other than true/false are not supported ('" + n.atom + "')");
    }
    if (n.kids.empty()) throw SolveError("empty formula");
    const std::string& head = n.kids[0].atom;
    if (head == "and" || head == "or") {
        std::vector<BForm> kids;
        for (size_t i = 1; i < n.kids.size(); ++i) kids.push_back(parse_formula(n.kids[i], syms));
        return head == "and" ? BForm::make_and(std::move(kids)) : BForm::make_or(std::move(kids));
    }
    if (head == "not") {
        if (n.kids.size() != 2) throw SolveError("not needs 1 argument");
        return BForm::make_not(parse_formula(n.kids[1], syms));
    }
    if (head == "=>") {
        if (n.kids.size() != 3) throw SolveError("=> needs 2 arguments");
        return BForm::make_or(
            {BForm::make_not(parse_formula(n.kids[1], syms)), parse_formula(n.kids[2], syms)});
    }
    Rel rel;
    if (head == "<")
        rel = Rel::LT;
    else if (head == "<=")
        rel = Rel::LE;
    else if (head == ">")
        rel = Rel::GT;
    else if (head == ">=")
        rel = Rel::GE;
    else if (head == "=")
        rel = Rel::EQ;
    else if (head == "distinct")
        rel = Rel::NE;
    else
        throw SolveError("unsupported formula head '" + head + "'");
    if (n.kids.size() < 3) throw SolveError("comparison needs at least 2 arguments");
    std::vector<std::vector<GTerm>> args;
    for (size_t i = 1; i < n.kids.size(); ++i) args.push_back(parse_term(n.kids[i], syms));
    if (rel == Rel::NE) {
        if (args.size() != 2) throw SolveError("distinct supports exactly 2 arguments");
        return cmp_formula(args[0], args[1], Rel::NE);
    }
    std::vector<BForm> chain;
    for (size_t i = 0; i + 1 < args.size(); ++i) chain.push_back(cmp_formula(args[i], args[i + 1], rel));
    return BForm::make_and(std::move(chain));
}

BForm nnf(const BForm& f, bool negate) {
    switch (f.kind) {
        case BForm::True: return negate ? BForm::make_false() : BForm::make_true();
        case BForm::False: return negate ? BForm::make_true() : BForm::make_false();
        case BForm::Atom:
            return BForm::make_atom(f.atom.p, negate ? negate_rel(f.atom.rel) : f.atom.rel);
        case BForm::Not: return nnf(f.kids[0], !negate);
        case BForm::And:
        case BForm::Or: {
            std::vector<BForm> kids;
            for (const auto& k : f.kids) kids.push_back(nnf(k, negate));
            bool is_and = (f.kind == BForm::And) != negate;
            return is_and ? BForm::make_and(std::move(kids)) : BForm::make_or(std::move(kids));
        }
    }
    return BForm::make_true();
}

namespace {

void dnf_rec(const BForm& f, std::vector<Conj>& out, size_t cap) {
    switch (f.kind) {
        case BForm::True: out.push_back({}); return;
        case BForm::False: return;
        case BForm::Atom:
            if (f.atom.rel == Rel::NE) {
                out.push_back({PAtom{f.atom.p, Rel::GT}});
                out.push_back({PAtom{f.atom.p, Rel::LT}});
            } else {
                out.push_back({f.atom});
            }
            return;
        case BForm::Not: throw SolveError("internal: NOT in NNF");
        case BForm::Or:
            for (const auto& k : f.kids) {
                dnf_rec(k, out, cap);
                if (out.size() > cap) throw SolveError("DNF size limit exceeded");
            }
            return;
        case BForm::And: {
            std::vector<Conj> acc{{}};
            for (const auto& k : f.kids) {
                std::vector<Conj> kb;
                dnf_rec(k, kb, cap);
                std::vector<Conj> next;
                next.reserve(acc.size() * kb.size());
                for (const auto& a : acc)
                    for (const auto& b : kb) {
                        Conj merged = a;
                        merged.insert(merged.end(), b.begin(), b.end());
                        next.push_back(std::move(merged));
                        if (next.size() > cap) throw SolveError("DNF size limit exceeded");
                    }
                acc = std::move(next);
                if (acc.empty()) return;  // unsatisfiable conjunct
            }
            for (auto& c : acc) out.push_back(std::move(c));
            if (out.size() > cap) throw SolveError("DNF size limit exceeded");
            return;
        }
    }
}

}  // namespace

std::vector<Conj> dnf(const BForm& f, size_t cap) {
    std::vector<Conj> out;
    dnf_rec(f, out, cap);
    return out;
}

}  // namespace nra
