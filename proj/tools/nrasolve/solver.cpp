#include "nrasolve/solver.hpp"

#include "nrasolve/budget.hpp"

#include <sstream>

namespace nra {

namespace {

constexpr size_t kDnfCap = 20000;

bool eval_bform(const BForm& f, const std::map<VarId, Rational>& pt) {
    switch (f.kind) {
        case BForm::True: return true;
        case BForm::False: return false;
        case BForm::Atom: {
            Rational v = f.atom.p.eval(pt);
            return rel_holds(f.atom.rel, v > 0 ? 1 : (v < 0 ? -1 : 0));
        }
        case BForm::Not: return !eval_bform(f.kids[0], pt);
        case BForm::And:
            for (const auto& k : f.kids)
                if (!eval_bform(k, pt)) return false;
            return true;
        case BForm::Or:
            for (const auto& k : f.kids)
                if (eval_bform(k, pt)) return true;
            return false;
    }
    return false;
}

std::string smt_value(const Rational& q) {
    bool neg = q < 0;
    Rational a = neg ? Rational(-q) : q;
    std::string body;
    if (lyapsyn::rat_den(a) == 1)
        body = lyapsyn::rat_num(a).str();
    else
        body = "(/ " + lyapsyn::rat_num(a).str() + " " + lyapsyn::rat_den(a).str() + ")";
    return neg ? "(- " + body + ")" : body;
}

}  // namespace

std::string SolverSession::check() {
    model.clear();
    if (poisoned) {
        verdict = "unknown";
        return verdict;
    }
    try {
        budget_reset(4000000);
        BForm all = BForm::make_and(asserts);
        std::vector<Conj> branches = dnf(nnf(all), kDnfCap);
        bool any_unknown = false, any_nomodel = false;
        for (const auto& b : branches) {
            DecideOutcome res = decide_conj(b);
            if (res.kind == DecideOutcome::Sat) {
                std::map<VarId, Rational> full = res.model;
                for (VarId v : declared)
                    if (!full.count(v)) full[v] = Rational(0);
                bool valid = true;
                for (const auto& a : asserts)
                    if (!eval_bform(a, full)) valid = false;
                if (!valid) {
                    any_unknown = true;  // internal inconsistency; stay sound
                    continue;
                }
                model = std::move(full);
                verdict = "sat";
                return verdict;
            }
            if (res.kind == DecideOutcome::Unknown) any_unknown = true;
            if (res.kind == DecideOutcome::SatNoModel) any_nomodel = true;
        }
        verdict = (any_unknown || any_nomodel) ? "unknown" : "unsat";
    } catch (const std::exception&) {
        verdict = "unknown";
    }
    return verdict;
}

std::string SolverSession::model_text() const {
    std::ostringstream out;
    out << "(model\n";
    for (VarId v : declared) {
        auto it = model.find(v);
        Rational val = it == model.end() ? Rational(0) : it->second;
        out << "  (define-fun " << syms.names[v] << " () Real " << smt_value(val) << ")\n";
    }
    out << ")";
    return out.str();
}

int run_session(std::istream& in, std::ostream& out, std::ostream& err) {
    std::stringstream buf;
    buf << in.rdbuf();
    std::vector<lyapsyn::SNode> cmds;
    try {
        cmds = lyapsyn::sexpr_parse_all(buf.str());
    } catch (const std::exception& e) {
        out << "(error \"" << e.what() << "\")\n";
        return 1;
    }
    SolverSession s;
    for (const auto& cmd : cmds) {
        if (cmd.is_atom || cmd.kids.empty() || !cmd.kids[0].is_atom) {
            out << "(error \"malformed command\")\n";
            continue;
        }
        const std::string& head = cmd.kids[0].atom;
        try {
            if (head == "set-logic" || head == "set-info" || head == "set-option") {
                continue;
            } else if (head == "declare-const" && cmd.kids.size() == 3) {
                VarId v = s.syms.intern(cmd.kids[1].atom);
                s.declared.push_back(v);
            } else if (head == "declare-fun" && cmd.kids.size() == 4 && !cmd.kids[2].is_atom &&
                       cmd.kids[2].kids.empty()) {
                VarId v = s.syms.intern(cmd.kids[1].atom);
                s.declared.push_back(v);
            } else if (head == "assert" && cmd.kids.size() == 2) {
                s.asserts.push_back(parse_formula(cmd.kids[1], s.syms));
            } else if (head == "check-sat") {
                out << s.check() << "\n";
                out.flush();
            } else if (head == "get-model") {
                if (s.verdict == "sat")
                    out << s.model_text() << "\n";
                else
                    out << "(error \"model is not available\")\n";
                out.flush();
            } else if (head == "exit") {
                break;
            } else if (head == "reset") {
                s = SolverSession{};
            } else {
                out << "(error \"unsupported command: " << head << "\")\n";
            }
        } catch (const std::exception& e) {
            err << "nrasolve: " << e.what() << "\n";
            s.poisoned = true;
            out << "(error \"" << e.what() << "\")\n";
        }
    }
    out.flush();
    return 0;
}

}  // namespace nra
