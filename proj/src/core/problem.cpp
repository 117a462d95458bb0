#include "problem.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lyapsyn {

using Json = nlohmann::ordered_json;

const char* cmp_text(CmpOp op) {
    switch (op) {
        case CmpOp::LT: return "<";
        case CmpOp::LE: return "<=";
        case CmpOp::GT: return ">";
        case CmpOp::GE: return ">=";
    }
    return "?";
}

Expr TemplateDef::v_of_params() const {
    Expr acc;
    for (size_t i = 0; i < params.size(); ++i) acc = acc + Expr::param(params[i]) * basis[i];
    return acc;
}

Expr TemplateDef::instantiate(const std::vector<Rational>& values) const {
    if (values.size() != params.size()) throw ProblemError("candidate does not bind every template parameter");
    Expr acc;
    for (size_t i = 0; i < params.size(); ++i) acc = acc + basis[i].scaled(values[i]);
    return acc;
}

OriginExclusion origin_exclusion(const std::vector<std::string>& vars) {
    if (vars.empty()) throw ProblemError("origin exclusion needs a nonempty variable list");
    return OriginExclusion{vars};
}

namespace {

bool valid_name(const std::string& s) {
    if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

bool reserved_name(const std::string& s) {
    if (s == "exp" || s == "sin" || s == "arctan" || s == "abs") return true;
    if (s.size() > 3 && s.compare(0, 3, "eps") == 0 &&
        std::all_of(s.begin() + 3, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return true;
    return false;
}

GuardAtom parse_guard(const std::string& text, const std::set<std::string>& params) {
    static const std::vector<std::pair<std::string, CmpOp>> ops = {
        {"<=", CmpOp::LE}, {">=", CmpOp::GE}, {"<", CmpOp::LT}, {">", CmpOp::GT}};
    for (const auto& [tok, op] : ops) {
        auto pos = text.find(tok);
        if (pos == std::string::npos) continue;
        Expr lhs = Expr::parse(text.substr(0, pos), params);
        Expr rhs = Expr::parse(text.substr(pos + tok.size()), params);
        return GuardAtom{lhs - rhs, op};
    }
    throw ProblemError("guard '" + text + "' has no comparison operator (<, <=, >, >=)");
}

void check_symbols(const Expr& e, const std::vector<std::string>& state, const std::string& where,
                   bool allow_params = false, const std::vector<std::string>& params = {}) {
    std::set<std::pair<std::string, SymKind>> syms;
    e.collect_symbols(syms);
    for (const auto& [name, kind] : syms) {
        if (kind == SymKind::Eps) throw ProblemError(where + ": eps names are reserved ('" + name + "')");
        if (kind == SymKind::Param) {
            if (!allow_params) throw ProblemError(where + ": parameter '" + name + "' is not allowed here");
            continue;
        }
        if (std::find(state.begin(), state.end(), name) == state.end())
            throw ProblemError(where + ": undeclared symbol '" + name + "'");
    }
}

const Json& need(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ProblemError(where + ": missing required key '" + key + "'");
    return j.at(key);
}

Rational rat_field(const Json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return rat_parse(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ProblemError(where + ": " + e.what());
        }
    }
    if (j.is_number_integer()) return Rational((long long)j.get<long long>());
    throw ProblemError(where + ": numbers must be rational strings like \"-3\" or \"1/2\"");
}

}  // namespace

ProblemFile load_problem_json(const std::string& json_text, const std::string& name) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw ProblemError(std::string("problem file is not valid JSON: ") + e.what());
    }
    ProblemFile p;
    p.name = name;

    std::string time = need(j, "time", "problem").get<std::string>();
    if (time == "continuous")
        p.sys.time = TimeKind::Continuous;
    else if (time == "discrete")
        p.sys.time = TimeKind::Discrete;
    else
        throw ProblemError("time must be \"continuous\" or \"discrete\"");

    for (const auto& s : need(j, "state", "problem")) {
        std::string v = s.get<std::string>();
        if (!valid_name(v) || reserved_name(v)) throw ProblemError("bad state variable name '" + v + "'");
        if (std::find(p.sys.state.begin(), p.sys.state.end(), v) != p.sys.state.end())
            throw ProblemError("duplicate state variable '" + v + "'");
        p.sys.state.push_back(v);
    }
    if (p.sys.state.empty()) throw ProblemError("state variable list is empty");

    std::set<std::string> param_set;
    for (const auto& s : need(j, "params", "problem")) {
        std::string v = s.get<std::string>();
        if (!valid_name(v) || reserved_name(v)) throw ProblemError("bad parameter name '" + v + "'");
        if (std::find(p.sys.state.begin(), p.sys.state.end(), v) != p.sys.state.end())
            throw ProblemError("parameter '" + v + "' collides with a state variable");
        if (param_set.count(v)) throw ProblemError("duplicate parameter '" + v + "'");
        param_set.insert(v);
        p.tmpl.params.push_back(v);
    }
    if (p.tmpl.params.empty()) throw ProblemError("parameter list is empty");

    const Json& regions = need(j, "regions", "problem");
    if (!regions.is_array() || regions.empty()) throw ProblemError("regions must be a nonempty array");
    int idx = 0;
    for (const auto& rj : regions) {
        Region r;
        r.index = idx++;
        std::string where = "region " + std::to_string(r.index);
        if (rj.contains("guard"))
            for (const auto& g : rj.at("guard")) {
                GuardAtom atom = parse_guard(g.get<std::string>(), param_set);
                if (!atom.lhs.is_polynomial()) throw ProblemError(where + ": guard atoms must be polynomial");
                check_symbols(atom.lhs, p.sys.state, where + " guard");
                r.guard.push_back(std::move(atom));
            }
        const Json& dyn = need(rj, "dynamics", where);
        for (const auto& d : dyn) {
            Expr e;
            try {
                e = Expr::parse(d.get<std::string>(), param_set);
            } catch (const ParseError& pe) {
                throw ProblemError(where + " dynamics: " + pe.what());
            }
            check_symbols(e, p.sys.state, where + " dynamics");
            r.dynamics.push_back(std::move(e));
        }
        if (r.dynamics.size() != p.sys.state.size())
            throw ProblemError(where + ": dynamics dimension " + std::to_string(r.dynamics.size()) +
                               " does not match state dimension " + std::to_string(p.sys.state.size()));
        p.sys.regions.push_back(std::move(r));
    }
    if (p.sys.regions.size() == 1 && !p.sys.regions[0].guard.empty())
        throw ProblemError("single-region systems must have an empty guard");

    if (j.contains("domain")) {
        for (const auto& [var, dj] : j.at("domain").items()) {
            if (std::find(p.sys.state.begin(), p.sys.state.end(), var) == p.sys.state.end())
                throw ProblemError("domain bounds undeclared variable '" + var + "'");
            Interval iv;
            bool strict = dj.value("strict", true);
            if (dj.contains("min")) iv.lo = Bound{rat_field(dj.at("min"), "domain." + var + ".min"), strict};
            if (dj.contains("max")) iv.hi = Bound{rat_field(dj.at("max"), "domain." + var + ".max"), strict};
            if (iv.lo && iv.hi && iv.lo->value >= iv.hi->value)
                throw ProblemError("domain of '" + var + "' is empty (min >= max)");
            p.sys.domain.intervals.emplace(var, std::move(iv));
        }
    }

    const Json& tj = need(j, "template", "problem");
    if (!tj.is_array() || tj.empty()) throw ProblemError("template must be a nonempty array of basis expressions");
    if (tj.size() != p.tmpl.params.size())
        throw ProblemError("template needs exactly one basis expression per parameter (" +
                           std::to_string(p.tmpl.params.size()) + " params, " + std::to_string(tj.size()) +
                           " basis elements)");
    Point origin;
    for (const auto& v : p.sys.state) origin.emplace(v, Rational(0));
    for (const auto& bj : tj) {
        Expr phi;
        try {
            phi = Expr::parse(bj.get<std::string>(), param_set);
        } catch (const ParseError& pe) {
            throw ProblemError(std::string("template: ") + pe.what());
        }
        check_symbols(phi, p.sys.state, "template");
        for (const auto& t : phi.terms())
            for (const auto& [f, e] : t.factors)
                if (f.is_func) {
                    if (f.func != FuncKind::Abs)
                        throw ProblemError("template basis '" + phi.str() + "' contains a transcendental node");
                    if (p.sys.time != TimeKind::Discrete)
                        throw ProblemError(
                            "template basis '" + phi.str() +
                            "' uses abs, which is only allowed for discrete-time systems");
                    const auto& ats = f.arg->terms();
                    bool single_var = ats.size() == 1 && ats[0].coef == 1 && ats[0].factors.size() == 1 &&
                                      !ats[0].factors[0].first.is_func && ats[0].factors[0].second == 1;
                    if (!single_var)
                        throw ProblemError("template abs arguments must be single state variables, got '" +
                                           f.arg->str() + "'");
                }
        Rational at0 = phi.eval_rational(origin);
        if (at0 != 0)
            throw ProblemError("template basis '" + phi.str() + "' violates V(0)=0 (value at origin: " +
                               rat_str(at0) + ")");
        p.tmpl.basis.push_back(std::move(phi));
    }

    if (j.contains("approx")) {
        for (const auto& [k, vj] : j.at("approx").items()) {
            if (k == "tight_sin_bound") {
                p.approx_flags.tight_sin_bound = vj.get<bool>();
            } else if (k == "paper_arctan_bound") {
                p.approx_flags.paper_arctan_bound = vj.get<bool>();
            } else {
                FuncKind fk;
                if (k == "exp")
                    fk = FuncKind::Exp;
                else if (k == "sin")
                    fk = FuncKind::Sin;
                else if (k == "arctan")
                    fk = FuncKind::Arctan;
                else
                    throw ProblemError("approx: unknown function kind '" + k + "'");
                int n = vj.get<int>();
                if (n < 0) throw ProblemError("approx order for " + k + " must be nonnegative");
                p.approx_orders[fk] = n;
            }
        }
    }

    if (j.contains("cegis")) {
        const Json& cj = j.at("cegis");
        p.cegis.max_iter = cj.value("max_iter", 100);
        if (p.cegis.max_iter < 1) throw ProblemError("cegis.max_iter must be >= 1");
        p.cegis.window = cj.value("window", 0);
        if (p.cegis.window < 0) throw ProblemError("cegis.window must be >= 0");
        if (cj.contains("initial_params")) {
            std::vector<Rational> init;
            for (const auto& v : cj.at("initial_params")) init.push_back(rat_field(v, "cegis.initial_params"));
            if (init.size() != p.tmpl.params.size())
                throw ProblemError("cegis.initial_params must bind every template parameter");
            p.cegis.initial_params = std::move(init);
        }
        p.cegis.seed = cj.value("seed", 0ull);
        p.cegis.solver_cmd = cj.value("solver_cmd", std::string());
        p.cegis.timeout_ms = cj.value("timeout_ms", 10000L);
        if (p.cegis.timeout_ms <= 0) throw ProblemError("cegis.timeout_ms must be positive");
    }
    return p;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProblemError("cannot open problem file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string stem = path;
    if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return load_problem_json(ss.str(), stem);
}

std::string dump_problem(const ProblemFile& p) {
    Json j;
    j["time"] = p.sys.time == TimeKind::Continuous ? "continuous" : "discrete";
    j["state"] = p.sys.state;
    j["params"] = p.tmpl.params;
    Json regions = Json::array();
    for (const auto& r : p.sys.regions) {
        Json rj;
        Json guard = Json::array();
        for (const auto& g : r.guard) guard.push_back(g.lhs.str() + " " + cmp_text(g.op) + " 0");
        rj["guard"] = guard;
        Json dyn = Json::array();
        for (const auto& d : r.dynamics) dyn.push_back(d.str());
        rj["dynamics"] = dyn;
        regions.push_back(rj);
    }
    j["regions"] = regions;
    Json dom = Json::object();
    for (const auto& [var, iv] : p.sys.domain.intervals) {
        Json dj;
        if (iv.lo) dj["min"] = rat_str(iv.lo->value);
        if (iv.hi) dj["max"] = rat_str(iv.hi->value);
        dj["strict"] = iv.lo ? iv.lo->strict : (iv.hi ? iv.hi->strict : true);
        dom[var] = dj;
    }
    j["domain"] = dom;
    Json tmpl = Json::array();
    for (const auto& b : p.tmpl.basis) tmpl.push_back(b.str());
    j["template"] = tmpl;
    Json approx = Json::object();
    for (const auto& [k, n] : p.approx_orders) approx[func_name(k)] = n;
    if (p.approx_flags.tight_sin_bound) approx["tight_sin_bound"] = true;
    if (p.approx_flags.paper_arctan_bound) approx["paper_arctan_bound"] = true;
    j["approx"] = approx;
    Json cegis;
    cegis["max_iter"] = p.cegis.max_iter;
    cegis["window"] = p.cegis.window;
    if (p.cegis.initial_params) {
        Json init = Json::array();
        for (const auto& v : *p.cegis.initial_params) init.push_back(rat_str(v));
        cegis["initial_params"] = init;
    }
    cegis["seed"] = p.cegis.seed;
    if (!p.cegis.solver_cmd.empty()) cegis["solver_cmd"] = p.cegis.solver_cmd;
    cegis["timeout_ms"] = p.cegis.timeout_ms;
    j["cegis"] = cegis;
    return j.dump(2) + "\n";
}

std::vector<Rational> parse_candidate(const TemplateDef& tmpl, const std::string& text) {
    std::map<std::string, Rational> bound;
    std::string cur;
    std::stringstream ss(text);
    while (std::getline(ss, cur, ',')) {
        auto eq = cur.find('=');
        if (eq == std::string::npos) throw ProblemError("candidate entry '" + cur + "' is not name=value");
        std::string name = cur.substr(0, eq), val = cur.substr(eq + 1);
        name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
        if (std::find(tmpl.params.begin(), tmpl.params.end(), name) == tmpl.params.end())
            throw ProblemError("candidate binds unknown parameter '" + name + "'");
        if (bound.count(name)) throw ProblemError("candidate binds parameter '" + name + "' twice");
        try {
            bound.emplace(name, rat_parse(val));
        } catch (const std::invalid_argument& e) {
            throw ProblemError(std::string("candidate value: ") + e.what());
        }
    }
    std::vector<Rational> out;
    for (const auto& pn : tmpl.params) {
        auto it = bound.find(pn);
        if (it == bound.end()) throw ProblemError("candidate does not bind parameter '" + pn + "'");
        out.push_back(it->second);
    }
    return out;
}

}  // namespace lyapsyn
