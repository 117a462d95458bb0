#include "cegis.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace lyapsyn {

using Json = nlohmann::ordered_json;

const char* outcome_name(Outcome::Kind k) {
    switch (k) {
        case Outcome::Proved: return "proved";
        case Outcome::TemplateInfeasible: return "template_infeasible";
        case Outcome::Exhausted: return "exhausted";
        case Outcome::SolverUnknown: return "solver_unknown";
    }
    return "?";
}

const char* check_name(CheckResult::Kind k) {
    switch (k) {
        case CheckResult::Valid: return "valid";
        case CheckResult::Invalid: return "invalid";
        case CheckResult::Unknown: return "unknown";
    }
    return "?";
}

namespace {

SmtCmp guard_cmp(CmpOp op) {
    switch (op) {
        case CmpOp::LT: return SmtCmp::LT;
        case CmpOp::LE: return SmtCmp::LE;
        case CmpOp::GT: return SmtCmp::GT;
        case CmpOp::GE: return SmtCmp::GE;
    }
    return SmtCmp::LE;
}

Json point_json(const Point& pt) {
    Json j = Json::object();
    for (const auto& [k, v] : pt) j[k] = rat_str(v);
    return j;
}

}  // namespace

CegisEngine::CegisEngine(ProblemFile problem, EngineOptions opt)
    : problem_(std::move(problem)), opt_(std::move(opt)) {
    solver_cmd_ = resolve_solver_cmd(problem_.cegis.solver_cmd);
    v_sym_ = problem_.tmpl.v_of_params();
    for (const auto& region : problem_.sys.regions) {
        Expr deficit;
        if (problem_.sys.time == TimeKind::Continuous) {
            deficit = lie_derivative(v_sym_, problem_.sys.state, region.dynamics);
        } else {
            std::map<std::string, Expr> step;
            for (size_t i = 0; i < problem_.sys.state.size(); ++i)
                step.emplace(problem_.sys.state[i], region.dynamics[i]);
            deficit = v_sym_.substitute(step) - v_sym_;
        }
        deficits_.push_back(relax(deficit, problem_.approx_orders, problem_.sys.domain,
                                  problem_.approx_flags));
    }
    if (!opt_.artifact_dir.empty()) std::filesystem::create_directories(opt_.artifact_dir);
}

std::vector<std::string> CegisEngine::region_decls(int region) const {
    std::vector<std::string> decls = problem_.sys.state;
    for (const auto& eb : deficits_[region].eps_bounds) decls.push_back("eps" + std::to_string(eb.eps_id));
    return decls;
}

// The per-region verifier query: the negated weak Lyapunov conditions
// V <= 0 || deficit > 0 under domain box, region guard, origin exclusion and
// eps bounds. The disjunction is asserted first so solvers that branch in
// assertion order probe the positivity side before the decrease side.
std::vector<SmtFormula> CegisEngine::region_query(const std::vector<Rational>& params, int region) const {
    std::vector<SmtFormula> asserts;
    {
        std::map<std::string, Expr> bind;
        for (size_t i = 0; i < problem_.tmpl.params.size(); ++i)
            bind.emplace(problem_.tmpl.params[i], Expr::constant(params[i]));
        Expr v_inst = v_sym_.substitute(bind);
        Expr d_inst = deficits_[region].rewritten.substitute(bind);
        std::vector<SmtFormula> main;
        main.push_back(SmtFormula::make_atom(v_inst, SmtCmp::LE));
        main.push_back(SmtFormula::make_atom(d_inst, SmtCmp::GT));
        asserts.push_back(SmtFormula::make_or(std::move(main)));
    }
    for (const auto& var : problem_.sys.state) {
        const Interval* iv = problem_.sys.domain.find(var);
        if (!iv) continue;
        Expr x = Expr::var(var);
        if (iv->lo)
            asserts.push_back(SmtFormula::make_atom(x - Expr::constant(iv->lo->value),
                                                    iv->lo->strict ? SmtCmp::GT : SmtCmp::GE));
        if (iv->hi)
            asserts.push_back(SmtFormula::make_atom(x - Expr::constant(iv->hi->value),
                                                    iv->hi->strict ? SmtCmp::LT : SmtCmp::LE));
    }
    for (const auto& g : problem_.sys.regions[region].guard)
        asserts.push_back(SmtFormula::make_atom(g.lhs, guard_cmp(g.op)));
    OriginExclusion excl = origin_exclusion(problem_.sys.state);
    std::vector<SmtFormula> nz;
    for (const auto& var : excl.vars) nz.push_back(SmtFormula::make_atom(Expr::var(var), SmtCmp::NE));
    asserts.push_back(SmtFormula::make_or(std::move(nz)));
    for (const auto& eb : deficits_[region].eps_bounds) {
        Expr e = Expr::eps(eb.eps_id);
        asserts.push_back(SmtFormula::make_atom(e - eb.bound, SmtCmp::LE));
        asserts.push_back(SmtFormula::make_atom(-e - eb.bound, SmtCmp::LE));
    }
    return asserts;
}

std::string CegisEngine::run_query(const std::vector<SmtFormula>& asserts,
                                   const std::vector<std::string>& decls, const std::string& file_tag,
                                   SolverResult& out) {
    SmtScript script = emit(asserts, decls);
    std::string text = script.text();
    std::string path;
    if (!opt_.artifact_dir.empty()) {
        path = opt_.artifact_dir + "/" + file_tag + ".smt2";
        std::ofstream f(path);
        f << text;
    }
    out = run_solver(text, solver_cmd_, problem_.cegis.timeout_ms);
    if (out.verdict == SolverResult::Sat && opt_.validate_models) {
        for (const auto& a : asserts)
            if (!formula_holds(a, out.model))
                throw SmtError("solver returned a model that fails exact re-evaluation (query " + file_tag +
                               ")");
    }
    return file_tag + ".smt2";
}

CegisEngine::VerifyResult CegisEngine::verify_candidate(const std::vector<Rational>& params,
                                                        const std::string& tag) {
    VerifyResult res;
    for (size_t r = 0; r < problem_.sys.regions.size(); ++r) {
        SolverResult sr;
        std::string file = run_query(region_query(params, (int)r), region_decls((int)r),
                                     tag + "_r" + std::to_string(r), sr);
        res.region_scripts.emplace_back((int)r, file);
        if (sr.verdict == SolverResult::Unsat) {
            res.region_verdicts.emplace_back((int)r, "unsat");
            continue;
        }
        if (sr.verdict == SolverResult::Unknown) {
            res.region_verdicts.emplace_back((int)r, "unknown");
            res.kind = VerifyResult::Unknown;
            res.reason = sr.reason;
            return res;
        }
        res.region_verdicts.emplace_back((int)r, "sat");
        Counterexample ce;
        ce.region = (int)r;
        for (const auto& var : problem_.sys.state) {
            auto it = sr.model.find(var);
            ce.point[var] = it == sr.model.end() ? Rational(0) : it->second;
        }
        for (const auto& eb : deficits_[r].eps_bounds) {
            std::string name = "eps" + std::to_string(eb.eps_id);
            auto it = sr.model.find(name);
            ce.eps[name] = it == sr.model.end() ? Rational(0) : it->second;
        }
        if (opt_.validate_models) {
            bool at_origin = true;
            for (const auto& [k, v] : ce.point)
                if (v != 0) at_origin = false;
            if (at_origin) throw SmtError("solver returned the origin as a counterexample");
            Point full = ce.point;
            for (const auto& [k, v] : ce.eps) full[k] = v;
            for (const auto& eb : deficits_[r].eps_bounds) {
                Rational bound = eb.bound.eval_rational(full);
                Rational val = ce.eps.at("eps" + std::to_string(eb.eps_id));
                if (rat_abs(val) > bound) throw SmtError("counterexample eps value out of its bound");
            }
            if (!counterexample_violates(params, ce))
                throw SmtError("counterexample does not refute the candidate under exact evaluation");
        }
        res.kind = VerifyResult::FoundCounterexample;
        res.ce = std::move(ce);
        return res;
    }
    res.kind = VerifyResult::AllUnsat;
    return res;
}

bool CegisEngine::counterexample_violates(const std::vector<Rational>& params,
                                          const Counterexample& ce) const {
    std::map<std::string, Expr> bind;
    for (size_t i = 0; i < problem_.tmpl.params.size(); ++i)
        bind.emplace(problem_.tmpl.params[i], Expr::constant(params[i]));
    Point full = ce.point;
    for (const auto& [k, v] : ce.eps) full[k] = v;
    Rational v_val = v_sym_.substitute(bind).eval_rational(full);
    Rational d_val = deficits_[ce.region].rewritten.substitute(bind).eval_rational(full);
    return v_val <= 0 || d_val > 0;
}

CegisEngine::LearnResult CegisEngine::learn_candidate(const std::vector<Counterexample>& x_ce,
                                                      const std::string& tag) {
    LearnResult res;
    std::vector<SmtFormula> asserts;
    for (const auto& ce : x_ce) {
        std::map<std::string, Expr> bind;
        for (const auto& [k, v] : ce.point) bind.emplace(k, Expr::constant(v));
        for (const auto& [k, v] : ce.eps) bind.emplace(k, Expr::constant(v));
        Expr v_at = v_sym_.substitute(bind);
        Expr d_at = deficits_[ce.region].rewritten.substitute(bind);
        asserts.push_back(SmtFormula::make_atom(v_at, SmtCmp::GT));
        asserts.push_back(SmtFormula::make_atom(d_at, SmtCmp::LE));
    }
    std::vector<std::string> decls = problem_.tmpl.params;
    SolverResult sr;
    run_query(asserts, decls, tag, sr);
    if (sr.verdict == SolverResult::Unsat) {
        res.kind = LearnResult::Infeasible;
        return res;
    }
    if (sr.verdict == SolverResult::Unknown) {
        res.kind = LearnResult::Unknown;
        res.reason = sr.reason;
        return res;
    }
    res.kind = LearnResult::Model;
    for (const auto& pname : problem_.tmpl.params) {
        auto it = sr.model.find(pname);
        res.model.push_back(it == sr.model.end() ? Rational(0) : it->second);
    }
    if (opt_.validate_models) {
        Point pmodel;
        for (size_t i = 0; i < problem_.tmpl.params.size(); ++i)
            pmodel[problem_.tmpl.params[i]] = res.model[i];
        for (const auto& a : asserts)
            if (!formula_holds(a, pmodel))
                throw SmtError("learner model fails exact re-evaluation of the retained inequalities");
    }
    return res;
}

std::vector<Rational> CegisEngine::initial_candidate() const {
    if (problem_.cegis.initial_params) return *problem_.cegis.initial_params;
    // Paper: "selected randomly"; we draw k/16 with k uniform in [-16, 16].
    std::mt19937_64 rng(problem_.cegis.seed);
    std::vector<Rational> out;
    for (size_t i = 0; i < problem_.tmpl.params.size(); ++i) {
        long k = (long)(rng() % 33) - 16;
        out.emplace_back(Rational(k, 16));
    }
    return out;
}

Outcome CegisEngine::run() {
    Outcome o;
    std::vector<Rational> candidate = initial_candidate();
    std::vector<Counterexample> x_ce;
    size_t total_ce = 0;
    for (int iter = 1;; ++iter) {
        o.iterations = iter;
        IterationRecord rec;
        rec.iteration = iter;
        rec.candidate = candidate;
        VerifyResult vr = verify_candidate(candidate, "verify_i" + std::to_string(iter));
        rec.region_verdicts = vr.region_verdicts;
        if (vr.kind == VerifyResult::Unknown) {
            o.trace.push_back(std::move(rec));
            o.kind = Outcome::SolverUnknown;
            o.unknown_phase = "verifier";
            o.unknown_reason = vr.reason;
            break;
        }
        if (vr.kind == VerifyResult::AllUnsat) {
            // Fresh re-verification backs the certificate.
            VerifyResult recheck = verify_candidate(candidate, "recheck");
            o.trace.push_back(std::move(rec));
            if (recheck.kind != VerifyResult::AllUnsat) {
                o.kind = Outcome::SolverUnknown;
                o.unknown_phase = "re-verification";
                o.unknown_reason = recheck.reason.empty() ? "re-verification did not return unsat"
                                                          : recheck.reason;
                break;
            }
            Certificate cert;
            cert.params = candidate;
            cert.v = problem_.tmpl.instantiate(candidate);
            cert.region_scripts = recheck.region_scripts;
            cert.region_verdicts = recheck.region_verdicts;
            o.kind = Outcome::Proved;
            o.certificate = std::move(cert);
            o.x_ce = x_ce;
            break;
        }
        rec.counterexample = vr.ce;
        x_ce.push_back(vr.ce);
        ++total_ce;
        if (problem_.cegis.window > 0 && (int)x_ce.size() > problem_.cegis.window)
            x_ce.erase(x_ce.begin(), x_ce.end() - problem_.cegis.window);
        if ((long)total_ce > (long)problem_.cegis.max_iter) {
            o.trace.push_back(std::move(rec));
            o.kind = Outcome::Exhausted;
            o.last_candidate = candidate;
            o.x_ce = x_ce;
            break;
        }
        LearnResult lr = learn_candidate(x_ce, "learn_i" + std::to_string(iter));
        if (lr.kind == LearnResult::Infeasible) {
            rec.learner_verdict = "unsat";
            o.trace.push_back(std::move(rec));
            o.kind = Outcome::TemplateInfeasible;
            o.x_ce = x_ce;
            break;
        }
        if (lr.kind == LearnResult::Unknown) {
            rec.learner_verdict = "unknown";
            o.trace.push_back(std::move(rec));
            o.kind = Outcome::SolverUnknown;
            o.unknown_phase = "learner";
            o.unknown_reason = lr.reason;
            break;
        }
        rec.learner_verdict = "sat";
        rec.learner_model = lr.model;
        o.trace.push_back(std::move(rec));
        candidate = lr.model;
    }
    write_trace(o);
    write_certificate(o);
    return o;
}

CheckResult CegisEngine::check(const std::vector<Rational>& params) {
    CheckResult res;
    VerifyResult vr = verify_candidate(params, "check");
    res.region_verdicts = vr.region_verdicts;
    res.region_scripts = vr.region_scripts;
    switch (vr.kind) {
        case VerifyResult::AllUnsat: res.kind = CheckResult::Valid; break;
        case VerifyResult::FoundCounterexample:
            res.kind = CheckResult::Invalid;
            res.counterexample = vr.ce;
            break;
        case VerifyResult::Unknown:
            res.kind = CheckResult::Unknown;
            res.reason = vr.reason;
            break;
    }
    return res;
}

std::string CegisEngine::explain() const {
    std::ostringstream out;
    out << "problem: " << problem_.name << " ("
        << (problem_.sys.time == TimeKind::Continuous ? "continuous" : "discrete") << ")\n";
    out << "state:   [";
    for (size_t i = 0; i < problem_.sys.state.size(); ++i)
        out << (i ? ", " : "") << problem_.sys.state[i];
    out << "]\n";
    out << "V(x; p) = " << v_sym_.str() << "\n\n";
    for (size_t r = 0; r < problem_.sys.regions.size(); ++r) {
        const Region& region = problem_.sys.regions[r];
        out << "region " << r << ":\n";
        if (!region.guard.empty()) {
            out << "  guard:";
            for (const auto& g : region.guard) out << " " << g.lhs.str() << " " << cmp_text(g.op) << " 0;";
            out << "\n";
        }
        out << "  dynamics: (";
        for (size_t i = 0; i < region.dynamics.size(); ++i)
            out << (i ? ", " : "") << region.dynamics[i].str();
        out << ")\n";
        out << "  deficit (relaxed"
            << (problem_.sys.time == TimeKind::Continuous ? ", d/dt V" : ", V(f(x)) - V(x)")
            << "): " << deficits_[r].rewritten.str() << "\n";
        for (const auto& eb : deficits_[r].eps_bounds) {
            const RelaxEntry& entry = deficits_[r].table.at(eb.eps_id);
            ApproxScheme scheme = builtin_scheme(entry.kind, entry.order, problem_.approx_flags);
            out << "  |eps" << eb.eps_id << "| <= " << eb.bound.str() << "   (" << func_name(entry.kind)
                << " of " << entry.argument.str() << ", N=" << entry.order << ", validity "
                << scheme.describe_validity() << ")\n";
        }
    }
    out << "\nverifier query (per region): domain box && guard && (x != 0) && eps bounds && (V <= 0 || "
           "deficit > 0)\n";
    out << "learner query: for each counterexample i: V(x_ce_i) > 0 && deficit(x_ce_i; eps_ce_i) <= 0\n";
    out << "solver: " << solver_cmd_ << "\n";
    return out.str();
}

void CegisEngine::write_trace(const Outcome& o) const {
    if (opt_.artifact_dir.empty()) return;
    Json j;
    j["problem"] = problem_.name;
    j["max_iter"] = problem_.cegis.max_iter;
    j["window"] = problem_.cegis.window;
    j["seed"] = problem_.cegis.seed;
    Json iters = Json::array();
    for (const auto& rec : o.trace) {
        Json ij;
        ij["iteration"] = rec.iteration;
        Json cand = Json::object();
        for (size_t i = 0; i < problem_.tmpl.params.size(); ++i)
            cand[problem_.tmpl.params[i]] = rat_str(rec.candidate[i]);
        ij["candidate"] = cand;
        Json regions = Json::array();
        for (const auto& [r, v] : rec.region_verdicts) regions.push_back({{"region", r}, {"verdict", v}});
        ij["regions"] = regions;
        if (rec.counterexample) {
            Json ce;
            ce["region"] = rec.counterexample->region;
            ce["point"] = point_json(rec.counterexample->point);
            ce["eps"] = point_json(rec.counterexample->eps);
            ij["counterexample"] = ce;
        }
        if (!rec.learner_verdict.empty()) {
            Json lj;
            lj["verdict"] = rec.learner_verdict;
            if (rec.learner_model) {
                Json m = Json::object();
                for (size_t i = 0; i < problem_.tmpl.params.size(); ++i)
                    m[problem_.tmpl.params[i]] = rat_str((*rec.learner_model)[i]);
                lj["model"] = m;
            }
            ij["learner"] = lj;
        }
        iters.push_back(ij);
    }
    j["iterations"] = iters;
    Json oj;
    oj["kind"] = outcome_name(o.kind);
    if (o.kind == Outcome::Proved) {
        Json params = Json::object();
        for (size_t i = 0; i < problem_.tmpl.params.size(); ++i)
            params[problem_.tmpl.params[i]] = rat_str(o.certificate->params[i]);
        oj["params"] = params;
        oj["V"] = o.certificate->v.str();
    }
    if (o.kind == Outcome::Exhausted) oj["m_max"] = problem_.cegis.max_iter;
    if (o.kind == Outcome::SolverUnknown) {
        oj["phase"] = o.unknown_phase;
        oj["reason"] = o.unknown_reason;
    }
    j["outcome"] = oj;
    std::ofstream f(opt_.artifact_dir + "/trace.json");
    f << j.dump(2) << "\n";
}

void CegisEngine::write_certificate(const Outcome& o) const {
    if (opt_.artifact_dir.empty() || o.kind != Outcome::Proved) return;
    Json j;
    j["problem"] = problem_.name;
    Json params = Json::object();
    for (size_t i = 0; i < problem_.tmpl.params.size(); ++i)
        params[problem_.tmpl.params[i]] = rat_str(o.certificate->params[i]);
    j["params"] = params;
    j["V"] = o.certificate->v.str();
    j["conditions"] = "V(x) > 0 and deficit(x) <= 0 for all x in D \\ {0} (per region)";
    Json regions = Json::array();
    for (size_t i = 0; i < o.certificate->region_scripts.size(); ++i) {
        const auto& [r, file] = o.certificate->region_scripts[i];
        regions.push_back({{"region", r}, {"script", file}, {"verdict", o.certificate->region_verdicts[i].second}});
    }
    j["regions"] = regions;
    std::ofstream f(opt_.artifact_dir + "/certificate.json");
    f << j.dump(2) << "\n";
}

}  // namespace lyapsyn
