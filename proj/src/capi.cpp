#include "lyapsyn.h"

#include "core/cegis.hpp"

#include <json.hpp>

#include <chrono>
#include <cstring>

using namespace lyapsyn;
using Json = nlohmann::ordered_json;

struct lyap_problem {
    ProblemFile file;
    std::string json_cache;
};

struct lyap_result {
    lyap_outcome outcome = LYAP_OUTCOME_CHECK_UNKNOWN;
    std::string v_text;
    int iterations = 0;
    std::string report_json;
    std::string counterexample_json;
    bool has_v = false;
    bool has_ce = false;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = (char*)malloc(s.size() + 1);
    memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_err(char** errmsg, const std::string& msg) {
    if (errmsg) *errmsg = dup_string(msg);
}

lyap_status classify_error(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return LYAP_ERR_PARSE;
    if (dynamic_cast<const ProblemError*>(&e)) return LYAP_ERR_VALIDATION;
    if (dynamic_cast<const ApproxError*>(&e)) return LYAP_ERR_APPROX;
    if (dynamic_cast<const SmtError*>(&e)) return LYAP_ERR_SOLVER;
    return LYAP_ERR_INTERNAL;
}

ProblemFile with_overrides(const ProblemFile& base, const lyap_options* opts) {
    ProblemFile p = base;
    if (!opts) return p;
    if (opts->max_iter > 0) p.cegis.max_iter = opts->max_iter;
    if (opts->window >= 0) p.cegis.window = opts->window;
    if (opts->initial_params) {
        std::vector<Rational> init;
        std::stringstream ss(opts->initial_params);
        std::string tok;
        while (std::getline(ss, tok, ',')) init.push_back(rat_parse(tok));
        if (init.size() != p.tmpl.params.size())
            throw ProblemError("initial params must bind every template parameter");
        p.cegis.initial_params = std::move(init);
    }
    if (opts->has_seed) p.cegis.seed = opts->seed;
    if (opts->solver_cmd) p.cegis.solver_cmd = opts->solver_cmd;
    if (opts->timeout_ms > 0) p.cegis.timeout_ms = opts->timeout_ms;
    return p;
}

EngineOptions engine_options(const lyap_options* opts) {
    EngineOptions eo;
    if (opts) {
        if (opts->artifact_dir) eo.artifact_dir = opts->artifact_dir;
        eo.validate_models = opts->validate_models != 0;
    }
    return eo;
}

Json ce_json(const Counterexample& ce) {
    Json j;
    j["region"] = ce.region;
    Json pt = Json::object();
    for (const auto& [k, v] : ce.point) pt[k] = rat_str(v);
    j["point"] = pt;
    Json eps = Json::object();
    for (const auto& [k, v] : ce.eps) eps[k] = rat_str(v);
    j["eps"] = eps;
    return j;
}

const char* outcome_text(lyap_outcome o) {
    switch (o) {
        case LYAP_OUTCOME_PROVED: return "proved";
        case LYAP_OUTCOME_TEMPLATE_INFEASIBLE: return "template_infeasible";
        case LYAP_OUTCOME_EXHAUSTED: return "exhausted";
        case LYAP_OUTCOME_SOLVER_UNKNOWN: return "solver_unknown";
        case LYAP_OUTCOME_VALID: return "valid";
        case LYAP_OUTCOME_INVALID: return "invalid";
        case LYAP_OUTCOME_CHECK_UNKNOWN: return "unknown";
    }
    return "?";
}

}  // namespace

extern "C" {

void lyap_options_init(lyap_options* opts) {
    if (!opts) return;
    opts->max_iter = 0;
    opts->window = -1;
    opts->initial_params = nullptr;
    opts->seed = 0;
    opts->has_seed = 0;
    opts->solver_cmd = nullptr;
    opts->timeout_ms = 0;
    opts->artifact_dir = nullptr;
    opts->validate_models = 1;
}

lyap_status lyap_problem_load_file(const char* path, lyap_problem** out, char** errmsg) {
    if (!path || !out) return LYAP_ERR_INVALID_ARG;
    try {
        auto* p = new lyap_problem{load_problem(path), {}};
        *out = p;
        return LYAP_OK;
    } catch (const std::exception& e) {
        set_err(errmsg, e.what());
        if (std::string(e.what()).find("cannot open") != std::string::npos) return LYAP_ERR_IO;
        return classify_error(e);
    }
}

lyap_status lyap_problem_load_string(const char* json_text, const char* name, lyap_problem** out,
                                     char** errmsg) {
    if (!json_text || !out) return LYAP_ERR_INVALID_ARG;
    try {
        auto* p = new lyap_problem{load_problem_json(json_text, name ? name : "problem"), {}};
        *out = p;
        return LYAP_OK;
    } catch (const std::exception& e) {
        set_err(errmsg, e.what());
        return classify_error(e);
    }
}

void lyap_problem_free(lyap_problem* p) { delete p; }

char* lyap_problem_to_json(const lyap_problem* p) {
    if (!p) return nullptr;
    return dup_string(dump_problem(p->file));
}

static lyap_result* make_synth_result(const ProblemFile& pf, const Outcome& o, long wall_ms,
                                      const std::string& artifact_dir) {
    auto* r = new lyap_result;
    switch (o.kind) {
        case Outcome::Proved: r->outcome = LYAP_OUTCOME_PROVED; break;
        case Outcome::TemplateInfeasible: r->outcome = LYAP_OUTCOME_TEMPLATE_INFEASIBLE; break;
        case Outcome::Exhausted: r->outcome = LYAP_OUTCOME_EXHAUSTED; break;
        case Outcome::SolverUnknown: r->outcome = LYAP_OUTCOME_SOLVER_UNKNOWN; break;
    }
    r->iterations = o.iterations;
    Json j;
    j["command"] = "synth";
    j["problem"] = pf.name;
    j["outcome"] = outcome_text(r->outcome);
    j["iterations"] = o.iterations;
    if (o.kind == Outcome::Proved) {
        r->has_v = true;
        r->v_text = o.certificate->v.str();
        j["V"] = r->v_text;
        Json params = Json::object();
        for (size_t i = 0; i < pf.tmpl.params.size(); ++i)
            params[pf.tmpl.params[i]] = rat_str(o.certificate->params[i]);
        j["params"] = params;
        Json regions = Json::array();
        for (size_t i = 0; i < o.certificate->region_verdicts.size(); ++i)
            regions.push_back({{"region", o.certificate->region_verdicts[i].first},
                               {"verdict", o.certificate->region_verdicts[i].second}});
        j["regions"] = regions;
    }
    if (o.kind == Outcome::Exhausted) {
        j["m_max"] = pf.cegis.max_iter;
        if (o.last_candidate) {
            Json params = Json::object();
            for (size_t i = 0; i < pf.tmpl.params.size(); ++i)
                params[pf.tmpl.params[i]] = rat_str((*o.last_candidate)[i]);
            j["last_candidate"] = params;
        }
    }
    if (o.kind == Outcome::SolverUnknown) {
        j["phase"] = o.unknown_phase;
        j["reason"] = o.unknown_reason;
    }
    j["wall_ms"] = wall_ms;
    if (!artifact_dir.empty()) {
        j["artifact_dir"] = artifact_dir;
        j["trace"] = artifact_dir + "/trace.json";
        if (o.kind == Outcome::Proved) j["certificate"] = artifact_dir + "/certificate.json";
    }
    r->report_json = j.dump(2);
    return r;
}

lyap_status lyap_synth(const lyap_problem* p, const lyap_options* opts, lyap_result** out,
                       char** errmsg) {
    if (!p || !out) return LYAP_ERR_INVALID_ARG;
    try {
        ProblemFile pf = with_overrides(p->file, opts);
        EngineOptions eo = engine_options(opts);
        auto t0 = std::chrono::steady_clock::now();
        CegisEngine engine(pf, eo);
        Outcome o = engine.run();
        long wall_ms =
            (long)std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                .count();
        *out = make_synth_result(pf, o, wall_ms, eo.artifact_dir);
        return LYAP_OK;
    } catch (const std::exception& e) {
        set_err(errmsg, e.what());
        return classify_error(e);
    }
}

lyap_status lyap_check(const lyap_problem* p, const char* candidate, const lyap_options* opts,
                       lyap_result** out, char** errmsg) {
    if (!p || !candidate || !out) return LYAP_ERR_INVALID_ARG;
    try {
        ProblemFile pf = with_overrides(p->file, opts);
        EngineOptions eo = engine_options(opts);
        std::vector<Rational> values = parse_candidate(pf.tmpl, candidate);
        auto t0 = std::chrono::steady_clock::now();
        CegisEngine engine(pf, eo);
        CheckResult c = engine.check(values);
        long wall_ms =
            (long)std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                .count();
        auto* r = new lyap_result;
        switch (c.kind) {
            case CheckResult::Valid: r->outcome = LYAP_OUTCOME_VALID; break;
            case CheckResult::Invalid: r->outcome = LYAP_OUTCOME_INVALID; break;
            case CheckResult::Unknown: r->outcome = LYAP_OUTCOME_CHECK_UNKNOWN; break;
        }
        r->iterations = 1;
        r->has_v = true;
        r->v_text = pf.tmpl.instantiate(values).str();
        Json j;
        j["command"] = "check";
        j["problem"] = pf.name;
        j["outcome"] = outcome_text(r->outcome);
        j["V"] = r->v_text;
        Json params = Json::object();
        for (size_t i = 0; i < pf.tmpl.params.size(); ++i)
            params[pf.tmpl.params[i]] = rat_str(values[i]);
        j["params"] = params;
        Json regions = Json::array();
        for (const auto& [reg, verdict] : c.region_verdicts)
            regions.push_back({{"region", reg}, {"verdict", verdict}});
        j["regions"] = regions;
        if (c.counterexample) {
            r->has_ce = true;
            Json cj = ce_json(*c.counterexample);
            r->counterexample_json = cj.dump(2);
            j["counterexample"] = cj;
        }
        if (c.kind == CheckResult::Unknown) j["reason"] = c.reason;
        j["wall_ms"] = wall_ms;
        if (!eo.artifact_dir.empty()) j["artifact_dir"] = eo.artifact_dir;
        r->report_json = j.dump(2);
        *out = r;
        return LYAP_OK;
    } catch (const std::exception& e) {
        set_err(errmsg, e.what());
        return classify_error(e);
    }
}

lyap_status lyap_explain(const lyap_problem* p, char** text, char** errmsg) {
    if (!p || !text) return LYAP_ERR_INVALID_ARG;
    try {
        EngineOptions eo;
        eo.artifact_dir.clear();
        CegisEngine engine(p->file, eo);
        *text = dup_string(engine.explain());
        return LYAP_OK;
    } catch (const std::exception& e) {
        set_err(errmsg, e.what());
        return classify_error(e);
    }
}

lyap_outcome lyap_result_outcome(const lyap_result* r) {
    return r ? r->outcome : LYAP_OUTCOME_CHECK_UNKNOWN;
}

const char* lyap_result_lyapunov(const lyap_result* r) {
    return (r && r->has_v) ? r->v_text.c_str() : nullptr;
}

int lyap_result_iterations(const lyap_result* r) { return r ? r->iterations : 0; }

const char* lyap_result_report_json(const lyap_result* r) {
    return r ? r->report_json.c_str() : nullptr;
}

const char* lyap_result_counterexample_json(const lyap_result* r) {
    return (r && r->has_ce) ? r->counterexample_json.c_str() : nullptr;
}

void lyap_result_free(lyap_result* r) { delete r; }

int lyap_outcome_exit_code(lyap_outcome o) {
    switch (o) {
        case LYAP_OUTCOME_PROVED:
        case LYAP_OUTCOME_VALID: return 0;
        case LYAP_OUTCOME_TEMPLATE_INFEASIBLE:
        case LYAP_OUTCOME_INVALID: return 1;
        case LYAP_OUTCOME_EXHAUSTED: return 2;
        case LYAP_OUTCOME_SOLVER_UNKNOWN:
        case LYAP_OUTCOME_CHECK_UNKNOWN: return 3;
    }
    return 4;
}

void lyap_string_free(char* s) { free(s); }

const char* lyap_version(void) { return "1.0.0"; }

}  // extern "C"
