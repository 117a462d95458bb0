#ifndef LYAPSYN_CEGIS_HPP
#define LYAPSYN_CEGIS_HPP

#include "problem.hpp"
#include "smt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lyapsyn {

struct Counterexample {
    Point point;  // state variable values
    Point eps;    // eps variable values (named eps<k>)
    int region = 0;
};

struct IterationRecord {
    int iteration = 0;
    std::vector<Rational> candidate;
    std::vector<std::pair<int, std::string>> region_verdicts;
    std::optional<Counterexample> counterexample;
    std::string learner_verdict;  // "sat", "unsat", "unknown" or "" if not run
    std::optional<std::vector<Rational>> learner_model;
};

struct Certificate {
    std::vector<Rational> params;
    Expr v;
    std::vector<std::pair<int, std::string>> region_scripts;  // region index -> script file name
    std::vector<std::pair<int, std::string>> region_verdicts;
};

struct Outcome {
    enum Kind { Proved, TemplateInfeasible, Exhausted, SolverUnknown } kind = SolverUnknown;
    int iterations = 0;
    std::optional<Certificate> certificate;               // Proved
    std::vector<Counterexample> x_ce;                     // retained counterexamples
    std::optional<std::vector<Rational>> last_candidate;  // Exhausted
    std::string unknown_phase;                            // SolverUnknown
    std::string unknown_reason;
    std::vector<IterationRecord> trace;
};

struct CheckResult {
    enum Kind { Valid, Invalid, Unknown } kind = Unknown;
    std::optional<Counterexample> counterexample;
    std::string reason;
    std::vector<std::pair<int, std::string>> region_verdicts;
    std::vector<std::pair<int, std::string>> region_scripts;
};

struct EngineOptions {
    std::string artifact_dir;    // empty = write no artifacts
    bool validate_models = true;  // re-check every sat model by exact evaluation
};

const char* outcome_name(Outcome::Kind k);
const char* check_name(CheckResult::Kind k);

class CegisEngine {
public:
    CegisEngine(ProblemFile problem, EngineOptions opt);

    Outcome run();
    CheckResult check(const std::vector<Rational>& params);
    std::string explain() const;

    struct VerifyResult {
        enum Kind { AllUnsat, FoundCounterexample, Unknown } kind = Unknown;
        Counterexample ce;
        std::string reason;
        std::vector<std::pair<int, std::string>> region_verdicts;
        std::vector<std::pair<int, std::string>> region_scripts;
    };
    VerifyResult verify_candidate(const std::vector<Rational>& params, const std::string& tag);

    struct LearnResult {
        enum Kind { Model, Infeasible, Unknown } kind = Unknown;
        std::vector<Rational> model;
        std::string reason;
    };
    LearnResult learn_candidate(const std::vector<Counterexample>& x_ce, const std::string& tag);

    const Relaxation& region_deficit(int region) const { return deficits_[region]; }
    const Expr& v_symbolic() const { return v_sym_; }
    const ProblemFile& problem() const { return problem_; }

    // Exact-rational violation check: the point refutes V > 0 && deficit <= 0.
    bool counterexample_violates(const std::vector<Rational>& params, const Counterexample& ce) const;

private:
    std::vector<SmtFormula> region_query(const std::vector<Rational>& params, int region) const;
    std::vector<std::string> region_decls(int region) const;
    std::string run_query(const std::vector<SmtFormula>& asserts, const std::vector<std::string>& decls,
                          const std::string& file_tag, SolverResult& out);
    std::vector<Rational> initial_candidate() const;
    void write_trace(const Outcome& o) const;
    void write_certificate(const Outcome& o) const;

    ProblemFile problem_;
    EngineOptions opt_;
    std::string solver_cmd_;
    Expr v_sym_;
    std::vector<Relaxation> deficits_;  // per region, symbolic in params
};

}  // namespace lyapsyn

#endif
