// lyapsyn command line: synthesize, check and inspect Lyapunov function
// problems. Exit codes: 0 proved/valid, 1 template-infeasible/invalid,
// 2 exhausted, 3 solver unknown, 4 usage or input error.

#include <CLI11.hpp>

#include "lyapsyn.h"

#include <iostream>
#include <string>

namespace {

struct CommonFlags {
    std::string solver_cmd;
    long timeout_ms = 0;
    std::string out_dir;
    bool json = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--solver-cmd", f.solver_cmd, "solver command reading SMT-LIB2 on stdin");
    cmd->add_option("--timeout-ms", f.timeout_ms, "per-query solver timeout in milliseconds");
    cmd->add_option("--out", f.out_dir, "artifact directory (trace.json, certificate.json, *.smt2)");
    cmd->add_flag("--json", f.json, "print the machine-readable report");
}

int fail_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 4;
}

lyap_problem* load_or_die(const std::string& path, int& rc) {
    lyap_problem* p = nullptr;
    char* err = nullptr;
    lyap_status st = lyap_problem_load_file(path.c_str(), &p, &err);
    if (st != LYAP_OK) {
        std::cerr << "error: " << (err ? err : "failed to load problem") << "\n";
        lyap_string_free(err);
        rc = 4;
        return nullptr;
    }
    return p;
}

void print_human_report(const lyap_result* r) {
    lyap_outcome o = lyap_result_outcome(r);
    const char* v = lyap_result_lyapunov(r);
    switch (o) {
        case LYAP_OUTCOME_PROVED:
            std::cout << "proved: V = " << (v ? v : "?") << "  (" << lyap_result_iterations(r)
                      << " iterations)\n";
            break;
        case LYAP_OUTCOME_VALID:
            std::cout << "valid: V = " << (v ? v : "?") << " satisfies the Lyapunov conditions\n";
            break;
        case LYAP_OUTCOME_TEMPLATE_INFEASIBLE:
            std::cout << "template infeasible: no instance of the template satisfies all recorded "
                         "counterexamples ("
                      << lyap_result_iterations(r) << " iterations)\n";
            break;
        case LYAP_OUTCOME_INVALID: {
            std::cout << "invalid: V = " << (v ? v : "?") << " refuted";
            const char* ce = lyap_result_counterexample_json(r);
            if (ce) std::cout << " by counterexample:\n" << ce;
            std::cout << "\n";
            break;
        }
        case LYAP_OUTCOME_EXHAUSTED:
            std::cout << "exhausted: counterexample budget exceeded after " << lyap_result_iterations(r)
                      << " iterations\n";
            break;
        case LYAP_OUTCOME_SOLVER_UNKNOWN:
        case LYAP_OUTCOME_CHECK_UNKNOWN:
            std::cout << "solver unknown: no verdict\n";
            break;
    }
}

int finish(lyap_problem* p, lyap_result* r, bool json) {
    if (json) {
        const char* rep = lyap_result_report_json(r);
        std::cout << (rep ? rep : "{}") << "\n";
    } else {
        print_human_report(r);
    }
    int rc = lyap_outcome_exit_code(lyap_result_outcome(r));
    lyap_result_free(r);
    lyap_problem_free(p);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lyapsyn: CEGIS synthesis and checking of Lyapunov functions"};
    app.require_subcommand(1);

    std::string synth_file, check_file, explain_file, candidate, initial_params;
    int max_iter = 0, window = -1;
    unsigned long long seed = 0;
    bool seed_set = false;
    CommonFlags synth_flags, check_flags;

    auto* synth = app.add_subcommand("synth", "run the verifier/learner loop on a problem file");
    synth->add_option("file", synth_file, "problem file (JSON)")->required();
    synth->add_option("--max-iter", max_iter, "counterexample budget m_max");
    synth->add_option("--window", window, "keep only the last k counterexamples (0 = all)");
    synth->add_option("--initial-params", initial_params, "initial parameter vector, e.g. \"-1,1/2\"");
    synth->add_option("--seed", seed, "seed for random initial parameters")->each([&](const std::string&) {
        seed_set = true;
    });
    add_common(synth, synth_flags);

    auto* check = app.add_subcommand("check", "verify a concrete candidate");
    check->add_option("file", check_file, "problem file (JSON)")->required();
    check->add_option("--candidate", candidate, "parameter binding, e.g. \"p1=1/4,p2=1/4\"")->required();
    add_common(check, check_flags);

    auto* explain = app.add_subcommand("explain", "print relaxed deficits, eps bounds and query shapes");
    explain->add_option("file", explain_file, "problem file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 4;
    }

    int rc = 0;
    if (synth->parsed()) {
        lyap_problem* p = load_or_die(synth_file, rc);
        if (!p) return rc;
        lyap_options opts;
        lyap_options_init(&opts);
        opts.max_iter = max_iter;
        opts.window = window;
        if (!initial_params.empty()) opts.initial_params = initial_params.c_str();
        if (seed_set) {
            opts.seed = seed;
            opts.has_seed = 1;
        }
        if (!synth_flags.solver_cmd.empty()) opts.solver_cmd = synth_flags.solver_cmd.c_str();
        if (synth_flags.timeout_ms > 0) opts.timeout_ms = synth_flags.timeout_ms;
        if (!synth_flags.out_dir.empty()) opts.artifact_dir = synth_flags.out_dir.c_str();
        lyap_result* r = nullptr;
        char* err = nullptr;
        lyap_status st = lyap_synth(p, &opts, &r, &err);
        if (st != LYAP_OK) {
            std::cerr << "error: " << (err ? err : "synthesis failed") << "\n";
            lyap_string_free(err);
            lyap_problem_free(p);
            return st == LYAP_ERR_SOLVER ? 3 : 4;
        }
        return finish(p, r, synth_flags.json);
    }
    if (check->parsed()) {
        lyap_problem* p = load_or_die(check_file, rc);
        if (!p) return rc;
        lyap_options opts;
        lyap_options_init(&opts);
        if (!check_flags.solver_cmd.empty()) opts.solver_cmd = check_flags.solver_cmd.c_str();
        if (check_flags.timeout_ms > 0) opts.timeout_ms = check_flags.timeout_ms;
        if (!check_flags.out_dir.empty()) opts.artifact_dir = check_flags.out_dir.c_str();
        lyap_result* r = nullptr;
        char* err = nullptr;
        lyap_status st = lyap_check(p, candidate.c_str(), &opts, &r, &err);
        if (st != LYAP_OK) {
            std::cerr << "error: " << (err ? err : "check failed") << "\n";
            lyap_string_free(err);
            lyap_problem_free(p);
            return st == LYAP_ERR_SOLVER ? 3 : 4;
        }
        return finish(p, r, check_flags.json);
    }
    if (explain->parsed()) {
        lyap_problem* p = load_or_die(explain_file, rc);
        if (!p) return rc;
        char* text = nullptr;
        char* err = nullptr;
        lyap_status st = lyap_explain(p, &text, &err);
        if (st != LYAP_OK) {
            std::cerr << "error: " << (err ? err : "explain failed") << "\n";
            lyap_string_free(err);
            lyap_problem_free(p);
            return 4;
        }
        std::cout << text;
        lyap_string_free(text);
        lyap_problem_free(p);
        return 0;
    }
    return fail_usage("no subcommand");
}
