#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lyapsyn.h"

#include "helpers.hpp"

#include <string>

namespace {

struct Loaded {
    lyap_problem* p = nullptr;
    ~Loaded() { lyap_problem_free(p); }
};

lyap_problem* must_load(const char* path) {
    lyap_problem* p = nullptr;
    char* err = nullptr;
    REQUIRE(lyap_problem_load_file(path, &p, &err) == LYAP_OK);
    return p;
}

}  // namespace

TEST_CASE("load, dump and free") {
    Loaded l;
    l.p = must_load("problems/va.json");
    char* json = lyap_problem_to_json(l.p);
    REQUIRE(json != nullptr);
    std::string text(json);
    lyap_string_free(json);
    CHECK(text.find("\"x1^2\"") != std::string::npos);
    lyap_problem* q = nullptr;
    char* err = nullptr;
    CHECK(lyap_problem_load_string(text.c_str(), "va_roundtrip", &q, &err) == LYAP_OK);
    lyap_problem_free(q);
}

TEST_CASE("error paths return status codes and messages") {
    lyap_problem* p = nullptr;
    char* err = nullptr;
    CHECK(lyap_problem_load_file("problems/no_such_file.json", &p, &err) == LYAP_ERR_IO);
    lyap_string_free(err);
    err = nullptr;
    CHECK(lyap_problem_load_string("{\"time\": \"continuous\"}", "bad", &p, &err) ==
          LYAP_ERR_VALIDATION);
    REQUIRE(err != nullptr);
    CHECK(std::string(err).find("missing") != std::string::npos);
    lyap_string_free(err);
    CHECK(lyap_problem_load_file(nullptr, &p, nullptr) == LYAP_ERR_INVALID_ARG);
}

TEST_CASE("synth through the C API") {
    Loaded l;
    l.p = must_load("problems/va.json");
    lyap_options opts;
    lyap_options_init(&opts);
    std::string solver = nrasolve_cmd();
    opts.solver_cmd = solver.c_str();
    lyap_result* r = nullptr;
    char* err = nullptr;
    REQUIRE(lyap_synth(l.p, &opts, &r, &err) == LYAP_OK);
    CHECK(lyap_result_outcome(r) == LYAP_OUTCOME_PROVED);
    CHECK(lyap_result_iterations(r) <= 3);
    REQUIRE(lyap_result_lyapunov(r) != nullptr);
    std::string report = lyap_result_report_json(r);
    CHECK(report.find("\"outcome\": \"proved\"") != std::string::npos);
    CHECK(lyap_outcome_exit_code(lyap_result_outcome(r)) == 0);
    lyap_result_free(r);
}

TEST_CASE("check through the C API, valid and invalid") {
    Loaded l;
    l.p = must_load("problems/vd.json");
    lyap_options opts;
    lyap_options_init(&opts);
    std::string solver = nrasolve_cmd();
    opts.solver_cmd = solver.c_str();
    lyap_result* r = nullptr;
    REQUIRE(lyap_check(l.p, "p1=1/2,p2=1/4", &opts, &r, nullptr) == LYAP_OK);
    CHECK(lyap_result_outcome(r) == LYAP_OUTCOME_VALID);
    CHECK(lyap_result_counterexample_json(r) == nullptr);
    lyap_result_free(r);

    Loaded lr;
    lr.p = must_load("problems/vd_reversed.json");
    lyap_result* r2 = nullptr;
    REQUIRE(lyap_check(lr.p, "p1=1/2,p2=1/4", &opts, &r2, nullptr) == LYAP_OK);
    CHECK(lyap_result_outcome(r2) == LYAP_OUTCOME_INVALID);
    REQUIRE(lyap_result_counterexample_json(r2) != nullptr);
    CHECK(std::string(lyap_result_counterexample_json(r2)).find("point") != std::string::npos);
    CHECK(lyap_outcome_exit_code(LYAP_OUTCOME_INVALID) == 1);
    lyap_result_free(r2);

    // unbound parameter is a usage error
    lyap_result* r3 = nullptr;
    char* err = nullptr;
    CHECK(lyap_check(l.p, "p1=0", &opts, &r3, &err) == LYAP_ERR_VALIDATION);
    lyap_string_free(err);
}

TEST_CASE("explain through the C API") {
    Loaded l;
    l.p = must_load("problems/ve.json");
    char* text = nullptr;
    REQUIRE(lyap_explain(l.p, &text, nullptr) == LYAP_OK);
    std::string s(text);
    lyap_string_free(text);
    CHECK(s.find("eps0") != std::string::npos);
    CHECK(s.find("arctan") != std::string::npos);
    CHECK(s.find("V(f(x)) - V(x)") != std::string::npos);
}

TEST_CASE("exit code convention is total over outcomes") {
    CHECK(lyap_outcome_exit_code(LYAP_OUTCOME_PROVED) == 0);
    CHECK(lyap_outcome_exit_code(LYAP_OUTCOME_VALID) == 0);
    CHECK(lyap_outcome_exit_code(LYAP_OUTCOME_TEMPLATE_INFEASIBLE) == 1);
    CHECK(lyap_outcome_exit_code(LYAP_OUTCOME_INVALID) == 1);
    CHECK(lyap_outcome_exit_code(LYAP_OUTCOME_EXHAUSTED) == 2);
    CHECK(lyap_outcome_exit_code(LYAP_OUTCOME_SOLVER_UNKNOWN) == 3);
    CHECK(lyap_outcome_exit_code(LYAP_OUTCOME_CHECK_UNKNOWN) == 3);
    CHECK(std::string(lyap_version()) == "1.0.0");
}
