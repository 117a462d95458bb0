/* lyapsyn: Lyapunov function synthesis and checking via CEGIS over an
 * external SMT solver.
 *
 * C API: opaque handles plus status codes. All returned strings are owned by
 * the object they came from unless documented as caller-freed via
 * lyap_string_free(). Handles are not thread-safe individually; distinct
 * handles may be used from distinct threads freely.
 */

#ifndef LYAPSYN_H
#define LYAPSYN_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    LYAP_OK = 0,
    LYAP_ERR_INVALID_ARG = 1,
    LYAP_ERR_IO = 2,
    LYAP_ERR_PARSE = 3,
    LYAP_ERR_VALIDATION = 4,
    LYAP_ERR_APPROX = 5,
    LYAP_ERR_SOLVER = 6,
    LYAP_ERR_INTERNAL = 7
} lyap_status;

typedef enum {
    LYAP_OUTCOME_PROVED = 0,
    LYAP_OUTCOME_TEMPLATE_INFEASIBLE = 1,
    LYAP_OUTCOME_EXHAUSTED = 2,
    LYAP_OUTCOME_SOLVER_UNKNOWN = 3,
    LYAP_OUTCOME_VALID = 4,
    LYAP_OUTCOME_INVALID = 5,
    LYAP_OUTCOME_CHECK_UNKNOWN = 6
} lyap_outcome;

typedef struct lyap_problem lyap_problem;
typedef struct lyap_result lyap_result;

typedef struct {
    /* <= 0 keeps the problem-file value */
    int max_iter;
    /* < 0 keeps the problem-file value; 0 = unbounded counterexample set */
    int window;
    /* comma-separated rationals, e.g. "0,0" or "-1,1/2"; NULL keeps file value */
    const char* initial_params;
    /* used when the problem supplies no initial parameters */
    unsigned long long seed;
    int has_seed;
    /* solver command line, e.g. "z3 -in"; NULL resolves automatically */
    const char* solver_cmd;
    /* <= 0 keeps the problem-file value */
    long timeout_ms;
    /* directory for trace.json, certificate.json and .smt2 scripts; NULL = none */
    const char* artifact_dir;
    /* re-check every sat model by exact rational evaluation (default on) */
    int validate_models;
} lyap_options;

void lyap_options_init(lyap_options* opts);

/* Problem loading. On error returns a status and, when errmsg is non-NULL,
 * stores a caller-freed message. */
lyap_status lyap_problem_load_file(const char* path, lyap_problem** out, char** errmsg);
lyap_status lyap_problem_load_string(const char* json_text, const char* name, lyap_problem** out,
                                     char** errmsg);
void lyap_problem_free(lyap_problem* p);

/* Canonical JSON dump of the loaded problem (caller-freed). */
char* lyap_problem_to_json(const lyap_problem* p);

/* Runs the CEGIS loop / checks a concrete candidate ("p1=1/4,p2=1/4"). */
lyap_status lyap_synth(const lyap_problem* p, const lyap_options* opts, lyap_result** out, char** errmsg);
lyap_status lyap_check(const lyap_problem* p, const char* candidate, const lyap_options* opts,
                       lyap_result** out, char** errmsg);

/* Human-readable description of the relaxed verifier/learner queries
 * (caller-freed). */
lyap_status lyap_explain(const lyap_problem* p, char** text, char** errmsg);

lyap_outcome lyap_result_outcome(const lyap_result* r);
/* Canonical text of the (found or checked) V; NULL when not applicable. */
const char* lyap_result_lyapunov(const lyap_result* r);
int lyap_result_iterations(const lyap_result* r);
/* Machine-readable report (stable schema). */
const char* lyap_result_report_json(const lyap_result* r);
/* Counterexample JSON for INVALID results, else NULL. */
const char* lyap_result_counterexample_json(const lyap_result* r);
void lyap_result_free(lyap_result* r);

/* Process exit code convention: 0 proved/valid, 1 infeasible/invalid,
 * 2 exhausted, 3 solver unknown. (Usage errors are 4 by CLI convention.) */
int lyap_outcome_exit_code(lyap_outcome o);

void lyap_string_free(char* s);
const char* lyap_version(void);

#ifdef __cplusplus
}
#endif

#endif /* LYAPSYN_H */
