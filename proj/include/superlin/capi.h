#ifndef SUPERLIN_CAPI_H
#define SUPERLIN_CAPI_H

/* C shell around the partitioned linear algebra library. Inputs are JSON
 * texts (the caller owns file access); results come back as an opaque report
 * carrying a rendered text table and, on request, a JSON document.
 *
 * Status codes: 0 success, 2 input rejected (parse error or a violated
 * model invariant), 3 mathematical failure (singular block, non-ergodic
 * chain, ...). The last failure on the calling thread is kept as a
 * "Name: detail" message.
 */

#ifdef __cplusplus
extern "C" {
#endif

#define SLM_OK 0
#define SLM_ERR_INPUT 2
#define SLM_ERR_MATH 3

typedef struct slm_report slm_report;

typedef struct slm_options {
  double tol;    /* <= 0 keeps each operation's documented default */
  int rational;  /* exact rational pipeline where supported */
  int relaxed;   /* drop the closed-model invariants (negative prices allowed) */
  int json;      /* also build the JSON report */
  long max_iter; /* <= 0 keeps the default iteration cap */
  long steps;    /* markov step count */
} slm_options;

void slm_options_init(slm_options* opts);

/* verbs: matrix (add|transpose|flatten|det), spec (charpoly|minpoly|eigen|
 * diag|cayley), metric (gram-schmidt|project|form-report|signature),
 * markov (step|limit), leontief (closed|open) */
int slm_run(const char* verb, const char* action, const char* const* inputs, int input_count,
            const slm_options* opts, slm_report** out);

/* borrowed pointers, valid until slm_report_free */
const char* slm_report_text(const slm_report* rep);
const char* slm_report_json(const slm_report* rep);
void slm_report_free(slm_report* rep);

int slm_last_status(void);
const char* slm_last_error(void);

const char* slm_version(void);

#ifdef __cplusplus
}
#endif

#endif /* SUPERLIN_CAPI_H */
