#ifndef CRPOINT_H
#define CRPOINT_H

/* crpoint: quadratic complex points of real 4-manifolds in complex
 * 3-manifolds. Shared-library C API over the classification, normal-form,
 * certified-homotopy, isotopy-surface and Levi-scan engines.
 *
 * Conventions:
 *   - every function returns a crp_status; results come back through out
 *     parameters;
 *   - strings returned through crp_* calls are heap-allocated JSON (or CSV)
 *     and must be released with crp_string_free;
 *   - handles are opaque and must be released with their _free function;
 *   - on any failure crp_last_error() returns a thread-local description and
 *     crp_last_error_reason() a short machine-readable id;
 *   - status codes match the CLI exit codes.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crp_status {
  CRP_OK = 0,
  CRP_VERIFY_FAILED = 1, /* certificate / inequality / scan did not pass */
  CRP_INVALID_INPUT = 2, /* malformed or out-of-contract input */
  CRP_DEGENERATE = 3,    /* degenerate or non-generic configuration */
  CRP_INTERNAL = 4
} crp_status;

typedef struct crp_pair crp_pair; /* a quadratic model pair (A, B) */
typedef struct crp_path crp_path; /* a certified homotopy path */

const char* crp_version(void);
const char* crp_last_error(void);
const char* crp_last_error_reason(void);
void crp_string_free(char* s);

/* ---- pairs ---- */

/* pair JSON: {"A": [[[re,im],[re,im]],[...]], "B": ...}; B must be symmetric
 * within 1e-12 (1 + ||B||). */
crp_status crp_pair_from_json(const char* json, crp_pair** out);
crp_status crp_pair_random(uint64_t seed, double scale, crp_pair** out);
crp_status crp_pair_to_json(const crp_pair* p, char** out_json);
void crp_pair_free(crp_pair* p);

/* classification report: {"sign","det4","det4_normalized","cosquare_class",
 * "genericity_defect"}. */
crp_status crp_classify(const crp_pair* p, double tol, char** report_json);

/* normal form with witness: {"class","canonical_A","B_reduced","witness",...};
 * CRP_DEGENERATE with reason ids like "non_generic:type_ii" on the
 * non-generic strata. */
crp_status crp_normal_form(const crp_pair* p, double tol, char** nf_json);

/* ---- certified homotopies ---- */

/* options JSON (all keys optional): {"tol","samples","margin","seed",
 * "max_retries","eta","perturb_eta","threads"}; unknown keys are rejected. */
crp_status crp_connect_to_model(const crp_pair* p, const char* options_json, crp_path** out);

crp_status crp_path_from_json(const char* json, crp_path** out);
crp_status crp_path_to_json(const crp_path* path, char** out_json);
void crp_path_free(crp_path* path);

crp_status crp_path_eval(const crp_path* path, double t, crp_pair** out);

/* re-verify the nondegeneracy certificate at a chosen sampling density */
crp_status crp_path_verify(const crp_path* path, int samples, double margin,
                           char** certificate_json);

/* ---- Theorem-1 surface verification ----
 * options JSON keys (optional): {"epsilon","n","tol","s_count","sphere_u",
 * "sphere_t1","sphere_t2","fd_checks","seed","threads","reverse"}.
 * n = 0 means: use the computed n_required. Returns CRP_VERIFY_FAILED when
 * the inequality check fails (report still written). */
crp_status crp_surface_check(const crp_path* path, const char* options_json,
                             char** report_json);

/* ---- Levi scans ----
 * options JSON keys (optional): {"model":"elliptic"|"hyperbolic","radius",
 * "gridsize","origin_tol","eig_tol","seed","threads","spectra_csv"}.
 * Returns CRP_VERIFY_FAILED when violations were found. */
crp_status crp_levi_scan(const char* options_json, char** report_json);

/* growth-bound estimates for one model */
crp_status crp_growth_bounds(const char* options_json, char** report_json);

/* ---- acceptance suite ----
 * options JSON keys (optional): {"seed","threads","reduction"}. Returns
 * CRP_VERIFY_FAILED when any criterion fails. */
crp_status crp_selftest(const char* options_json, char** summary_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CRPOINT_H */
