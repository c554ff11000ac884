#ifndef VARCALC_H
#define VARCALC_H

/* C interface to the variational-calculus toolkit.  All entry points return
 * a vc_status; on VC_ERROR the message is available from vc_last_error()
 * (thread-local).  Strings handed out through char** parameters are owned by
 * the caller and released with vc_string_free().  Configuration parameters
 * are JSON objects; pass NULL or "" for defaults.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vc_status {
  VC_OK = 0,       /* ran, every asserted check passed */
  VC_FINDINGS = 1, /* ran, violations are reported in the output */
  VC_ERROR = 2     /* bad usage, bad input, or internal failure */
} vc_status;

typedef struct vc_problem vc_problem;
typedef struct vc_value_grid vc_value_grid;

const char* vc_version(void);
/* Message of the most recent failure on this thread ("" when none). */
const char* vc_last_error(void);
void vc_string_free(char* text);

vc_status vc_problem_parse(const char* json_text, vc_problem** out_problem);
void vc_problem_free(vc_problem* problem);

/* Built-in integrands and terminal costs. */
vc_status vc_catalog_json(char** out_json);

/* Velocity section of a named integrand with its convex envelope.
 * config: {"lagrangian":name, "x":state, "u_min","u_max","points"} */
vc_status vc_envelope_csv(const char* config_json, char** out_csv);

/* Conjugate (Hamiltonian) table of a named integrand.
 * config: {"lagrangian":name, "x", "u_max","u_points","p_min","p_max",
 *          "p_points"} */
vc_status vc_conjugate_csv(const char* config_json, char** out_csv);

/* Fixed-endpoint solver.  config: {"time_steps","resolution","half_width",
 * "center","slope_cap","refine","sweeps","bisection_levels"}.  Either
 * output pointer may be NULL. */
vc_status vc_solve(const vc_problem* problem, const char* config_json,
                   char** out_report_json, char** out_trajectory_csv);

/* Constancy-of-Hamiltonian checks along the computed minimizer.  variant is
 * one of "erdmann", "convex", "subdiff", "clarke", "superdiff".  config
 * accepts the solver keys plus {"section_resolution","v_max",
 * "hypothesis_tol","u_radius"}. */
vc_status vc_dbr(const vc_problem* problem, const char* variant,
                 const char* config_json, char** out_report_json);

/* A-priori slope bound from the declared data bounds.  config:
 * {"verify":bool plus solver keys}; verification solves the problem and
 * compares the empirical slope. */
vc_status vc_bound(const vc_problem* problem, const char* config_json,
                   char** out_report_json);

/* Value-function grid for a Bolza problem.  config: {"time_steps",
 * "resolution","half_width","center","slope_cap","extra_layers"}. */
vc_status vc_value_compute(const vc_problem* problem, const char* config_json,
                           vc_value_grid** out_grid);
void vc_value_free(vc_value_grid* grid);
vc_status vc_value_csv(const vc_value_grid* grid, char** out_csv);

/* Hamilton-Jacobi residual report over the grid interior.  config:
 * {"tol","k_lo","k_hi","i_margin","t_stride","x_stride","raw_stride",
 *  "kink_tol","source":"direct"|"estimated"} */
vc_status vc_hj(const vc_value_grid* grid, const vc_problem* problem,
                const char* config_json, char** out_report_json);

/* Differential-inclusion verdict for the optimal path from start_x (or a
 * deliberately perturbed copy).  config: {"start_x","perturb_node",
 * "perturb_offset","tol","pass_fraction","action_tol","equality_tol"} */
vc_status vc_inclusion(const vc_value_grid* grid, const vc_problem* problem,
                       const char* config_json, char** out_report_json);

#ifdef __cplusplus
}
#endif

#endif /* VARCALC_H */
