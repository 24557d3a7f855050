#ifndef SPINGLASS_H
#define SPINGLASS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(SPINGLASS_BUILD)
#define SG_API __attribute__((visibility("default")))
#else
#define SG_API
#endif

typedef enum {
  SG_OK = 0,
  SG_E_INVALID = 1,
  SG_E_DOMAIN = 2,
  SG_E_SINGULAR = 3,
  SG_E_GAMMA_TOO_SMALL = 4,
  SG_E_NO_ROOT = 5,
  SG_E_BLOW_UP = 6,
  SG_E_ESCAPE = 7,
  SG_E_GRID_MISMATCH = 8,
  SG_E_NOT_ADMISSIBLE = 9,
  SG_E_MEMORY = 10,
  SG_E_INTERNAL = 11
} sg_status;

typedef struct sg_mixture sg_mixture;
typedef struct sg_init sg_init;
typedef struct sg_fdt sg_fdt;
typedef struct sg_solution sg_solution;
typedef struct sg_sim sg_sim;

/* message of the last failed call on this thread */
SG_API const char* sg_last_error(void);
SG_API const char* sg_status_name(sg_status s);
SG_API const char* sg_version(void);
SG_API void sg_set_threads(int k);

/* mixture nu(r) = sum_p b2[p] r^p */
SG_API sg_status sg_mixture_create(const int* p, const double* b2, size_t k, sg_mixture** out);
SG_API sg_status sg_mixture_from_json(const char* json, sg_mixture** out);
SG_API void sg_mixture_free(sg_mixture* m);
SG_API sg_status sg_mixture_nu(const sg_mixture* m, double r, int order, double* out);

/* phase diagram */
typedef struct {
  double beta;
  double beta_c_dyn;
  double beta_c_stat;
  double q_d;
  int rsb; /* 0: RS, 1: beta > beta_c_stat */
} sg_phase_info;
SG_API sg_status sg_phase_thresholds(const sg_mixture* m, double* beta_c_dyn, double* beta_c_stat);
SG_API sg_status sg_phase_point(const sg_mixture* m, double beta, double beta_c_dyn, double beta_c_stat,
                                sg_phase_info* out);

/* initial data */
typedef struct {
  double q_star, q_o, E, E_star, G_star;
} sg_init_spec;
typedef struct {
  int branch; /* 0 RS, 1 generic, 2 pure-p, 3 degenerate, 4 pure-p degenerate */
  const char* branch_name;
  double w[4];
  sg_init_spec spec; /* after any pure-p adjustment of G_star */
  int g_star_adjusted;
  double solve_residual;
} sg_init_info;
typedef struct {
  int admissible;
  double residual;
  int has_gamma_star;
  double gamma_star;
} sg_stationarity;
SG_API sg_status sg_init_create(const sg_mixture* m, const sg_init_spec* spec, sg_init** out);
SG_API sg_status sg_init_gibbs(const sg_mixture* m, double beta0, double q_ea, double gs, sg_init** out);
SG_API sg_status sg_init_from_json(const sg_mixture* m, const char* json, sg_init** out);
SG_API void sg_init_free(sg_init* ic);
SG_API sg_status sg_init_get_info(const sg_init* ic, sg_init_info* out);
SG_API sg_status sg_init_stationarity(const sg_init* ic, double beta, sg_stationarity* out);

/* stationary FDT solution on tau = k h, k = 0..n */
SG_API sg_status sg_fdt_solve(const sg_mixture* m, double beta, double gamma, double T, double h, sg_fdt** out);
SG_API void sg_fdt_free(sg_fdt* f);
SG_API int sg_fdt_steps(const sg_fdt* f);
SG_API sg_status sg_fdt_get(const sg_fdt* f, double* c, double* r);
SG_API sg_status sg_fdt_summary(const sg_fdt* f, double* c_inf, double* plateau_time, int* plateau_warning);

/* two-time solve */
typedef enum { SG_SPHERICAL = 0, SG_FDYNAMICS = 1, SG_GRADFLOW = 2 } sg_variant;
typedef struct {
  double beta, T, h;
  int variant;
  double ell;
  int has_f0_slope;
  double f0_slope;
  int corrector_iters;
} sg_solver_config;
typedef struct {
  double min_eig_C, min_eig_Cbar;
  int psd_ok;
  double res_R, res_C, res_q, res_H, res_L, res_mu;
} sg_solution_checks;
SG_API void sg_solver_config_default(sg_solver_config* cfg);
/* "spherical", "gradflow" or "f:ELL" */
SG_API sg_status sg_solver_config_variant(sg_solver_config* cfg, const char* variant);
/* full solve config: mixture, init and solver settings */
SG_API sg_status sg_solve_config_from_json(const char* json, sg_mixture** m, sg_init** ic, sg_solver_config* cfg);
SG_API sg_status sg_solve(const sg_init* ic, const sg_solver_config* cfg, sg_solution** out);
SG_API void sg_solution_free(sg_solution* s);
SG_API int sg_solution_steps(const sg_solution* s);
SG_API double sg_solution_h(const sg_solution* s);
/* arrays of length steps + 1 (NULL to skip) */
SG_API sg_status sg_solution_one_time(const sg_solution* s, double* q, double* K, double* mu, double* L, double* H);
/* packed lower triangle, (steps + 1)(steps + 2) / 2 entries, row i holds t_0..t_i */
SG_API sg_status sg_solution_triangle(const sg_solution* s, double* C, double* R, double* chi);
SG_API sg_status sg_solution_check(const sg_solution* s, const sg_init* ic, const sg_solver_config* cfg,
                                   sg_solution_checks* out);

/* finite-N Langevin ensemble */
typedef struct {
  int N, paths;
  uint64_t seed, disorder_seed, x0_seed;
  double beta, T, h_obs;
  int substeps;
  int confined; /* 0: spherical projection, 1: confining potential */
  double ell, f0_slope, r_guard;
} sg_sim_config;
typedef struct {
  int paths, escaped;
  int has_errors;
  double err_mean, err_se;
  /* mean over paths of the sup errors of each term */
  double err_C, err_chi, err_q, err_H;
  /* invariants at s = 0 on path 0: C(0,0) - 1, q(0) - q_o, H(0) - E */
  double inv_C00, inv_q0, inv_H0;
} sg_sim_report;
SG_API sg_status sg_sim_config_from_json(const char* json, sg_mixture** m, sg_init** ic, sg_sim_config* cfg);
/* field and x0 are drawn from disorder_seed and x0_seed, conditioned on the initial data of ic.
   ref may be NULL; when given, each path is scored against it */
SG_API sg_status sg_simulate(const sg_init* ic, const sg_sim_config* cfg, const sg_solution* ref, sg_sim** out);
SG_API void sg_sim_free(sg_sim* s);
SG_API int sg_sim_steps(const sg_sim* s);
/* path-averaged observables */
SG_API sg_status sg_sim_one_time(const sg_sim* s, double* q, double* H, double* K);
SG_API sg_status sg_sim_triangle(const sg_sim* s, double* C, double* chi);
SG_API sg_status sg_sim_get_report(const sg_sim* s, sg_sim_report* out);
SG_API sg_status sg_sim_path_errors(const sg_sim* s, double* errors);

/* acceptance suite */
typedef struct {
  int id;
  int pass;
  double seconds;
  char name[64];
  char detail[512];
} sg_criterion;
SG_API int sg_accept_count(void);
SG_API sg_status sg_accept_run(int id, const char* config_dir, sg_criterion* out);

#ifdef __cplusplus
}
#endif

#endif
