/* C client of the shared library: handles, status codes, error messages. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "spinglass.h"

static int fails = 0;
#define EXPECT(c)                                         \
  do {                                                    \
    if (!(c)) {                                           \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #c); \
      ++fails;                                            \
    }                                                     \
  } while (0)

int main(void) {
  int p[2] = {2, 3};
  double b2[2] = {1.0, 1.0};
  sg_mixture* m = NULL;
  EXPECT(sg_mixture_create(p, b2, 2, &m) == SG_OK);
  double v = 0;
  EXPECT(sg_mixture_nu(m, 1.0, 1, &v) == SG_OK && fabs(v - 5.0) < 1e-15);

  int bad[1] = {1};
  sg_mixture* mb = NULL;
  EXPECT(sg_mixture_create(bad, b2, 1, &mb) == SG_E_INVALID);
  EXPECT(mb == NULL && sg_last_error()[0] != '\0');
  EXPECT(sg_mixture_from_json("{\"coeffs\": {\"2\": 1.0}, \"extra\": 1}", &mb) == SG_E_INVALID);

  sg_init_spec s = {1.0, 0.0, 1.0, 0.7, 0.9};
  sg_init* ic = NULL;
  EXPECT(sg_init_create(m, &s, &ic) == SG_OK);
  sg_init_info info;
  EXPECT(sg_init_get_info(ic, &info) == SG_OK);
  EXPECT(fabs(info.w[0] - 0.5) < 1e-12 && fabs(info.w[1] - 4.6) < 1e-12 && fabs(info.w[2] + 1.7) < 1e-12);
  sg_init_free(ic);

  sg_init_spec g = {0.8, 0.5, 0.3, 0.2, 0.9};
  EXPECT(sg_init_create(m, &g, &ic) == SG_OK);
  sg_solver_config cfg;
  sg_solver_config_default(&cfg);
  cfg.beta = 0.0;
  cfg.T = 1.0;
  cfg.h = 0.01;
  sg_solution* sol = NULL;
  EXPECT(sg_solve(ic, &cfg, &sol) == SG_OK);
  int n = sg_solution_steps(sol);
  EXPECT(n == 100);
  double* C = malloc(sizeof(double) * (n + 1) * (n + 2) / 2);
  EXPECT(sg_solution_triangle(sol, C, NULL, NULL) == SG_OK);
  EXPECT(fabs(C[(size_t)n * (n + 1) / 2] - exp(-0.5)) < 1e-4);
  free(C);
  EXPECT(sg_solver_config_variant(&cfg, "f:abc") == SG_E_INVALID);
  sg_solution_free(sol);

  sg_fdt* f = NULL;
  EXPECT(sg_fdt_solve(m, 0.3, 0.01, 2.0, 0.01, &f) == SG_E_GAMMA_TOO_SMALL && f == NULL);
  sg_fdt_free(f);

  sg_init_free(ic);
  sg_mixture_free(m);
  EXPECT(sg_accept_count() == 13);
  if (fails) return 1;
  printf("capi ok\n");
  return 0;
}
