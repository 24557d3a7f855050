#include "spinglass.h"

#include <omp.h>

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "spinglass/acceptance.hpp"
#include "spinglass/config.hpp"
#include "spinglass/error.hpp"
#include "spinglass/fdt.hpp"
#include "spinglass/hamiltonian.hpp"
#include "spinglass/langevin.hpp"
#include "spinglass/phase.hpp"

struct sg_mixture {
  sg::Mixture m;
};
struct sg_init {
  sg::InitCondition ic;
};
struct sg_fdt {
  sg::FdtSolution f;
};
struct sg_solution {
  sg::TwoTimeSolution s;
};
struct sg_sim {
  sg::Ensemble en;
  sg_sim_report rep{};
  std::vector<double> errors;
};

namespace {

thread_local std::string g_err;

template <class F>
sg_status guard(F&& f) {
  try {
    f();
    g_err.clear();
    return SG_OK;
  } catch (const sg::Error& e) {
    g_err = e.what();
    return sg_status(int(e.code()));
  } catch (const std::bad_alloc&) {
    g_err = "out of memory";
    return SG_E_MEMORY;
  } catch (const std::exception& e) {
    g_err = e.what();
    return SG_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) sg::fail(sg::Code::invalid, std::string("null ") + what);
}

sg::SolverConfig to_cpp(const sg_solver_config& c) {
  sg::SolverConfig s;
  s.beta = c.beta;
  s.T = c.T;
  s.h = c.h;
  switch (c.variant) {
    case SG_SPHERICAL: s.variant = sg::Variant::Spherical; break;
    case SG_FDYNAMICS: s.variant = sg::Variant::FDynamics; break;
    case SG_GRADFLOW: s.variant = sg::Variant::GradientFlow; break;
    default: sg::fail(sg::Code::invalid, "unknown variant");
  }
  s.ell = c.ell;
  if (c.has_f0_slope) s.f0_slope = c.f0_slope;
  s.corrector_iters = c.corrector_iters;
  return s;
}

sg_solver_config to_c(const sg::SolverConfig& s) {
  sg_solver_config c;
  sg_solver_config_default(&c);
  c.beta = s.beta;
  c.T = s.T;
  c.h = s.h;
  c.variant = s.variant == sg::Variant::Spherical ? SG_SPHERICAL
              : s.variant == sg::Variant::FDynamics ? SG_FDYNAMICS
                                                    : SG_GRADFLOW;
  c.ell = s.ell;
  c.has_f0_slope = s.f0_slope.has_value();
  c.f0_slope = s.f0_slope.value_or(0.0);
  c.corrector_iters = s.corrector_iters;
  return c;
}

sg::SdeConfig to_cpp(const sg_sim_config& c) {
  sg::SdeConfig s;
  s.beta = c.beta;
  s.T = c.T;
  s.h_obs = c.h_obs;
  s.substeps = c.substeps;
  s.variant = c.confined ? sg::SdeVariant::FConfined : sg::SdeVariant::SphericalProjected;
  s.ell = c.ell;
  s.f0_slope = c.f0_slope;
  s.r_guard = c.r_guard;
  s.seed = c.seed;
  return s;
}

}  // namespace

extern "C" {

const char* sg_last_error(void) { return g_err.c_str(); }

const char* sg_status_name(sg_status s) {
  static const char* names[] = {"ok",        "invalid",    "domain",        "singular",       "gamma_too_small",
                                "no_root",   "blow_up",    "escape",        "grid_mismatch",  "not_admissible",
                                "memory",    "internal"};
  return (int(s) >= 0 && int(s) <= 11) ? names[s] : "unknown";
}

const char* sg_version(void) { return "1.0.0"; }

void sg_set_threads(int k) {
  if (k > 0) omp_set_num_threads(k);
}

sg_status sg_mixture_create(const int* p, const double* b2, size_t k, sg_mixture** out) {
  return guard([&] {
    need(out, "output");
    if (k > 0) {
      need(p, "degrees");
      need(b2, "coefficients");
    }
    std::map<int, double> c;
    for (size_t i = 0; i < k; ++i) {
      if (c.count(p[i])) sg::fail(sg::Code::invalid, "duplicate degree");
      c[p[i]] = b2[i];
    }
    *out = new sg_mixture{sg::Mixture(c)};
  });
}

sg_status sg_mixture_from_json(const char* json, sg_mixture** out) {
  return guard([&] {
    need(json, "json");
    need(out, "output");
    *out = new sg_mixture{sg::parse_mixture(json)};
  });
}

void sg_mixture_free(sg_mixture* m) { delete m; }

sg_status sg_mixture_nu(const sg_mixture* m, double r, int order, double* out) {
  return guard([&] {
    need(m, "mixture");
    need(out, "output");
    *out = m->m.nu(r, order);
  });
}

sg_status sg_phase_thresholds(const sg_mixture* m, double* bcd, double* bcs) {
  return guard([&] {
    need(m, "mixture");
    if (bcd) *bcd = sg::beta_c_dyn(m->m);
    if (bcs) *bcs = sg::beta_c_stat(m->m);
  });
}

sg_status sg_phase_point(const sg_mixture* m, double beta, double bcd, double bcs, sg_phase_info* out) {
  return guard([&] {
    need(m, "mixture");
    need(out, "output");
    const sg::PhasePoint p = sg::phase_point(m->m, beta, bcd, bcs);
    *out = {p.beta, p.beta_c_dyn, p.beta_c_stat, p.q_d, p.regime == sg::Regime::RSB};
  });
}

sg_status sg_init_create(const sg_mixture* m, const sg_init_spec* spec, sg_init** out) {
  return guard([&] {
    need(m, "mixture");
    need(spec, "spec");
    need(out, "output");
    sg::InitSpec s{spec->q_star, spec->E, spec->E_star, spec->G_star, spec->q_o};
    *out = new sg_init{sg::InitCondition(m->m, s)};
  });
}

sg_status sg_init_gibbs(const sg_mixture* m, double beta0, double q_ea, double gs, sg_init** out) {
  return guard([&] {
    need(m, "mixture");
    need(out, "output");
    *out = new sg_init{sg::gibbs_init(m->m, beta0, q_ea, gs)};
  });
}

sg_status sg_init_from_json(const sg_mixture* m, const char* json, sg_init** out) {
  return guard([&] {
    need(m, "mixture");
    need(json, "json");
    need(out, "output");
    *out = new sg_init{sg::parse_init(json).build(m->m)};
  });
}

void sg_init_free(sg_init* ic) { delete ic; }

sg_status sg_init_get_info(const sg_init* ic, sg_init_info* out) {
  return guard([&] {
    need(ic, "init");
    need(out, "output");
    const auto& s = ic->ic.spec();
    out->branch = int(ic->ic.branch());
    out->branch_name = sg::branch_name(ic->ic.branch());
    for (int k = 0; k < 4; ++k) out->w[k] = ic->ic.w()[k];
    out->spec = {s.q_star, s.q_o, s.E, s.E_star, s.G_star};
    out->g_star_adjusted = ic->ic.g_star_adjusted();
    out->solve_residual = ic->ic.solve_residual();
  });
}

sg_status sg_init_stationarity(const sg_init* ic, double beta, sg_stationarity* out) {
  return guard([&] {
    need(ic, "init");
    need(out, "output");
    const sg::Stationarity st = sg::check_stationary(ic->ic, beta);
    out->admissible = st.admissible;
    out->residual = st.residual;
    out->has_gamma_star = 0;
    out->gamma_star = 0.0;
    const auto& s = ic->ic.spec();
    if (ic->ic.rs()) {
      out->has_gamma_star = 1;
      out->gamma_star = 0.5;
    } else if (std::fabs(ic->ic.alpha()) < 1.0) {
      out->has_gamma_star = 1;
      out->gamma_star = sg::gamma_star(ic->ic.mixture(), beta, s.q_star, ic->ic.alpha());
    }
  });
}

sg_status sg_fdt_solve(const sg_mixture* m, double beta, double gamma, double T, double h, sg_fdt** out) {
  return guard([&] {
    need(m, "mixture");
    need(out, "output");
    *out = new sg_fdt{sg::solve_fdt(m->m, beta, gamma, T, h)};
  });
}

void sg_fdt_free(sg_fdt* f) { delete f; }

int sg_fdt_steps(const sg_fdt* f) { return f ? int(f->f.c.size()) - 1 : -1; }

sg_status sg_fdt_get(const sg_fdt* f, double* c, double* r) {
  return guard([&] {
    need(f, "fdt");
    for (std::size_t k = 0; k < f->f.c.size(); ++k) {
      if (c) c[k] = f->f.c[k];
      if (r) r[k] = f->f.r(int(k));
    }
  });
}

sg_status sg_fdt_summary(const sg_fdt* f, double* c_inf, double* plateau_time, int* plateau_warning) {
  return guard([&] {
    need(f, "fdt");
    if (c_inf) *c_inf = f->f.c_inf;
    if (plateau_time) *plateau_time = f->f.plateau_time;
    if (plateau_warning) *plateau_warning = f->f.plateau_warning;
  });
}

void sg_solver_config_default(sg_solver_config* cfg) {
  if (!cfg) return;
  *cfg = sg_solver_config{};
  cfg->T = 1.0;
  cfg->h = 0.01;
  cfg->variant = SG_SPHERICAL;
  cfg->corrector_iters = 2;
}

sg_status sg_solver_config_variant(sg_solver_config* cfg, const char* variant) {
  return guard([&] {
    need(cfg, "config");
    need(variant, "variant");
    sg::SolverConfig s;
    sg::parse_variant(variant, s);
    cfg->variant = to_c(s).variant;
    cfg->ell = s.ell;
  });
}

sg_status sg_solve_config_from_json(const char* json, sg_mixture** m, sg_init** ic, sg_solver_config* cfg) {
  return guard([&] {
    need(json, "json");
    need(m, "mixture output");
    need(ic, "init output");
    need(cfg, "config output");
    const sg::SolveConfig c = sg::parse_solve(json);
    auto mm = std::make_unique<sg_mixture>(sg_mixture{c.mixture});
    auto ii = std::make_unique<sg_init>(sg_init{c.init.build(c.mixture)});
    *cfg = to_c(c.solver);
    *m = mm.release();
    *ic = ii.release();
  });
}

sg_status sg_solve(const sg_init* ic, const sg_solver_config* cfg, sg_solution** out) {
  return guard([&] {
    need(ic, "init");
    need(cfg, "config");
    need(out, "output");
    *out = new sg_solution{sg::solve_dynamics(ic->ic, to_cpp(*cfg))};
  });
}

void sg_solution_free(sg_solution* s) { delete s; }

int sg_solution_steps(const sg_solution* s) { return s ? s->s.n : -1; }

double sg_solution_h(const sg_solution* s) { return s ? s->s.h : 0.0; }

sg_status sg_solution_one_time(const sg_solution* s, double* q, double* K, double* mu, double* L, double* H) {
  return guard([&] {
    need(s, "solution");
    const auto& S = s->s;
    for (int i = 0; i <= S.n; ++i) {
      if (q) q[i] = S.q[i];
      if (K) K[i] = S.K[i];
      if (mu) mu[i] = S.mu[i];
      if (L) L[i] = S.L[i];
      if (H) H[i] = S.H[i];
    }
  });
}

sg_status sg_solution_triangle(const sg_solution* s, double* C, double* R, double* chi) {
  return guard([&] {
    need(s, "solution");
    const auto& S = s->s;
    if (C) std::memcpy(C, S.C.data(), S.C.size() * sizeof(double));
    if (R) std::memcpy(R, S.R.data(), S.R.size() * sizeof(double));
    if (chi)
      for (int i = 0; i <= S.n; ++i) {
        double acc = 0.0;
        chi[sg::TwoTimeSolution::idx(i, 0)] = 0.0;
        for (int j = 1; j <= i; ++j) {
          acc += 0.5 * S.h * (S.r(i, j - 1) + S.r(i, j));
          chi[sg::TwoTimeSolution::idx(i, j)] = acc;
        }
      }
  });
}

sg_status sg_solution_check(const sg_solution* s, const sg_init* ic, const sg_solver_config* cfg,
                            sg_solution_checks* out) {
  return guard([&] {
    need(s, "solution");
    need(ic, "init");
    need(cfg, "config");
    need(out, "output");
    const sg::PsdReport p = sg::psd_check(s->s, ic->ic);
    const sg::Residual r = sg::residual(s->s, ic->ic, to_cpp(*cfg));
    *out = {p.min_eig_C, p.min_eig_Cbar, p.ok, r.R, r.C, r.q, r.H, r.L, r.mu};
  });
}

sg_status sg_sim_config_from_json(const char* json, sg_mixture** m, sg_init** ic, sg_sim_config* cfg) {
  return guard([&] {
    need(json, "json");
    need(m, "mixture output");
    need(ic, "init output");
    need(cfg, "config output");
    const sg::SimConfig c = sg::parse_sim(json);
    auto mm = std::make_unique<sg_mixture>(sg_mixture{c.mixture});
    auto ii = std::make_unique<sg_init>(sg_init{c.init.build(c.mixture)});
    const auto& d = c.sde;
    *cfg = {c.N,   c.paths,     d.seed,    c.disorder_seed, c.x0_seed, d.beta, d.T, d.h_obs, d.substeps,
            d.variant == sg::SdeVariant::FConfined, d.ell, d.f0_slope, d.r_guard};
    *m = mm.release();
    *ic = ii.release();
  });
}

sg_status sg_simulate(const sg_init* ic, const sg_sim_config* cfg, const sg_solution* ref, sg_sim** out) {
  return guard([&] {
    need(ic, "init");
    need(cfg, "config");
    need(out, "output");
    const auto& s = ic->ic.spec();
    sg::SpinSystem sys(ic->ic.mixture(), cfg->N, cfg->disorder_seed, cfg->r_guard);
    const sg::ConditioningSpec spec = sg::sample_band_point(s.q_star, s.q_o, cfg->N, cfg->x0_seed);
    sg::ConditionedField field(sys, spec, ic->ic);
    const sg::SdeConfig sde = to_cpp(*cfg);
    auto sim = std::make_unique<sg_sim>();
    sim->en = sg::run_paths(field, spec, sde, cfg->paths);
    sg_sim_report& r = sim->rep;
    r.paths = cfg->paths;
    r.escaped = sim->en.escaped_count;
    for (int k = 0; k < cfg->paths; ++k)
      if (!sim->en.escaped[k]) {
        const auto& o = sim->en.obs[k];
        r.inv_C00 = o.C[0] - 1.0;
        r.inv_q0 = o.q[0] - s.q_o;
        r.inv_H0 = o.H[0] - s.E;
        break;
      }
    if (ref) {
      const sg::McReport mc = sg::report(sim->en, ref->s, sde.T);
      r.has_errors = 1;
      r.err_mean = mc.err_mean;
      r.err_se = mc.err_se;
      for (const auto& t : mc.terms) {
        r.err_C += t.C / cfg->paths;
        r.err_chi += t.chi / cfg->paths;
        r.err_q += t.q / cfg->paths;
        r.err_H += t.H / cfg->paths;
      }
      sim->errors = mc.errors;
    }
    *out = sim.release();
  });
}

void sg_sim_free(sg_sim* s) { delete s; }

int sg_sim_steps(const sg_sim* s) { return s && !s->en.mean.q.empty() ? s->en.mean.n : -1; }

sg_status sg_sim_one_time(const sg_sim* s, double* q, double* H, double* K) {
  return guard([&] {
    need(s, "simulation");
    const auto& o = s->en.mean;
    if (o.q.empty()) sg::fail(sg::Code::escape, "every path escaped");
    for (std::size_t i = 0; i < o.q.size(); ++i) {
      if (q) q[i] = o.q[i];
      if (H) H[i] = o.H[i];
      if (K) K[i] = o.K[i];
    }
  });
}

sg_status sg_sim_triangle(const sg_sim* s, double* C, double* chi) {
  return guard([&] {
    need(s, "simulation");
    const auto& o = s->en.mean;
    if (o.q.empty()) sg::fail(sg::Code::escape, "every path escaped");
    if (C) std::memcpy(C, o.C.data(), o.C.size() * sizeof(double));
    if (chi) std::memcpy(chi, o.chi.data(), o.chi.size() * sizeof(double));
  });
}

sg_status sg_sim_get_report(const sg_sim* s, sg_sim_report* out) {
  return guard([&] {
    need(s, "simulation");
    need(out, "output");
    *out = s->rep;
  });
}

sg_status sg_sim_path_errors(const sg_sim* s, double* errors) {
  return guard([&] {
    need(s, "simulation");
    need(errors, "output");
    if (s->errors.empty()) sg::fail(sg::Code::invalid, "no reference solution was given");
    std::memcpy(errors, s->errors.data(), s->errors.size() * sizeof(double));
  });
}

int sg_accept_count(void) { return sg::kCriteria; }

sg_status sg_accept_run(int id, const char* config_dir, sg_criterion* out) {
  return guard([&] {
    need(out, "output");
    sg::AcceptanceOptions opt;
    if (config_dir) opt.config_dir = config_dir;
    const sg::CriterionResult r = sg::run_criterion(id, opt);
    out->id = r.id;
    out->pass = r.pass;
    out->seconds = r.seconds;
    std::snprintf(out->name, sizeof out->name, "%s", r.name.c_str());
    std::snprintf(out->detail, sizeof out->detail, "%s", r.detail.c_str());
  });
}

}  // extern "C"
