#include <openssl/evp.h>

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "spinglass.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(sg_status s) {
  if (s == SG_OK) return;
  std::string msg = std::string(sg_status_name(s)) + ": " + sg_last_error();
  if (s == SG_E_INVALID) throw ConfigError(msg);
  throw NumericError(msg);
}

template <class T, void (*F)(T*)>
struct Del {
  void operator()(T* p) const { F(p); }
};
using Mix = std::unique_ptr<sg_mixture, Del<sg_mixture, sg_mixture_free>>;
using Ini = std::unique_ptr<sg_init, Del<sg_init, sg_init_free>>;
using Fdt = std::unique_ptr<sg_fdt, Del<sg_fdt, sg_fdt_free>>;
using Sol = std::unique_ptr<sg_solution, Del<sg_solution, sg_solution_free>>;
using Sim = std::unique_ptr<sg_sim, Del<sg_sim, sg_sim_free>>;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

std::string sha256(const std::string& s) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char b[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    hex += b;
  }
  return hex;
}

// shortest round-trip form
std::string g17(double x) {
  char b[32];
  auto r = std::to_chars(b, b + sizeof b, x);
  return std::string(b, r.ptr);
}

// Writes go to a temporary file renamed into place.
class Out {
 public:
  Out(std::string dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
    fs::create_directories(dir_);
  }
  const std::string& hash() const { return hash_; }

  void write(const std::string& name, const std::string& body) const {
    const fs::path p = fs::path(dir_) / name, tmp = fs::path(dir_) / (name + ".tmp");
    {
      std::ofstream o(tmp, std::ios::binary);
      o << body;
      if (!o) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, p);
  }
  void csv(const std::string& name, const std::string& header, const std::string& rows) const {
    write(name, "# manifest_sha256=" + hash_ + "\n" + header + "\n" + rows);
  }
  void js(const std::string& name, json j) const {
    j["manifest_sha256"] = hash_;
    write(name, j.dump(2) + "\n");
  }

 private:
  std::string dir_, hash_;
};

// manifest = command, arguments and input file contents; the hash covers its canonical dump
Out start(const std::string& cmd, const std::string& dir, const json& inputs, const json& args) {
  json m;
  m["command"] = cmd;
  m["inputs"] = inputs;
  m["args"] = args;
  m["version"] = sg_version();
  const std::string canon = m.dump();
  const std::string h = sha256(canon);
  Out o(dir, h);
  m["manifest_sha256"] = h;
  o.write("manifest.json", m.dump(2) + "\n");
  return o;
}

Mix load_mixture(const std::string& path, json& inputs) {
  const std::string text = slurp(path);
  inputs["mixture"] = parse_json(text, path);
  sg_mixture* m = nullptr;
  check(sg_mixture_from_json(text.c_str(), &m));
  return Mix(m);
}

Ini load_init(const sg_mixture* m, const std::string& path, json& inputs) {
  const std::string text = slurp(path);
  inputs["init"] = parse_json(text, path);
  sg_init* ic = nullptr;
  check(sg_init_from_json(m, text.c_str(), &ic));
  return Ini(ic);
}

json init_json(const sg_init* ic) {
  sg_init_info in;
  check(sg_init_get_info(ic, &in));
  return {{"branch", in.branch_name},
          {"w", {in.w[0], in.w[1], in.w[2], in.w[3]}},
          {"q_star", in.spec.q_star},
          {"q_o", in.spec.q_o},
          {"E", in.spec.E},
          {"E_star", in.spec.E_star},
          {"G_star", in.spec.G_star},
          {"G_star_adjusted", bool(in.g_star_adjusted)},
          {"weight_residual", in.solve_residual}};
}

void write_solution(const Out& o, const sg_solution* s, bool binary, const std::string& prefix) {
  const int n = sg_solution_steps(s);
  const double h = sg_solution_h(s);
  const std::size_t tri = std::size_t(n + 1) * (n + 2) / 2;
  std::vector<double> q(n + 1), K(n + 1), mu(n + 1), L(n + 1), H(n + 1), C(tri), R(tri), chi(tri);
  check(sg_solution_one_time(s, q.data(), K.data(), mu.data(), L.data(), H.data()));
  check(sg_solution_triangle(s, C.data(), R.data(), chi.data()));
  std::string rows;
  for (int i = 0; i <= n; ++i)
    rows += g17(i * h) + "," + g17(q[i]) + "," + g17(K[i]) + "," + g17(mu[i]) + "," + g17(L[i]) + "," + g17(H[i]) + "\n";
  o.csv(prefix + "one_time.csv", "s,q,K,mu,L,H", rows);
  if (binary) {
    std::string body("SPGL2T\0\0", 8);
    const std::uint64_t nn = std::uint64_t(n);
    body.append(reinterpret_cast<const char*>(&nn), 8);  // little-endian hosts only
    body.append(reinterpret_cast<const char*>(C.data()), C.size() * sizeof(double));
    o.write(prefix + "triangle_C.bin", body);
    body.resize(16);
    body.append(reinterpret_cast<const char*>(R.data()), R.size() * sizeof(double));
    o.write(prefix + "triangle_R.bin", body);
    return;
  }
  rows.clear();
  std::size_t k = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= i; ++j, ++k)
      rows += g17(i * h) + "," + g17(j * h) + "," + g17(C[k]) + "," + g17(R[k]) + "," + g17(chi[k]) + "\n";
  o.csv(prefix + "triangle.csv", "s,t,C,R,chi", rows);
}

void write_sim(const Out& o, const sg_sim* s, double h) {
  const int n = sg_sim_steps(s);
  if (n < 0) return;
  const std::size_t tri = std::size_t(n + 1) * (n + 2) / 2;
  std::vector<double> q(n + 1), H(n + 1), K(n + 1), C(tri), chi(tri);
  check(sg_sim_one_time(s, q.data(), H.data(), K.data()));
  check(sg_sim_triangle(s, C.data(), chi.data()));
  std::string rows;
  for (int i = 0; i <= n; ++i) rows += g17(i * h) + "," + g17(q[i]) + "," + g17(H[i]) + "," + g17(K[i]) + "\n";
  o.csv("sim_one_time.csv", "s,q_N,H_N,K_N", rows);
  rows.clear();
  std::size_t k = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= i; ++j, ++k) rows += g17(i * h) + "," + g17(j * h) + "," + g17(C[k]) + "," + g17(chi[k]) + "\n";
  o.csv("sim_triangle.csv", "s,t,C_N,chi_N", rows);
}

json sim_report(const sg_sim* s, const sg_sim_config& c) {
  sg_sim_report r;
  check(sg_sim_get_report(s, &r));
  json j = {{"N", c.N},
            {"paths", r.paths},
            {"escaped", r.escaped},
            {"seed", c.seed},
            {"disorder_seed", c.disorder_seed},
            {"x0_seed", c.x0_seed},
            {"invariants",
             {{"C00_minus_1", r.inv_C00},
              {"q0_minus_q_o", r.inv_q0},
              {"H0_minus_E", r.inv_H0},
              {"ok", std::fabs(r.inv_C00) < 1e-10 && std::fabs(r.inv_q0) < 1e-10 && std::fabs(r.inv_H0) < 1e-8}}}};
  if (r.has_errors) {
    std::vector<double> e(r.paths);
    check(sg_sim_path_errors(s, e.data()));
    j["err_mean"] = r.err_mean;
    j["err_se"] = r.err_se;
    j["path_errors"] = e;
    j["mean_terms"] = {{"C", r.err_C}, {"chi", r.err_chi}, {"q", r.err_q}, {"H", r.err_H}};
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-time dynamics of spherical mixed p-spin models"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  int threads = 0;
  std::string out_dir = "out";
  app.add_option("--threads", threads, "worker threads (0: runtime default)");
  app.add_option("-o,--out", out_dir, "output directory");

  std::string mixture_file, init_file, config_file, beta_grid, variant = "spherical", config_dir = "configs";
  double beta = 0.0, gamma = 0.5, T = 4.0, h = 0.01;
  bool binary = false, have_beta = false;
  std::vector<int> only;

  auto* phase = app.add_subcommand("phase", "dynamic/static thresholds and q_d on a beta grid");
  phase->add_option("--mixture", mixture_file)->required();
  phase->add_option("--beta-grid", beta_grid, "a:b:n")->required();

  auto* params = app.add_subcommand("params", "weights, branch and stationarity of an initial condition");
  params->add_option("--mixture", mixture_file)->required();
  params->add_option("--init", init_file)->required();
  auto* pb = params->add_option("--beta", beta, "dynamics beta for the stationarity report");

  auto* fdt = app.add_subcommand("fdt", "stationary FDT solution c(tau)");
  fdt->add_option("--mixture", mixture_file)->required();
  fdt->add_option("--beta", beta)->required();
  fdt->add_option("--gamma", gamma)->required();
  fdt->add_option("--T", T)->capture_default_str();
  fdt->add_option("--h", h)->capture_default_str();

  auto* solve = app.add_subcommand("solve", "two-time limiting dynamics");
  auto* scfg = solve->add_option("--config", config_file, "solve config JSON (replaces the other inputs)");
  for (CLI::Option* opt : {solve->add_option("--mixture", mixture_file), solve->add_option("--init", init_file),
                           solve->add_option("--beta", beta), solve->add_option("--T", T)->capture_default_str(),
                           solve->add_option("--h", h)->capture_default_str(),
                           solve->add_option("--variant", variant, "spherical | f:ELL | gradflow")
                               ->capture_default_str()})
    scfg->excludes(opt);
  solve->add_flag("--binary", binary, "raw SPGL2T triangle dumps instead of CSV");

  auto* simulate = app.add_subcommand("simulate", "finite-N Langevin ensemble");
  simulate->add_option("--config", config_file)->required();
  auto* compare = app.add_subcommand("compare", "ensemble against the limiting solution");
  compare->add_option("--config", config_file)->required();

  auto* accept = app.add_subcommand("accept", "acceptance suite");
  accept->add_option("--config-dir", config_dir)->capture_default_str();
  accept->add_option("--only", only, "criterion ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  sg_set_threads(threads);
  have_beta = pb->count() > 0;

  try {
    json inputs = json::object(), args = json::object();
    if (*phase) {
      double a, b;
      int n;
      char c1, c2;
      std::istringstream ss(beta_grid);
      if (!(ss >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !ss.eof())
        throw ConfigError("--beta-grid must be a:b:n");
      Mix m = load_mixture(mixture_file, inputs);
      args = {{"beta_grid", beta_grid}};
      Out o = start("phase", out_dir, inputs, args);
      double bcd, bcs;
      check(sg_phase_thresholds(m.get(), &bcd, &bcs));
      std::string rows;
      for (int k = 0; k < n; ++k) {
        const double bt = n == 1 ? a : a + (b - a) * k / (n - 1);
        sg_phase_info p;
        check(sg_phase_point(m.get(), bt, bcd, bcs, &p));
        rows += g17(bt) + "," + g17(p.q_d) + "," + (p.rsb ? "1RSB" : "RS") + "," + g17(bcd) + "," + g17(bcs) + "\n";
      }
      o.csv("phase.csv", "beta,q_d,regime,beta_c_dyn,beta_c_stat", rows);
      o.js("phase.json", {{"beta_c_dyn", bcd}, {"beta_c_stat", bcs}});
    } else if (*params) {
      Mix m = load_mixture(mixture_file, inputs);
      Ini ic = load_init(m.get(), init_file, inputs);
      if (have_beta) args["beta"] = beta;
      Out o = start("params", out_dir, inputs, args);
      json j = init_json(ic.get());
      if (have_beta) {
        sg_stationarity st;
        check(sg_init_stationarity(ic.get(), beta, &st));
        j["stationarity"] = {{"beta", beta}, {"admissible", bool(st.admissible)}, {"residual", st.residual}};
        if (st.has_gamma_star) j["stationarity"]["gamma_star"] = st.gamma_star;
      }
      o.js("params.json", j);
      std::cout << j.dump(2) << "\n";
    } else if (*fdt) {
      Mix m = load_mixture(mixture_file, inputs);
      args = {{"beta", beta}, {"gamma", gamma}, {"T", T}, {"h", h}};
      Out o = start("fdt", out_dir, inputs, args);
      sg_fdt* f = nullptr;
      check(sg_fdt_solve(m.get(), beta, gamma, T, h, &f));
      Fdt F(f);
      const int n = sg_fdt_steps(f);
      std::vector<double> c(n + 1), r(n + 1);
      check(sg_fdt_get(f, c.data(), r.data()));
      std::string rows;
      for (int k = 0; k <= n; ++k) rows += g17(k * h) + "," + g17(c[k]) + "," + g17(r[k]) + "\n";
      o.csv("fdt.csv", "tau,c,r", rows);
      double ci, pt;
      int pw;
      check(sg_fdt_summary(f, &ci, &pt, &pw));
      o.js("fdt.json", {{"c_inf", ci}, {"plateau_time", pt}, {"plateau_warning", bool(pw)}});
    } else if (*solve) {
      Mix m;
      Ini ic;
      sg_solver_config cfg;
      if (!config_file.empty()) {
        const std::string text = slurp(config_file);
        inputs["config"] = parse_json(text, config_file);
        sg_mixture* mp = nullptr;
        sg_init* ip = nullptr;
        check(sg_solve_config_from_json(text.c_str(), &mp, &ip, &cfg));
        m.reset(mp);
        ic.reset(ip);
      } else {
        if (mixture_file.empty() || init_file.empty()) throw ConfigError("solve needs --config or --mixture and --init");
        m = load_mixture(mixture_file, inputs);
        ic = load_init(m.get(), init_file, inputs);
        sg_solver_config_default(&cfg);
        cfg.beta = beta;
        cfg.T = T;
        cfg.h = h;
        check(sg_solver_config_variant(&cfg, variant.c_str()));
        args = {{"beta", beta}, {"T", T}, {"h", h}, {"variant", variant}};
      }
      args["binary"] = binary;
      Out o = start("solve", out_dir, inputs, args);
      sg_solution* s = nullptr;
      check(sg_solve(ic.get(), &cfg, &s));
      Sol S(s);
      write_solution(o, s, binary, "");
      sg_solution_checks ch;
      check(sg_solution_check(s, ic.get(), &cfg, &ch));
      o.js("solve.json", {{"init", init_json(ic.get())},
                          {"steps", sg_solution_steps(s)},
                          {"h", sg_solution_h(s)},
                          {"psd", {{"min_eig_C", ch.min_eig_C}, {"min_eig_Cbar", ch.min_eig_Cbar}, {"ok", bool(ch.psd_ok)}}},
                          {"residual",
                           {{"R", ch.res_R}, {"C", ch.res_C}, {"q", ch.res_q}, {"H", ch.res_H}, {"L", ch.res_L},
                            {"mu", ch.res_mu}}}});
    } else if (*simulate || *compare) {
      const std::string text = slurp(config_file);
      inputs["config"] = parse_json(text, config_file);
      sg_mixture* mp = nullptr;
      sg_init* ip = nullptr;
      sg_sim_config cfg;
      check(sg_sim_config_from_json(text.c_str(), &mp, &ip, &cfg));
      Mix m(mp);
      Ini ic(ip);
      const std::string cmd = *simulate ? "simulate" : "compare";
      Out o = start(cmd, out_dir, inputs, args);
      Sol ref;
      if (*compare) {
        sg_solver_config sc;
        sg_solver_config_default(&sc);
        sc.beta = cfg.beta;
        sc.T = cfg.T;
        sc.h = cfg.h_obs / cfg.substeps;
        if (cfg.confined) {
          sc.variant = SG_FDYNAMICS;
          sc.ell = cfg.ell;
          sc.has_f0_slope = 1;
          sc.f0_slope = cfg.f0_slope;
        }
        sg_solution* s = nullptr;
        check(sg_solve(ic.get(), &sc, &s));
        ref.reset(s);
        write_solution(o, s, false, "limit_");
      }
      sg_sim* s = nullptr;
      check(sg_simulate(ic.get(), &cfg, ref.get(), &s));
      Sim S(s);
      write_sim(o, s, cfg.h_obs);
      json rep = sim_report(s, cfg);
      o.js(cmd + ".json", rep);
      std::cout << rep.dump(2) << "\n";
    } else if (*accept) {
      args = {{"config_dir", config_dir}, {"only", only}};
      Out o = start("accept", out_dir, inputs, args);
      if (only.empty())
        for (int k = 1; k <= sg_accept_count(); ++k) only.push_back(k);
      json rows = json::array();
      bool all = true;
      for (int id : only) {
        sg_criterion c;
        check(sg_accept_run(id, config_dir.c_str(), &c));
        std::printf("%-4d %-26s %s  %s  (%.1fs)\n", c.id, c.name, c.pass ? "PASS" : "FAIL", c.detail, c.seconds);
        std::fflush(stdout);
        rows.push_back({{"id", c.id}, {"name", c.name}, {"pass", bool(c.pass)}, {"detail", c.detail}, {"seconds", c.seconds}});
        all = all && c.pass;
      }
      o.js("accept.json", {{"criteria", rows}, {"all_pass", all}});
      return all ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << json({{"error", "config"}, {"message", e.what()}}).dump() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << json({{"error", "numerical"}, {"message", e.what()}}).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json({{"error", "io"}, {"message", e.what()}}).dump() << "\n";
    return 1;
  }
  return 0;
}
