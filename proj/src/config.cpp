#include "spinglass/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "spinglass/error.hpp"

namespace sg {

using nlohmann::json;

namespace {

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Code::invalid, std::string("malformed JSON: ") + e.what());
  }
}

void allow(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) fail(Code::invalid, std::string(what) + " must be a JSON object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) fail(Code::invalid, std::string("unknown key '") + it.key() + "' in " + what);
}

double num(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) fail(Code::invalid, std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

double req_num(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) fail(Code::invalid, std::string("missing '") + key + "' in " + what);
  return num(j, key, 0.0);
}

std::int64_t integer(const json& j, const char* key, std::int64_t dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer()) fail(Code::invalid, std::string("'") + key + "' must be an integer");
  return j[key].get<std::int64_t>();
}

std::uint64_t seed(const json& j, const char* key, std::uint64_t dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_unsigned()) fail(Code::invalid, std::string("'") + key + "' must be a non-negative integer");
  return j[key].get<std::uint64_t>();
}

Mixture mixture_of(const json& j) {
  allow(j, {"coeffs", "radius_bound"}, "mixture");
  if (!j.contains("coeffs") || !j["coeffs"].is_object()) fail(Code::invalid, "mixture needs an object 'coeffs'");
  std::map<int, double> c;
  for (auto it = j["coeffs"].begin(); it != j["coeffs"].end(); ++it) {
    std::size_t pos = 0;
    int p = 0;
    try {
      p = std::stoi(it.key(), &pos);
    } catch (...) {
      pos = 0;
    }
    if (pos != it.key().size() || pos == 0) fail(Code::invalid, "mixture degree '" + it.key() + "' is not an integer");
    if (!it.value().is_number()) fail(Code::invalid, "mixture coefficient must be a number");
    c[p] = it.value().get<double>();
  }
  return Mixture(c, num(j, "radius_bound", std::numeric_limits<double>::infinity()));
}

InitConfig init_of(const json& j) {
  InitConfig ic;
  if (j.is_object() && j.contains("gibbs")) {
    allow(j, {"gibbs"}, "init");
    const json& g = j["gibbs"];
    allow(g, {"beta0", "q_ea", "gs"}, "init.gibbs");
    ic.gibbs = true;
    ic.beta0 = req_num(g, "beta0", "init.gibbs");
    ic.q_ea = num(g, "q_ea", 0.0);
    ic.gs = num(g, "gs", 0.0);
    return ic;
  }
  allow(j, {"q_star", "q_o", "E", "E_star", "G_star"}, "init");
  ic.spec.q_star = num(j, "q_star", 0.0);
  ic.spec.q_o = num(j, "q_o", 0.0);
  ic.spec.E = num(j, "E", 0.0);
  ic.spec.E_star = num(j, "E_star", 0.0);
  ic.spec.G_star = num(j, "G_star", 0.0);
  return ic;
}

std::string str(const json& j, const char* key, const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_string()) fail(Code::invalid, std::string("'") + key + "' must be a string");
  return j[key].get<std::string>();
}

}  // namespace

InitCondition InitConfig::build(const Mixture& m) const {
  if (gibbs) return gibbs_init(m, beta0, q_ea, gs);
  return InitCondition(m, spec);
}

void parse_variant(const std::string& s, SolverConfig& cfg) {
  if (s == "spherical") {
    cfg.variant = Variant::Spherical;
  } else if (s == "gradflow") {
    cfg.variant = Variant::GradientFlow;
  } else if (s.rfind("f:", 0) == 0) {
    cfg.variant = Variant::FDynamics;
    std::size_t pos = 0;
    try {
      cfg.ell = std::stod(s.substr(2), &pos);
    } catch (...) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() - 2 || !(cfg.ell > 0.0)) fail(Code::invalid, "bad variant '" + s + "'");
  } else {
    fail(Code::invalid, "unknown variant '" + s + "'");
  }
}

Mixture parse_mixture(const std::string& text) { return mixture_of(parse_text(text)); }

InitConfig parse_init(const std::string& text) { return init_of(parse_text(text)); }

SolveConfig parse_solve(const std::string& text) {
  const json j = parse_text(text);
  allow(j, {"mixture", "init", "beta", "T", "h", "variant", "f0_slope", "corrector_iters", "comment"}, "solve config");
  if (!j.contains("mixture") || !j.contains("init")) fail(Code::invalid, "solve config needs 'mixture' and 'init'");
  SolveConfig c;
  c.mixture = mixture_of(j["mixture"]);
  c.init = init_of(j["init"]);
  c.solver.beta = req_num(j, "beta", "solve config");
  c.solver.T = req_num(j, "T", "solve config");
  c.solver.h = num(j, "h", 0.01);
  parse_variant(str(j, "variant", "spherical"), c.solver);
  if (j.contains("f0_slope")) c.solver.f0_slope = num(j, "f0_slope", 0.0);
  c.solver.corrector_iters = int(integer(j, "corrector_iters", 2));
  return c;
}

SimConfig parse_sim(const std::string& text) {
  const json j = parse_text(text);
  allow(j,
        {"mixture", "init", "N", "beta", "T", "h", "paths", "variant", "f0_slope", "substeps", "r_guard", "seed",
         "disorder_seed", "x0_seed", "comment"},
        "simulate config");
  if (!j.contains("mixture") || !j.contains("init")) fail(Code::invalid, "simulate config needs 'mixture' and 'init'");
  SimConfig c;
  c.mixture = mixture_of(j["mixture"]);
  c.init = init_of(j["init"]);
  c.N = int(integer(j, "N", 100));
  c.paths = int(integer(j, "paths", 8));
  if (c.N < 2 || c.paths < 1) fail(Code::invalid, "need N >= 2 and paths >= 1");
  c.sde.beta = req_num(j, "beta", "simulate config");
  c.sde.T = req_num(j, "T", "simulate config");
  c.sde.h_obs = num(j, "h", 0.05);
  c.sde.substeps = int(integer(j, "substeps", 5));
  c.sde.r_guard = num(j, "r_guard", 2.0);
  c.sde.seed = seed(j, "seed", 1);
  c.disorder_seed = seed(j, "disorder_seed", 1);
  c.x0_seed = seed(j, "x0_seed", 2);
  SolverConfig tmp;
  parse_variant(str(j, "variant", "spherical"), tmp);
  if (tmp.variant == Variant::GradientFlow) fail(Code::invalid, "simulate supports spherical and f:ELL");
  c.sde.variant = tmp.variant == Variant::FDynamics ? SdeVariant::FConfined : SdeVariant::SphericalProjected;
  c.sde.ell = tmp.variant == Variant::FDynamics ? tmp.ell : 0.0;
  if (j.contains("f0_slope")) {
    c.sde.f0_slope = num(j, "f0_slope", 0.5);
  } else if (c.sde.variant == SdeVariant::FConfined) {
    c.sde.f0_slope = default_f0_slope(c.init.build(c.mixture), c.sde.beta);
  }
  return c;
}

SolverConfig SimConfig::solver() const {
  SolverConfig s;
  s.beta = sde.beta;
  s.T = sde.T;
  s.h = sde.h_obs / sde.substeps;
  if (sde.variant == SdeVariant::FConfined) {
    s.variant = Variant::FDynamics;
    s.ell = sde.ell;
    s.f0_slope = sde.f0_slope;
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Code::invalid, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sg
