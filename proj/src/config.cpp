#include "ilcsos/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ilcsos/benchmark_plant.hpp"
#include "ilcsos/errors.hpp"
#include "json.hpp"

namespace ilcsos {

namespace {

using nlohmann::json;

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.contains(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
void get_opt(const json& obj, const char* key, const std::string& where, T& out) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

AffinePoly parse_poly(const json& j, const std::vector<std::string>& vars, const std::string& where) {
  AffinePoly p(vars);
  if (j.is_number()) {
    p.add_term(Exponent(vars.size(), 0), j.get<double>());
    return p;
  }
  if (!j.is_array()) throw ConfigError(where + " must be a number or a list of {exponent, value} terms");
  for (const auto& term : j) {
    allow_keys(term, where + " term", {"exponent", "value"});
    const auto e = get<std::vector<int>>(term, "exponent", where);
    if (e.size() != vars.size()) throw ConfigError(where + ": exponent length differs from the variable count");
    for (int x : e) {
      if (x < 0) throw ConfigError(where + ": negative exponent");
    }
    p.add_term(e, get<double>(term, "value", where));
  }
  return p;
}

std::vector<AffinePoly> parse_poly_list(const json& obj, const char* key, const std::vector<std::string>& vars,
                                        const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_array()) throw ConfigError(where + "." + key + " must be a list");
  std::vector<AffinePoly> out;
  int i = 0;
  for (const auto& c : obj.at(key)) out.push_back(parse_poly(c, vars, where + "." + key + "[" + std::to_string(i++) + "]"));
  return out;
}

PlantSpec parse_plant(const json& j) {
  const std::string where = "plant";
  if (!j.is_object()) throw ConfigError("plant must be an object");
  const auto kind = get<std::string>(j, "kind", where);
  PlantSpec spec;
  if (kind == "benchmark") {
    allow_keys(j, where, {"kind"});
    spec.kind = PlantKind::benchmark;
    spec.theta = benchmark_theta_plant();
    spec.tf = benchmark_lambda_plant();
  } else if (kind == "transfer_function") {
    allow_keys(j, where, {"kind", "lambda_vars", "num", "den"});
    spec.kind = PlantKind::transfer_function;
    std::vector<std::string> vars;
    get_opt(j, "lambda_vars", where, vars);
    spec.tf.lambda_vars = vars;
    spec.tf.num = parse_poly_list(j, "num", vars, where);
    spec.tf.den = parse_poly_list(j, "den", vars, where);
  } else if (kind == "markov") {
    allow_keys(j, where, {"kind", "lambda_vars", "markov"});
    spec.kind = PlantKind::markov;
    std::vector<std::string> vars;
    get_opt(j, "lambda_vars", where, vars);
    spec.lifted.lambda_vars = vars;
    spec.lifted.markov = parse_poly_list(j, "markov", vars, where);
    spec.lifted.N = static_cast<int>(spec.lifted.markov.size());
  } else if (kind == "theta_polytope") {
    allow_keys(j, where, {"kind", "theta_vars", "vertices", "num", "den"});
    spec.kind = PlantKind::theta_polytope;
    ThetaTransferFunction t;
    t.theta_vars = get<std::vector<std::string>>(j, "theta_vars", where);
    t.vertices = get<std::vector<std::vector<double>>>(j, "vertices", where);
    t.num = parse_poly_list(j, "num", t.theta_vars, where);
    t.den = parse_poly_list(j, "den", t.theta_vars, where);
    spec.theta = t;
    spec.tf = simplexify(t);
  } else {
    throw ConfigError("plant.kind must be one of benchmark, transfer_function, markov, theta_polytope");
  }
  return spec;
}

FilterSpec parse_filter(const json& j, const std::string& where) {
  allow_keys(j, where, {"lead", "lag", "values", "free", "bounds", "causal"});
  FilterSpec f;
  if (j.contains("lead")) f.lead = get<int>(j, "lead", where);
  if (j.contains("lag")) f.lag = get<int>(j, "lag", where);
  if (j.contains("values")) f.values = get<std::vector<double>>(j, "values", where);
  if (j.contains("free")) f.free = get<std::vector<bool>>(j, "free", where);
  get_opt(j, "causal", where, f.causal);
  if (j.contains("bounds")) {
    for (const auto& b : j.at("bounds")) {
      allow_keys(b, where + ".bounds", {"index", "lo", "hi"});
      FirBound fb{get<int>(b, "index", where), get<double>(b, "lo", where), get<double>(b, "hi", where)};
      if (!(fb.lo <= fb.hi)) throw ConfigError(where + ".bounds: lo exceeds hi");
      f.bounds.push_back(fb);
    }
  }
  return f;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  allow_keys(j, "config", {"mode", "plant", "q", "l", "synthesis", "verify", "simulate", "output"});
  RunConfig cfg;
  try {
    get_opt(j, "mode", "config", cfg.mode);
    if (j.contains("plant")) cfg.plant = parse_plant(j.at("plant"));
    if (j.contains("q")) cfg.q = parse_filter(j.at("q"), "q");
    if (j.contains("l")) cfg.l = parse_filter(j.at("l"), "l");
    if (j.contains("synthesis")) {
      const auto& s = j.at("synthesis");
      allow_keys(s, "synthesis", {"epsilon", "k_min", "k_max", "k_tol", "fixed_k", "rounds", "feas_tol", "gap_tol", "max_iter"});
      get_opt(s, "epsilon", "synthesis", cfg.polya.epsilon);
      get_opt(s, "k_min", "synthesis", cfg.polya.k_min);
      get_opt(s, "k_max", "synthesis", cfg.polya.k_max);
      get_opt(s, "k_tol", "synthesis", cfg.polya.k_tol);
      get_opt(s, "fixed_k", "synthesis", cfg.polya.fixed_k);
      get_opt(s, "rounds", "synthesis", cfg.rounds);
      get_opt(s, "feas_tol", "synthesis", cfg.polya.sdp.feas_tol);
      get_opt(s, "gap_tol", "synthesis", cfg.polya.sdp.gap_tol);
      get_opt(s, "max_iter", "synthesis", cfg.polya.sdp.max_iter);
    }
    if (j.contains("verify")) {
      const auto& v = j.at("verify");
      allow_keys(v, "verify", {"lattice_steps", "random_points", "n_omega", "seed"});
      get_opt(v, "lattice_steps", "verify", cfg.verify.lattice_steps);
      get_opt(v, "random_points", "verify", cfg.verify.random_points);
      get_opt(v, "n_omega", "verify", cfg.verify.n_omega);
      get_opt(v, "seed", "verify", cfg.verify.seed);
    }
    if (j.contains("simulate")) {
      const auto& s = j.at("simulate");
      allow_keys(s, "simulate", {"N", "trials", "runs", "reference", "disturbance_amplitude", "seed"});
      get_opt(s, "N", "simulate", cfg.simulate.N);
      get_opt(s, "trials", "simulate", cfg.simulate.trials);
      get_opt(s, "runs", "simulate", cfg.simulate.runs);
      if (s.contains("reference")) {
        const auto& r = s.at("reference");
        if (r.is_string()) {
          if (r.get<std::string>() != "sine") throw ConfigError("simulate.reference must be \"sine\" or a list of numbers");
        } else {
          cfg.simulate.reference = get<std::vector<double>>(s, "reference", "simulate");
        }
      }
      get_opt(s, "disturbance_amplitude", "simulate", cfg.simulate.disturbance_amplitude);
      get_opt(s, "seed", "simulate", cfg.simulate.seed);
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      allow_keys(o, "output", {"dir"});
      get_opt(o, "dir", "output", cfg.out_dir);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid plant or filter: ") + e.what());
  }
  if (!(cfg.polya.epsilon > 0.0)) throw ConfigError("synthesis.epsilon must be positive");
  if (cfg.polya.k_min < 0 || cfg.polya.k_max < cfg.polya.k_min) throw ConfigError("synthesis.k_min/k_max out of order");
  if (cfg.rounds < 1) throw ConfigError("synthesis.rounds must be at least 1");
  if (cfg.verify.n_omega < 1 || cfg.verify.random_points < 0 || cfg.verify.lattice_steps < 1) {
    throw ConfigError("verify grid sizes must be positive");
  }
  if (cfg.simulate.N < 1 || cfg.simulate.trials < 1 || cfg.simulate.runs < 1) {
    throw ConfigError("simulate sizes must be positive");
  }
  if (!cfg.simulate.reference.empty() && static_cast<int>(cfg.simulate.reference.size()) != cfg.simulate.N) {
    throw ConfigError("simulate.reference length differs from simulate.N");
  }
  if (!(cfg.simulate.disturbance_amplitude >= 0.0)) throw ConfigError("simulate.disturbance_amplitude must be non-negative");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

NoncausalFir resolve_fir(const std::optional<FilterSpec>& spec, bool is_q) {
  if (!spec) return is_q ? NoncausalFir::unit() : NoncausalFir::decision(0, 0);
  NoncausalFir f;
  f.lead = spec->lead.value_or(0);
  if (spec->lag) {
    f.lag = *spec->lag;
  } else if (spec->values) {
    f.lag = static_cast<int>(spec->values->size()) - 1 - f.lead;
  }
  if (f.lead < 0 || f.lag < 0) throw ConfigError("filter lead/lag must be non-negative");
  const auto n = static_cast<std::size_t>(f.size());
  if (spec->values) {
    if (spec->values->size() != n) throw ConfigError("filter values length differs from lead + lag + 1");
    f.values = *spec->values;
  } else if (is_q && n == 1) {
    f.values = {1.0};
  } else {
    f.values.assign(n, 0.0);
  }
  if (spec->free) {
    if (spec->free->size() != n) throw ConfigError("filter free-mask length differs from lead + lag + 1");
    f.free = *spec->free;
  } else {
    f.free.assign(n, !is_q);
  }
  return f;
}

LiftedFilter resolve_lifted(const std::optional<FilterSpec>& spec, int N, bool is_q) {
  if (!spec) return is_q ? LiftedFilter::identity(N) : LiftedFilter::decision(N, true);
  if (spec->lead || spec->lag) throw ConfigError("lead/lag are frequency-domain filter settings");
  if (!spec->bounds.empty()) throw ConfigError("bounds are not supported for lifted filters");
  LiftedFilter f = is_q ? LiftedFilter::identity(N) : LiftedFilter::decision(N, spec->causal);
  const auto n = static_cast<std::size_t>(2 * N - 1);
  if (spec->values) {
    if (spec->values->size() != n) throw ConfigError("lifted filter values need 2N-1 entries (c_-(N-1) .. c_(N-1))");
    f.values = *spec->values;
  }
  if (spec->free) {
    if (spec->free->size() != n) throw ConfigError("lifted filter free-mask needs 2N-1 entries");
    f.free = *spec->free;
  }
  return f;
}

}  // namespace ilcsos
