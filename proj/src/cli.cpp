#include "ilcsos/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ilcsos/benchmark_plant.hpp"
#include "ilcsos/config.hpp"
#include "ilcsos/errors.hpp"
#include "ilcsos/simulate.hpp"
#include "ilcsos/verify.hpp"
#include "json.hpp"

namespace ilcsos {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& dir, ojson j) {
  j["timestamp"] = utc_timestamp();
  write_file(dir / "result.json", j.dump(2) + "\n");
}

ojson synthesis_json(const SynthesisResult& r) {
  ojson j;
  j["gamma"] = r.gamma;
  j["eta"] = r.eta;
  ojson gains = ojson::object();
  for (std::size_t i = 0; i < r.gains.size(); ++i) gains[r.gain_names[i]] = r.gains[i];
  j["gains"] = gains;
  j["k"] = r.k_used;
  j["k_values"] = r.k_values;
  j["eta_per_k"] = r.eta_per_k;
  j["certificate"] = {{"residual", r.certificate_residual},
                      {"scale", r.certificate_scale},
                      {"min_eigenvalue", r.certificate_min_eigenvalue},
                      {"pass", r.certificate_pass}};
  j["flags"] = {{"not_monotone", r.not_monotone},
                {"infeasible_all_k", r.infeasible_all_k},
                {"k_trend_violation", r.k_trend_violation}};
  j["solver"] = {{"status", to_string(r.solver.status)},
                 {"iterations", r.solver.iterations},
                 {"gap", r.solver.gap},
                 {"primal_residual", r.solver.primal_residual},
                 {"dual_residual", r.solver.dual_residual},
                 {"used_bisection", r.solver.used_bisection},
                 {"message", r.solver.message},
                 {"gram_dim", r.gram_dim},
                 {"equalities", r.num_equalities}};
  j["diagnostics"] = r.diagnostics;
  return j;
}

int synthesis_status(const SynthesisResult& r, std::ostream& log) {
  if (!r.certificate_pass) {
    log << "certificate check failed (residual " << r.certificate_residual << "); refusing to report gamma\n";
    return kExitSolver;
  }
  if (r.not_monotone) {
    log << "gamma* = " << r.gamma << " >= 1: monotone convergence not certified\n";
    return kExitNotMonotone;
  }
  return kExitOk;
}

void log_result(const SynthesisResult& r, std::ostream& log) {
  log << "gamma* = " << r.gamma << " (k = " << r.k_used << ")";
  for (std::size_t i = 0; i < r.gains.size(); ++i) log << "  " << r.gain_names[i] << " = " << r.gains[i];
  log << "\n";
}

const PlantSpec& require_plant(const RunConfig& cfg) {
  if (!cfg.plant) throw ConfigError("config has no plant");
  return *cfg.plant;
}

std::vector<double> fir_decision_values(const NoncausalFir& f, const FreqDecisions& dec, const SynthesisResult& r,
                                        const std::vector<int>& ids) {
  std::vector<double> v = f.values;
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] >= 0) v[t] = r.solver.scalar_values[static_cast<std::size_t>(ids[t])];
  }
  (void)dec;
  return v;
}

ojson lambda_json(const SimplexPoint& p) { return ojson(std::vector<double>(p.begin(), p.end())); }

int mode_synth_time(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto& plant = require_plant(cfg);
  if (!plant.time_domain()) throw ConfigError("synth-time needs a plant of kind \"markov\"");
  TimeSynthesisProblem pb{plant.lifted, resolve_lifted(cfg.q, plant.lifted.N, true),
                          resolve_lifted(cfg.l, plant.lifted.N, false), cfg.polya};
  const SynthesisResult r = synth_time(pb);
  ojson j;
  j["mode"] = "synth-time";
  j["N"] = plant.lifted.N;
  j["result"] = synthesis_json(r);
  const int status = synthesis_status(r, log);
  if (status != kExitSolver) {
    const TimeDecisions dec = make_time_decisions(pb);
    std::vector<double> lv = pb.lfilter.values;
    for (std::size_t t = 0; t < dec.l_ids.size(); ++t) {
      if (dec.l_ids[t] >= 0) lv[t] = r.solver.scalar_values[static_cast<std::size_t>(dec.l_ids[t])];
    }
    const SampleGrid grid = SampleGrid::make(plant.lifted.n_lambda(), cfg.verify.seed, cfg.verify.lattice_steps,
                                             cfg.verify.random_points, 1);
    const auto s = sampled_gamma_time(plant.lifted, pb.qfilter.matrix(), pb.lfilter.matrix(lv), grid);
    j["sampled_gamma"] = {{"gamma_hat", s.gamma}, {"lambda", lambda_json(s.lambda)}};
    log_result(r, log);
  } else {
    j["result"].erase("gamma");
    j["result"].erase("gains");
  }
  write_json(out, j);
  return status;
}

int mode_synth_freq(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto& plant = require_plant(cfg);
  if (plant.time_domain()) throw ConfigError("synth-freq needs a transfer-function plant");
  FreqSynthesisProblem pb;
  pb.plant = plant.tf;
  pb.qfilter = resolve_fir(cfg.q, true);
  pb.lfilter = resolve_fir(cfg.l, false);
  if (cfg.q) pb.q_bounds = cfg.q->bounds;
  if (cfg.l) pb.l_bounds = cfg.l->bounds;
  pb.options = cfg.polya;

  ojson j;
  j["mode"] = "synth-freq";
  SynthesisResult r;
  NoncausalFir qf = pb.qfilter;
  NoncausalFir lf = pb.lfilter;
  if (cfg.rounds > 1) {
    const auto rounds = alternate_LQ(pb, cfg.rounds);
    ojson trace = ojson::array();
    for (const auto& rd : rounds) {
      trace.push_back({{"optimized", rd.optimized_q ? "q" : "l"},
                       {"gamma", rd.result.gamma},
                       {"q", rd.q_values},
                       {"l", rd.l_values},
                       {"certificate_pass", rd.result.certificate_pass}});
    }
    j["alternation"] = trace;
    r = rounds.back().result;
    qf.values = rounds.back().q_values;
    lf.values = rounds.back().l_values;
  } else {
    r = pb.plant.n_lambda() == 0 ? synth_freq_nominal(pb) : synth_freq_robust(pb);
    const FreqDecisions dec = make_freq_decisions(pb);
    qf.values = fir_decision_values(pb.qfilter, dec, r, dec.q_ids);
    lf.values = fir_decision_values(pb.lfilter, dec, r, dec.l_ids);
  }
  j["result"] = synthesis_json(r);
  j["q"] = {{"lead", qf.lead}, {"values", qf.values}};
  j["l"] = {{"lead", lf.lead}, {"values", lf.values}};
  const int status = synthesis_status(r, log);
  if (status != kExitSolver) {
    const SampleGrid grid = SampleGrid::make(pb.plant.n_lambda(), cfg.verify.seed, cfg.verify.lattice_steps,
                                             cfg.verify.random_points, cfg.verify.n_omega);
    const auto s = sampled_gamma_freq(pb.plant, qf, lf, grid);
    j["sampled_gamma"] = {{"gamma_hat", s.gamma}, {"lambda", lambda_json(s.lambda)}, {"omega", s.omega}};
    log_result(r, log);
  } else {
    j["result"].erase("gamma");
    j["result"].erase("gains");
  }
  write_json(out, j);
  return status;
}

int mode_verify(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto& plant = require_plant(cfg);
  if (!cfg.l || !cfg.l->values) throw ConfigError("verify needs numeric learning filter values (l.values)");
  ojson j;
  j["mode"] = "verify";
  std::ostringstream csv;
  csv.precision(17);
  double gamma_hat = 0.0;
  if (plant.time_domain()) {
    const int N = plant.lifted.N;
    const LiftedFilter q = resolve_lifted(cfg.q, N, true);
    const LiftedFilter l = resolve_lifted(cfg.l, N, false);
    plant.lifted.validate();
    const SampleGrid grid = SampleGrid::make(plant.lifted.n_lambda(), cfg.verify.seed, cfg.verify.lattice_steps,
                                             cfg.verify.random_points, 1);
    csv << "point,gamma";
    for (const auto& v : plant.lifted.lambda_vars) csv << ',' << v;
    csv << '\n';
    TimeGammaSample best{-1.0, {}};
    for (std::size_t i = 0; i < grid.lambda_points.size(); ++i) {
      SampleGrid one = grid;
      one.lambda_points = {grid.lambda_points[i]};
      const auto s = sampled_gamma_time(plant.lifted, q.matrix(), l.matrix(), one);
      csv << i << ',' << s.gamma;
      for (double x : s.lambda) csv << ',' << x;
      csv << '\n';
      if (s.gamma > best.gamma) best = s;
    }
    gamma_hat = best.gamma;
    j["domain"] = "time";
    j["gamma_hat"] = best.gamma;
    j["lambda"] = lambda_json(best.lambda);
    j["grid"] = {{"lambda_points", grid.lambda_points.size()}, {"seed", grid.seed}};
  } else {
    const NoncausalFir q = resolve_fir(cfg.q, true);
    const NoncausalFir l = resolve_fir(cfg.l, false);
    const SampleGrid grid = SampleGrid::make(plant.tf.n_lambda(), cfg.verify.seed, cfg.verify.lattice_steps,
                                             cfg.verify.random_points, cfg.verify.n_omega);
    csv << "point,gamma,omega";
    for (const auto& v : plant.tf.lambda_vars) csv << ',' << v;
    csv << '\n';
    FreqGammaSample best{-1.0, {}, 0.0};
    for (std::size_t i = 0; i < grid.lambda_points.size(); ++i) {
      SampleGrid one = grid;
      one.lambda_points = {grid.lambda_points[i]};
      const auto s = sampled_gamma_freq(plant.tf, q, l, one);
      csv << i << ',' << s.gamma << ',' << s.omega;
      for (double x : s.lambda) csv << ',' << x;
      csv << '\n';
      if (s.gamma > best.gamma) best = s;
    }
    const JuryReport jury = jury_stability(plant.tf);
    gamma_hat = best.gamma;
    j["domain"] = "frequency";
    j["gamma_hat"] = best.gamma;
    j["lambda"] = lambda_json(best.lambda);
    j["omega"] = best.omega;
    j["jury"] = {{"stable", jury.stable}, {"worst_margin", jury.worst_margin}};
    j["grid"] = {{"lambda_points", grid.lambda_points.size()}, {"omega_points", grid.freq_points.size()}, {"seed", grid.seed}};
  }
  j["monotone"] = gamma_hat < 1.0;
  write_file(out / "trace.csv", csv.str());
  write_json(out, j);
  log << "sampled gamma = " << gamma_hat << "\n";
  return gamma_hat < 1.0 ? kExitOk : kExitNotMonotone;
}

int mode_simulate(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto& plant = require_plant(cfg);
  if (!cfg.l || !cfg.l->values) throw ConfigError("simulate needs numeric learning filter values (l.values)");
  const auto& sim = cfg.simulate;
  const int N = plant.time_domain() ? plant.lifted.N : sim.N;
  if (!sim.reference.empty() && static_cast<int>(sim.reference.size()) != N) {
    throw ConfigError("simulate.reference length differs from the trial length");
  }
  Eigen::VectorXd yd(N);
  for (int k = 0; k < N; ++k) {
    yd(k) = sim.reference.empty() ? std::sin(2.0 * std::numbers::pi * (k + 1) / N) : sim.reference[static_cast<std::size_t>(k)];
  }
  Eigen::MatrixXd Q, L;
  bool truncated = false;
  int n_lambda = 0;
  if (plant.time_domain()) {
    plant.lifted.validate();
    Q = resolve_lifted(cfg.q, N, true).matrix();
    L = resolve_lifted(cfg.l, N, false).matrix();
    n_lambda = plant.lifted.n_lambda();
  } else {
    plant.tf.validate();
    bool tq = false;
    Q = lifted_fir(resolve_fir(cfg.q, true), N, &tq);
    L = lifted_fir(resolve_fir(cfg.l, false), N, &truncated);
    truncated = truncated || tq;
    n_lambda = plant.tf.n_lambda();
  }
  const auto lambdas = n_lambda == 0 ? std::vector<SimplexPoint>(static_cast<std::size_t>(sim.runs))
                                     : simplex_random(n_lambda, sim.runs, sim.seed);
  ojson runs = ojson::array();
  double worst_ratio = 0.0;
  bool all_monotone = true;
  std::string first_csv;
  fs::create_directories(out / "traces");
  for (int run = 0; run < sim.runs; ++run) {
    const auto& lam = lambdas[static_cast<std::size_t>(run)];
    const Eigen::MatrixXd P = plant.time_domain() ? plant.lifted.lifted_at(lam)
                                                  : lifted_toeplitz(markov_from_transfer_function(
                                                        plant.tf.num_at(lam), plant.tf.den_at(lam), N));
    TrialConfig tc;
    tc.y_d = yd;
    tc.d = random_disturbance(N, sim.disturbance_amplitude, sim.seed * 1000003ULL + static_cast<std::uint64_t>(run));
    tc.trials = sim.trials;
    TrialTrace tr = run_ilc(P, Q, L, tc);
    tr.truncated_noncausal = truncated;
    double max_ratio = 0.0;
    for (double r : tr.contraction_ratios) max_ratio = std::max(max_ratio, r);
    bool monotone = true;
    for (std::size_t t = 0; t + 1 < tr.distance_to_limit.size(); ++t) {
      if (tr.distance_to_limit[t] > kRatioFloor && !(tr.distance_to_limit[t + 1] < tr.distance_to_limit[t])) monotone = false;
    }
    worst_ratio = std::max(worst_ratio, max_ratio);
    all_monotone = all_monotone && monotone;
    const std::string csv = trace_csv(tr);
    if (run == 0) first_csv = csv;
    std::ostringstream name;
    name << "run_" << std::setw(3) << std::setfill('0') << run << ".csv";
    write_file(out / "traces" / name.str(), csv);
    ojson theta = nullptr;
    if (plant.theta) {
      std::vector<double> th(plant.theta->theta_vars.size(), 0.0);
      for (std::size_t v = 0; v < lam.size(); ++v) {
        for (std::size_t i = 0; i < th.size(); ++i) th[i] += lam[v] * plant.theta->vertices[v][i];
      }
      theta = th;
    }
    runs.push_back({{"run", run},
                    {"lambda", lambda_json(lam)},
                    {"theta", theta},
                    {"max_ratio", max_ratio},
                    {"initial_error_norm", tr.error_norms.front()},
                    {"final_error_norm", tr.error_norms.back()},
                    {"e_infinity_norm", tr.e_infinity.norm()},
                    {"monotone", monotone}});
  }
  write_file(out / "trace.csv", first_csv);
  ojson j;
  j["mode"] = "simulate";
  j["N"] = N;
  j["trials"] = sim.trials;
  j["seed"] = sim.seed;
  j["disturbance_amplitude"] = sim.disturbance_amplitude;
  j["truncated_noncausal"] = truncated;
  j["max_ratio"] = worst_ratio;
  j["monotone"] = all_monotone;
  j["runs"] = runs;
  write_json(out, j);
  log << "simulated " << sim.runs << " runs x " << sim.trials << " trials; worst contraction ratio " << worst_ratio
      << (truncated ? " (truncated non-causal)" : "") << "\n";
  return kExitOk;
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

std::string gains_text(const SynthesisResult& r) {
  std::string s = "(";
  for (std::size_t i = 0; i < r.gains.size(); ++i) s += (i ? ", " : "") + fmt(r.gains[i], 4);
  return s + ")";
}

int mode_repro(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  if (cfg.plant || cfg.q || cfg.l) throw ConfigError("repro-paper uses the built-in example plant; remove plant/q/l");
  const UncertainTransferFunction from_theta = simplexify(benchmark_theta_plant());
  const UncertainTransferFunction lam = benchmark_lambda_plant();
  bool agree = from_theta.lambda_vars == lam.lambda_vars && from_theta.num.size() == lam.num.size() &&
               from_theta.den.size() == lam.den.size();
  for (std::size_t i = 0; agree && i < lam.num.size(); ++i) agree = from_theta.num[i].equals(lam.num[i], 1e-12);
  for (std::size_t i = 0; agree && i < lam.den.size(); ++i) agree = from_theta.den[i].equals(lam.den[i], 1e-12);
  if (!agree) {
    log << "theta-form and lambda-form plants disagree\n";
    return kExitSolver;
  }
  const JuryReport jury = jury_stability(lam);
  if (!jury.stable) {
    log << "example plant failed the Jury check\n";
    return kExitSolver;
  }
  const SampleGrid grid = SampleGrid::vertices_and_random(lam.n_lambda(), cfg.verify.random_points, cfg.verify.n_omega,
                                                          cfg.verify.seed);
  ojson entries = ojson::array();
  int status = kExitOk;
  auto run_one = [&](int order, int k) {
    FreqSynthesisProblem pb;
    pb.plant = lam;
    pb.lfilter = NoncausalFir::decision(0, order);
    pb.options = cfg.polya;
    pb.options.k_min = k;
    pb.options.fixed_k = true;
    SynthesisResult r = synth_freq_robust(pb);
    NoncausalFir lf = pb.lfilter;
    lf.values = r.gains;
    const double ghat = sampled_gamma_freq(pb.plant, pb.qfilter, lf, grid).gamma;
    ojson e = synthesis_json(r);
    e["order"] = order;
    e["sampled_gamma"] = ghat;
    entries.push_back(e);
    if (!r.certificate_pass) status = kExitSolver;
    log << "order " << order << " k " << k << ": ";
    log_result(r, log);
    return r;
  };
  std::ostringstream md;
  md << "# Example plant: guaranteed contraction rate and learning gains\n\n";
  md << "Each cell is gamma* / (l_0, ..., l_d) for L(z) = l_0 + l_1 z^-1 + ... + l_d z^-d, Q = 1, epsilon = "
     << cfg.polya.epsilon << ".\n\n";
  md << "| k | order 0 | order 1 | order 2 |\n|---|---|---|---|\n";
  for (int k = 0; k <= 3; ++k) {
    md << "| " << k;
    for (int order = 0; order <= 2; ++order) {
      const SynthesisResult r = run_one(order, k);
      md << " | " << fmt(r.gamma) << " / " << gains_text(r);
    }
    md << " |\n";
  }
  const SynthesisResult r3 = run_one(3, 0);
  md << "\nOrder 3 (k = 0): gamma* = " << fmt(r3.gamma) << ", gains " << gains_text(r3) << "\n";
  md << "\nJury check: stable over the simplex, worst margin " << fmt(jury.worst_margin, 4) << ".\n";
  write_file(out / "table.md", md.str());
  ojson j;
  j["mode"] = "repro-paper";
  j["plant_forms_agree"] = true;
  j["jury"] = {{"stable", jury.stable}, {"worst_margin", jury.worst_margin}};
  j["entries"] = entries;
  write_json(out, j);
  return status;
}

int mode_solve_sdp(const std::string& path, const fs::path& out, std::ostream& log) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  SdpProblem pb;
  try {
    pb = read_sdp_text(in);
  } catch (const InvalidProblem& e) {
    throw ConfigError(e.what());
  }
  const SdpSolution sol = solve(pb);
  write_file(out / "result.json", solution_report(pb, sol) + "\n");
  log << "status " << to_string(sol.status) << ", objective " << sol.objective_value << "\n";
  return sol.status == SdpStatus::optimal ? kExitOk : kExitSolver;
}

}  // namespace

int run_mode(const std::string& mode, const std::string& config_path, const CliOverrides& overrides, std::ostream& log) {
  try {
    fs::path out = overrides.out_dir.value_or("");
    if (mode == "solve-sdp") {
      if (out.empty()) out = ".";
      fs::create_directories(out);
      return mode_solve_sdp(config_path, out, log);
    }
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else if (mode != "repro-paper") {
      throw ConfigError("--config is required for mode " + mode);
    }
    if (!cfg.mode.empty() && cfg.mode != mode) throw ConfigError("config mode '" + cfg.mode + "' differs from '" + mode + "'");
    if (overrides.epsilon) {
      if (!(*overrides.epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
      cfg.polya.epsilon = *overrides.epsilon;
    }
    if (overrides.k_max) {
      if (*overrides.k_max < cfg.polya.k_min) throw ConfigError("--k-max below k_min");
      cfg.polya.k_max = *overrides.k_max;
    }
    if (overrides.seed) {
      cfg.verify.seed = *overrides.seed;
      cfg.simulate.seed = *overrides.seed;
    }
    if (out.empty()) out = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
    fs::create_directories(out);
    if (mode == "synth-time") return mode_synth_time(cfg, out, log);
    if (mode == "synth-freq") return mode_synth_freq(cfg, out, log);
    if (mode == "verify") return mode_verify(cfg, out, log);
    if (mode == "simulate") return mode_simulate(cfg, out, log);
    if (mode == "repro-paper") return mode_repro(cfg, out, log);
    throw ConfigError("unknown mode '" + mode + "'");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const InvalidProblem& e) {
    log << "invalid problem: " << e.what() << "\n";
    return kExitSchema;
  } catch (const EmptyPolytope& e) {
    log << "invalid problem: " << e.what() << "\n";
    return kExitSchema;
  } catch (const DimensionMismatch& e) {
    log << "invalid problem: " << e.what() << "\n";
    return kExitSchema;
  } catch (const VariableMismatch& e) {
    log << "invalid problem: " << e.what() << "\n";
    return kExitSchema;
  } catch (const Error& e) {
    log << "failure: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace ilcsos
