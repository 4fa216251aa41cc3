#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cqed/analytics.hpp"
#include "cqed/config.hpp"
#include "cqed/io.hpp"
#include "cqed/scenarios.hpp"
#include "cqed/trajectory.hpp"

namespace {

using namespace cqed;

enum Exit { ok = 0, tolerance = 1, usage = 2, resource = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by the subcommands that build a RunConfig.
struct Common {
  std::string preset{"set1"};
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out;

  void add(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "Named parameter set (set1, set2)");
    cmd->add_option("--config", config, "key = value file; applied after the preset");
    cmd->add_option("--set", overrides, "Extra key=value override (repeatable)");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--workers", workers, "Worker threads");
    cmd->add_option("--out", out, "Output directory (required)");
  }

  RunConfig build(const CLI::App* cmd) const {
    if (out.empty()) throw UsageError("--out is required");
    if (!config.empty() && cmd->count("--preset")) {
      throw UsageError("--preset and --config are mutually exclusive; put preset = ... in the file");
    }
    RunConfig cfg = config.empty() ? default_config(preset) : load_config(config);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      set_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.trajectory.seed = *seed;
    if (workers) cfg.trajectory.workers = *workers;
    return cfg;
  }
};

void print(const Summary& s) {
  for (const auto& [k, v] : s) std::cout << k << " = " << v << '\n';
}

std::string num(double v) { return format_double(v); }

int analytic(const Common& common, const CLI::App* cmd, const std::optional<std::string>& formula,
             std::optional<double> tau_max, std::size_t tau_points, std::optional<std::size_t> samples) {
  RunConfig cfg = common.build(cmd);
  if (formula) set_value(cfg, "formula", *formula);
  if (tau_max) cfg.trajectory.tau_max = *tau_max;
  if (cmd->count("--tau-points")) cfg.trajectory.tau_points = tau_points;
  if (samples) cfg.samples = *samples;
  const PhysicalParameters& p = cfg.physics;
  validate(p);
  if (cfg.trajectory.tau_points < 2) throw UsageError("--tau-points must be >= 2");
  const auto tau = uniform_grid(cfg.trajectory.tau_max, cfg.trajectory.tau_points);

  Summary summary{{"formula", cfg.formula}};
  G2Curve curve;
  if (cfg.formula == "ideal") {
    curve = g2_ideal(p, tau);
    const auto d = derive(p);
    summary.insert(summary.end(), {{"two_c", num(d.two_c)},
                                   {"antibunch_scale", num(d.antibunch_scale)},
                                   {"decay_time_ns", num(d.decay_time * 1e9)},
                                   {"omega_rabi_over_kappa", num(d.omega_rabi / p.kappa)},
                                   {"overdamped", d.overdamped ? "true" : "false"}});
  } else if (cfg.formula == "fixed") {
    const auto config = mc_configuration(p, cfg.trajectory.seed, 0);
    curve = g2_fixed(config, p, tau);
    summary.insert(summary.end(), {{"atoms", std::to_string(config.positions.size())},
                                   {"n_eff", num(config.n_eff)},
                                   {"c_sum", num(config.c_sum)}});
  } else {
    const auto scheme = *parse_scheme(cfg.formula);
    if (cfg.samples == 0) throw UsageError("--samples must be >= 1");
    const auto avg = g2_mc_average(p, scheme, cfg.samples, tau, cfg.trajectory.seed, cfg.trajectory.workers);
    curve = avg.curve;
    summary.insert(summary.end(), {{"samples", std::to_string(avg.samples)},
                                   {"limit", num(avg.limit)},
                                   {"mean_atoms", num(avg.mean_atoms)},
                                   {"mean_n_eff", num(avg.mean_n_eff)}});
  }
  summary.emplace_back("g2_0", num(curve.g2.front()));
  summary.emplace_back("g2_tau_max", num(curve.g2.back()));

  OutputDir dir(common.out);
  dir.g2(curve);
  dir.summary(summary);
  dir.manifest(cfg);
  print(summary);
  return ok;
}

struct SimulateFlags {
  std::optional<std::string> mode;
  std::optional<double> tilt_mrad;
  std::optional<std::string> truncation;
  std::optional<std::string> cavity;
  std::optional<double> duration;
  std::optional<double> dt;
  std::optional<unsigned> trajectories;
  std::optional<double> delta_a_kappa;
  std::optional<double> delta_c_kappa;
  std::optional<double> speed_scale;
  std::optional<double> n_eff;
  double scale{1.0};
  bool log_beam{false};
};

int simulate(const Common& common, const CLI::App* cmd, const SimulateFlags& f) {
  RunConfig cfg = common.build(cmd);
  if (f.mode) set_value(cfg, "sim_mode", *f.mode);
  if (f.tilt_mrad) cfg.physics.tilt = *f.tilt_mrad * 1e-3;
  if (f.truncation) set_value(cfg, "truncation", *f.truncation);
  if (f.cavity) set_value(cfg, "cavity_kind", *f.cavity);
  if (f.duration) cfg.trajectory.duration = *f.duration;
  if (f.dt) cfg.trajectory.dt = *f.dt;
  if (f.trajectories) cfg.trajectory.trajectories = *f.trajectories;
  if (f.delta_a_kappa) cfg.physics.delta_a = *f.delta_a_kappa * cfg.physics.kappa;
  if (f.delta_c_kappa) cfg.physics.delta_c = *f.delta_c_kappa * cfg.physics.kappa;
  if (f.speed_scale) cfg.physics.speed_scale = *f.speed_scale;
  if (f.n_eff) cfg.physics.n_eff_bar = *f.n_eff;
  std::string comment;
  if (f.scale != 1.0) {
    if (!(f.scale > 0.0)) throw UsageError("--scale must be > 0");
    cfg.physics.n_eff_bar *= f.scale;
    cfg.trajectory.duration *= f.scale;
    comment = "--scale " + num(f.scale) + " applied; entries below are the effective values";
  }
  if (cfg.sim_mode == "g2") {
    cfg.trajectory.mode = RunMode::full_quantum;
  } else if (cfg.sim_mode == "semiclassical") {
    cfg.trajectory.mode = RunMode::semiclassical;
  } else {
    cfg.trajectory.mode = RunMode::semiclassical_adiabatic;
  }
  const PhysicalParameters& p = cfg.physics;
  const TrajectoryConfig resolved = resolve(p, cfg.trajectory);

  OutputDir dir(common.out);
  Summary summary{{"mode", cfg.sim_mode}, {"dt_kappa", num(resolved.dt)}};
  if (cfg.sim_mode == "g2") {
    const G2Result r = run_g2(p, cfg.trajectory);
    dir.g2(r.curve);
    if (r.paired_reference) dir.g2(*r.paired_reference, "g2_paired.csv");
    dir.jumps(r.jumps);
    summary.insert(summary.end(), {{"samples", std::to_string(r.samples)},
                                   {"g2_0", num(r.curve.g2.front())},
                                   {"g2_0_stderr", num(r.curve.std_error.front())},
                                   {"mean_atoms", num(r.mean_atoms)},
                                   {"mean_photon_number", num(r.mean_photon_number)},
                                   {"forwards_jumps", std::to_string(r.forwards_jumps)},
                                   {"side_jumps", std::to_string(r.side_jumps)},
                                   {"vetoed_jumps", std::to_string(r.vetoed_jumps)},
                                   {"excited_exits", std::to_string(r.excited_exits)}});
  } else if (cfg.sim_mode == "beam-stats") {
    const BeamStats s = run_beam_stats(p, cfg.trajectory, f.log_beam);
    if (f.log_beam) dir.beam(s.events);
    std::ofstream counts(dir.file("counts.csv"), std::ios::binary);
    counts << "t_kappa,atoms\n";
    for (std::size_t i = 0; i < s.counts.size(); ++i) counts << num(s.t_kappa[i]) << ',' << num(s.counts[i]) << '\n';
    summary.insert(summary.end(), {{"mean_count", num(s.mean_count)},
                                   {"count_stderr", num(s.count_stderr)},
                                   {"predicted_count", num(s.predicted_count)},
                                   {"exit_rate", num(s.exit_rate)},
                                   {"injection_rate", num(s.injection_rate)},
                                   {"z_constant", s.z_constant ? "true" : "false"}});
  } else {
    const auto series = run_semiclassical(p, cfg.trajectory);
    dir.series(series);
    std::vector<double> pooled;
    double atoms = 0.0;
    for (const auto& s : series) {
      pooled.insert(pooled.end(), s.photon_number.begin(), s.photon_number.end());
      atoms += s.mean_atoms / static_cast<double>(series.size());
    }
    const Histogram h = photon_histogram(pooled, cfg.hist_bins);
    dir.hist(h);
    const auto tau = uniform_grid(cfg.trajectory.tau_max, cfg.trajectory.tau_points);
    const G2Curve c = g2_semiclassical(series, tau, p.kappa);
    dir.g2(c);
    summary.insert(summary.end(), {{"g2_0", num(c.g2.front())},
                                   {"mean_photon_number", num(h.mean)},
                                   {"relative_variance", num(h.relative_variance)},
                                   {"mean_atoms", num(atoms)}});
  }
  dir.summary(summary);
  dir.manifest(cfg, comment);
  print(summary);
  return ok;
}

int oracle_check(const std::string& scenario, const std::string& out, const ScenarioOptions& opts) {
  if (out.empty()) throw UsageError("--out is required");
  const ScenarioResult r = run_scenario(scenario, opts);
  OutputDir dir(out);
  dir.g2(r.trajectory.curve, "g2_trajectory.csv");
  for (const auto& [label, curve] : r.references) dir.g2(curve, "g2_" + label + ".csv");
  const Summary summary{{"scenario", r.name},
                        {"samples", std::to_string(r.trajectory.samples)},
                        {"max_deviation", num(r.max_deviation)},
                        {"tolerance", num(r.tolerance)},
                        {"passed", r.passed ? "true" : "false"}};
  dir.summary(summary);
  print(summary);
  return r.passed ? ok : tolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity QED photon-correlation simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CQED_VERSION));

  Common analytic_opts;
  auto* an = app.add_subcommand("analytic", "Closed-form and Monte-Carlo averaged g2(tau)");
  analytic_opts.add(an);
  std::optional<std::string> formula;
  std::optional<double> tau_max;
  std::size_t tau_points = 201;
  std::optional<std::size_t> samples;
  an->add_option("--formula", formula, "ideal, fixed, mc-naive or mc-weighted");
  an->add_option("--tau-max", tau_max, "Largest delay, 1/kappa");
  an->add_option("--tau-points", tau_points, "Points on the delay grid");
  an->add_option("--samples", samples, "Monte-Carlo configurations");

  Common sim_opts;
  SimulateFlags flags;
  auto* sim = app.add_subcommand("simulate", "Quantum-trajectory and semiclassical runs with a Monte-Carlo beam");
  sim_opts.add(sim);
  sim->add_option("--mode", flags.mode, "g2, semiclassical, semiclassical-adiabatic or beam-stats");
  sim->add_option("--tilt-mrad", flags.tilt_mrad, "Beam tilt, mrad");
  sim->add_option("--truncation", flags.truncation, "one-quantum, two-quanta or three-quanta");
  sim->add_option("--cavity", flags.cavity, "standing-wave or ring");
  sim->add_option("--duration", flags.duration, "Post-warmup time summed over trajectories, 1/kappa");
  sim->add_option("--dt", flags.dt, "Time step, 1/kappa");
  sim->add_option("--trajectories", flags.trajectories, "Independent trajectories");
  sim->add_option("--delta-a-kappa", flags.delta_a_kappa, "Atomic detuning, units of kappa");
  sim->add_option("--delta-c-kappa", flags.delta_c_kappa, "Cavity detuning, units of kappa");
  sim->add_option("--speed-scale", flags.speed_scale, "Multiplies every atomic speed");
  sim->add_option("--n-eff", flags.n_eff, "Mean effective atom number");
  sim->add_option("--scale", flags.scale, "Multiplies the atom number and the duration");
  sim->add_flag("--beam-log", flags.log_beam, "Write beam.csv (beam-stats mode)");

  std::string scenario;
  std::string oracle_out;
  ScenarioOptions scenario_opts;
  auto* oc = app.add_subcommand("oracle-check", "Trajectory engine against independent reference results");
  oc->add_option("--scenario", scenario, "empty-cavity, one-atom, two-atom or ring-compensation-toy")->required();
  oc->add_option("--out", oracle_out, "Output directory (required)");
  oc->add_option("--samples", scenario_opts.samples, "Enforced-jump samples");
  oc->add_option("--seed", scenario_opts.seed, "Master seed");
  oc->add_option("--workers", scenario_opts.workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*an) return analytic(analytic_opts, an, formula, tau_max, tau_points, samples);
    if (*sim) return simulate(sim_opts, sim, flags);
    if (*oc) return oracle_check(scenario, oracle_out, scenario_opts);
  } catch (const ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return resource;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tolerance;
  }
  return usage;
}
