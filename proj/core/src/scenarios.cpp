#include "cqed/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cqed/analytics.hpp"
#include "cqed/dense_oracle.hpp"

namespace cqed {

namespace {

constexpr double tau_max = 4.0;
constexpr std::size_t tau_points = 41;

TrajectoryConfig scenario_config(const ScenarioOptions& opts) {
  TrajectoryConfig cfg;
  cfg.dt = 0.01;
  cfg.tau_max = tau_max;
  cfg.tau_points = tau_points;
  cfg.exclusion_window = 16.0;
  cfg.sample_spacing = 24.0;
  cfg.warmup = 20.0;
  cfg.duration = cfg.sample_spacing * static_cast<double>(opts.samples);
  cfg.min_samples = opts.samples;
  cfg.seed = opts.seed;
  cfg.workers = opts.workers;
  cfg.trajectories = std::max(1u, opts.workers);
  return cfg;
}

double relative_deviation(const G2Curve& a, const G2Curve& ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(a.g2[i] / ref.g2[i] - 1.0));
  return worst;
}

ScenarioResult fixed_atoms(std::string_view name, PhysicalParameters p, FixedAtoms atoms, const ScenarioOptions& opts,
                           const std::vector<Vec3>& oracle_positions, const PhysicalParameters& oracle_params) {
  ScenarioResult r;
  r.name = std::string(name);
  r.params = p;
  r.config = scenario_config(opts);
  r.trajectory = run_g2(p, r.config, atoms);
  const auto& tau = r.trajectory.curve.tau_kappa;
  r.references.emplace_back("dense", dense_g2(oracle_positions, 3, oracle_params, tau));
  r.references.emplace_back("closed-form",
                            g2_fixed(make_configuration(oracle_positions, oracle_params), oracle_params, tau));
  for (const auto& [label, curve] : r.references) {
    r.max_deviation = std::max(r.max_deviation, relative_deviation(r.trajectory.curve, curve));
  }
  r.tolerance = 0.05;
  r.passed = r.max_deviation < r.tolerance;
  return r;
}

}  // namespace

std::vector<std::string_view> scenario_names() {
  return {"empty-cavity", "one-atom", "two-atom", "ring-compensation-toy"};
}

ScenarioResult run_scenario(std::string_view name, const ScenarioOptions& opts) {
  if (name == "empty-cavity") {
    ScenarioResult r;
    r.name = "empty-cavity";
    r.params = *preset("set1");
    r.config = scenario_config(opts);
    r.trajectory = run_g2(r.params, r.config, FixedAtoms{});
    G2Curve one = make_curve(r.trajectory.curve.tau_kappa, r.params.kappa);
    std::fill(one.g2.begin(), one.g2.end(), 1.0);
    std::fill(one.std_error.begin(), one.std_error.end(), 0.0);
    r.references.emplace_back("coherent", one);
    // Pass when every point lies within 3 standard errors of one; the floor
    // covers the deterministic O(drive^2) truncation bias when jumps are rare.
    r.passed = true;
    r.tolerance = 0.0;
    for (std::size_t i = 0; i < one.size(); ++i) {
      const double dev = std::abs(r.trajectory.curve.g2[i] - 1.0);
      const double se = std::isfinite(r.trajectory.curve.std_error[i]) ? r.trajectory.curve.std_error[i] : 0.0;
      const double tol = 3.0 * se + 1e-4;
      r.max_deviation = std::max(r.max_deviation, dev);
      r.tolerance = std::max(r.tolerance, tol);
      if (dev >= tol) r.passed = false;
    }
    return r;
  }
  if (name == "one-atom") {
    const auto p = *preset("set1");
    const std::vector<Vec3> atoms{Vec3{}};
    return fixed_atoms(name, p, FixedAtoms{atoms, {}}, opts, atoms, p);
  }
  if (name == "two-atom") {
    const auto p = *preset("set1");
    const std::vector<Vec3> atoms{Vec3{}, Vec3{8e-6, -5e-6, 6e-8}};
    return fixed_atoms(name, p, FixedAtoms{atoms, {}}, opts, atoms, p);
  }
  if (name == "ring-compensation-toy") {
    // One ring-mode atom drifting along the cavity axis at the mean axial speed
    // of a 17.3 mrad beam, with the compensating atomic detuning. The oracle is
    // the same atom at rest and on resonance.
    auto p = *preset("set2");
    p.cavity_kind = CavityKind::ring;
    const double vz = derive(p).v_oven * std::sin(0.0173);
    auto moving = p;
    moving.delta_a = 2.0 * constants::pi / p.lambda * vz;
    const std::vector<Vec3> atoms{Vec3{}};
    return fixed_atoms(name, moving, FixedAtoms{atoms, {Vec3{0, 0, vz}}}, opts, atoms, p);
  }
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

}  // namespace cqed
