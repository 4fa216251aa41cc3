#include <doctest.h>

#include <cmath>

#include "cqed/analytics.hpp"
#include "cqed/dense_oracle.hpp"
#include "cqed/trajectory.hpp"

using namespace cqed;
using doctest::Approx;

namespace {

TrajectoryConfig fixed_atom_config(std::size_t samples) {
  TrajectoryConfig cfg;
  cfg.dt = 0.01;
  cfg.tau_max = 4.0;
  cfg.tau_points = 41;
  cfg.exclusion_window = 16.0;
  cfg.sample_spacing = 24.0;
  cfg.warmup = 20.0;
  cfg.duration = cfg.sample_spacing * static_cast<double>(samples);
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("resolve fills defaults and rejects infeasible settings") {
  const auto p = *preset("set1");
  TrajectoryConfig cfg;
  cfg.duration = 1000.0;
  const auto r = resolve(p, cfg);
  CHECK(r.dt == default_dt(p));
  CHECK(r.sample_spacing == 50.0);
  CHECK(r.exclusion_window == Approx(10.0 * 2.0 / (1.0 + 0.5 * 5.56)));
  CHECK(r.trajectories == 1);

  auto bad = cfg;
  bad.sample_spacing = 5.0;
  CHECK_THROWS_AS(resolve(p, bad), std::invalid_argument);
  bad = cfg;
  bad.duration = 10.0;
  CHECK_THROWS_AS(resolve(p, bad), std::invalid_argument);
  auto one = p;
  one.truncation = Truncation::one_quantum;
  CHECK_THROWS_AS(resolve(one, cfg), std::invalid_argument);
  auto sc = cfg;
  sc.mode = RunMode::semiclassical;
  CHECK_NOTHROW(resolve(one, sc));
}

TEST_CASE("default step resolves the fastest time scale") {
  auto p = *preset("set2");
  const double base = default_dt(p);
  CHECK(base <= 0.1 / (p.g_max / p.kappa * std::sqrt(p.n_eff_bar)));
  p.tilt = 0.0173;
  const auto d = derive(p);
  CHECK(default_dt(p) <= *d.quarter_wave_time * p.kappa / 25.0);
  p.delta_a = 30.0 * p.kappa;
  CHECK(default_dt(p) <= 0.1 / 30.0);
}

TEST_CASE("empty cavity: enforced-jump estimate is one") {
  const auto p = *preset("set1");
  const auto r = run_g2(p, fixed_atom_config(200), FixedAtoms{});
  for (double v : r.curve.g2) CHECK(v == Approx(1.0).epsilon(1e-5));
  CHECK(r.samples == 200);
  CHECK(r.mean_photon_number == Approx(1e-6).epsilon(1e-3));
}

TEST_CASE("fixed atoms: enforced-jump estimate matches the dense master equation") {
  const auto p = *preset("set1");
  const std::vector<std::vector<Vec3>> cases{{Vec3{}}, {Vec3{}, Vec3{8e-6, -5e-6, 6e-8}}};
  for (const auto& atoms : cases) {
    CAPTURE(atoms.size());
    const auto r = run_g2(p, fixed_atom_config(300), FixedAtoms{atoms});
    const auto dense = dense_g2(atoms, 3, p, r.curve.tau_kappa);
    for (std::size_t i = 0; i < r.curve.size(); ++i) {
      CAPTURE(r.curve.tau_kappa[i]);
      CHECK(r.curve.g2[i] == Approx(dense.g2[i]).epsilon(0.05));
    }
    CHECK(r.mean_atoms == static_cast<double>(atoms.size()));
  }
}

TEST_CASE("single-worker runs are bit-identical and shard merging is worker-independent") {
  auto p = *preset("set2");
  p.n_eff_bar = 1.0;
  TrajectoryConfig cfg;
  cfg.duration = 400.0;
  cfg.sample_spacing = 40.0;
  cfg.tau_max = 3.0;
  cfg.tau_points = 16;
  cfg.warmup = 5.0;
  cfg.trajectories = 2;
  cfg.seed = 11;
  const auto a = run_g2(p, cfg);
  const auto b = run_g2(p, cfg);
  CHECK(a.curve.g2 == b.curve.g2);
  CHECK(a.curve.std_error == b.curve.std_error);
  CHECK(a.jumps.size() == b.jumps.size());
  cfg.workers = 2;
  const auto c = run_g2(p, cfg);
  CHECK(a.curve.g2 == c.curve.g2);
  cfg.seed = 12;
  const auto d = run_g2(p, cfg);
  CHECK(a.curve.g2 != d.curve.g2);
  CHECK(a.mean_atoms > 0.0);
}

TEST_CASE("semiclassical fixed atoms settle to the stationary photon number") {
  const auto p = *preset("set2");
  const std::vector<Vec3> atoms{Vec3{}, Vec3{4e-6, 0, 1e-7}};
  TrajectoryConfig cfg;
  cfg.mode = RunMode::semiclassical;
  cfg.dt = 0.01;
  cfg.warmup = 60.0;
  cfg.duration = 1.0;
  const auto series = run_semiclassical(p, cfg, FixedAtoms{atoms});
  const double expected = stationary_photon_number(make_configuration(atoms, p), p);
  REQUIRE(series.size() == 1);
  for (double n : series[0].photon_number) CHECK(n == Approx(expected).epsilon(1e-6));
  cfg.mode = RunMode::semiclassical_adiabatic;
  const auto adiabatic = run_semiclassical(p, cfg, FixedAtoms{atoms});
  for (double n : adiabatic[0].photon_number) {
    CHECK(n == Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("adiabatic beam run follows the instantaneous configuration") {
  auto p = *preset("set1");
  p.n_eff_bar = 2.0;
  TrajectoryConfig cfg;
  cfg.mode = RunMode::semiclassical_adiabatic;
  cfg.duration = 30.0;
  cfg.series_stride = 10;
  const auto s = run_semiclassical(p, cfg);
  REQUIRE(!s[0].photon_number.empty());
  const double empty = std::pow(p.drive / p.kappa, 2);
  for (double n : s[0].photon_number) {
    CHECK(n > 0.0);
    CHECK(n <= empty * (1.0 + 1e-12));
  }
  CHECK(s[0].mean_atoms > 0.0);
  CHECK(s[0].dt == Approx(cfg.series_stride * default_dt(p)));
}

TEST_CASE("veto caps accepted side jumps per window") {
  auto p = *preset("set2");
  p.drive = 1.0 * p.kappa;
  p.n_eff_bar = 2.0;
  TrajectoryConfig cfg;
  cfg.duration = 200.0;
  cfg.sample_spacing = 20.0;
  cfg.tau_max = 2.0;
  cfg.tau_points = 5;
  cfg.veto = Veto{1, 10.0};
  const auto r = run_g2(p, cfg);
  CHECK(r.side_jumps > 0);
  CHECK(r.vetoed_jumps > 0);
  std::vector<double> accepted;
  for (const auto& j : r.jumps)
    if (j.kind == JumpKind::side && !j.vetoed) accepted.push_back(j.time);
  for (std::size_t i = 1; i < accepted.size(); ++i) CHECK(accepted[i] - accepted[i - 1] > 10.0 - 1e-9);
}

TEST_CASE("atom cap surfaces as a resource error") {
  auto p = *preset("set1");
  p.truncation = Truncation::three_quanta;
  TrajectoryConfig cfg;
  cfg.duration = 100.0;
  cfg.max_atoms = 5;
  CHECK_THROWS_AS(run_g2(p, cfg), ResourceCapError);
}

TEST_CASE("ring mode: detuning compensates uniform axial motion") {
  auto p = *preset("set2");
  p.cavity_kind = CavityKind::ring;
  const double tilt = 0.0173;
  const double vz = derive(p).v_oven * std::sin(tilt);
  const double k = 2.0 * constants::pi / p.lambda;
  CHECK(k * vz / p.kappa == Approx(0.916).epsilon(0.002));

  const auto cfg = fixed_atom_config(40);
  const FixedAtoms moving{{Vec3{}}, {Vec3{0, 0, vz}}};
  auto stationary = p;
  const auto reference = dense_g2({Vec3{}}, 3, stationary, uniform_grid(cfg.tau_max, cfg.tau_points));

  auto compensated = p;
  compensated.delta_a = k * vz;
  const auto good = run_g2(compensated, cfg, moving);
  const auto still = run_g2(p, cfg, FixedAtoms{{Vec3{}}});
  auto wrong = p;
  wrong.delta_a = -k * vz;
  const auto bad = run_g2(wrong, cfg, moving);
  double worst_good = 0.0;
  double worst_bad = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    worst_good = std::max(worst_good, std::abs(good.curve.g2[i] / still.curve.g2[i] - 1.0));
    CHECK(good.curve.g2[i] == Approx(reference.g2[i]).epsilon(0.05));
    worst_bad = std::max(worst_bad, std::abs(bad.curve.g2[i] / reference.g2[i] - 1.0));
  }
  CHECK(worst_good < 1e-3);
  CHECK(worst_bad > 0.1);
}

TEST_CASE("paired stationary-atom reference for static atoms is the closed form") {
  const auto p = *preset("set1");
  const std::vector<Vec3> atoms{Vec3{}, Vec3{8e-6, -5e-6, 6e-8}};
  auto cfg = fixed_atom_config(20);
  cfg.paired_reference = true;
  const auto r = run_g2(p, cfg, FixedAtoms{atoms});
  REQUIRE(r.paired_reference);
  const auto exact = g2_fixed(make_configuration(atoms, p), p, r.curve.tau_kappa);
  for (std::size_t i = 0; i < exact.size(); ++i) CHECK(r.paired_reference->g2[i] == Approx(exact.g2[i]).epsilon(1e-12));

  cfg.paired_reference = false;
  CHECK_FALSE(run_g2(p, cfg, FixedAtoms{atoms}).paired_reference);
}
