#include "cqed/trajectory.hpp"

#include "cqed/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>

namespace cqed {

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::full_quantum:
      return "full-quantum";
    case RunMode::semiclassical:
      return "semiclassical";
    case RunMode::semiclassical_adiabatic:
      return "semiclassical-adiabatic";
  }
  return "full-quantum";
}

std::optional<RunMode> parse_run_mode(std::string_view text) {
  if (text == "full-quantum" || text == "g2") return RunMode::full_quantum;
  if (text == "semiclassical") return RunMode::semiclassical;
  if (text == "semiclassical-adiabatic") return RunMode::semiclassical_adiabatic;
  return std::nullopt;
}

namespace {

double decay_time_kappa(const PhysicalParameters& p) { return 2.0 / (1.0 + 0.5 * p.gamma / p.kappa); }

[[noreturn]] void infeasible(const std::string& what) {
  throw std::invalid_argument("infeasible trajectory config: " + what);
}

// Runs f(i) for i in [0, count) on up to `workers` threads.
template <class F>
void parallel_for(std::size_t count, unsigned workers, F f) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::uint64_t> split_evenly(std::uint64_t total, std::size_t parts) {
  std::vector<std::uint64_t> out(parts, total / parts);
  for (std::size_t i = 0; i < total % parts; ++i) ++out[i];
  return out;
}

}  // namespace

double default_dt(const PhysicalParameters& p) {
  const DerivedQuantities d = derive(p);
  const EngineRates r = engine_rates(p);
  double dt = 0.1 / (1.0 + 0.5 * r.gamma);
  dt = std::min(dt, 0.1 / (r.g_max * std::sqrt(std::max(1.0, p.n_eff_bar))));
  const double detuning = std::max(std::abs(r.delta_c), std::abs(r.delta_a));
  if (detuning > 0.0) dt = std::min(dt, 0.1 / detuning);
  if (d.quarter_wave_time) dt = std::min(dt, *d.quarter_wave_time * p.kappa / 25.0);
  return dt;
}

TrajectoryConfig resolve(const PhysicalParameters& p, TrajectoryConfig cfg) {
  validate(p);
  const double decay = decay_time_kappa(p);
  if (cfg.dt == 0.0) cfg.dt = default_dt(p);
  if (cfg.sample_spacing == 0.0) cfg.sample_spacing = 50.0;
  if (cfg.exclusion_window == 0.0) cfg.exclusion_window = 10.0 * decay;
  if (cfg.warmup == 0.0) cfg.warmup = 20.0 * decay;
  if (cfg.workers == 0) cfg.workers = 1;
  if (cfg.trajectories == 0) cfg.trajectories = cfg.workers;
  if (cfg.max_atoms == 0) {
    cfg.max_atoms = default_max_atoms(cfg.mode == RunMode::full_quantum ? p.truncation : Truncation::one_quantum);
  }

  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) infeasible("dt must be > 0");
  if (!(cfg.duration > 0.0)) infeasible("duration must be > 0");
  if (cfg.warmup < 0.0) infeasible("warmup must be >= 0");
  if (cfg.series_stride == 0) infeasible("series_stride must be >= 1");
  if (cfg.veto && cfg.veto->max_jumps < 1) infeasible("veto max_jumps must be >= 1");
  if (cfg.veto && !(cfg.veto->window > 0.0)) infeasible("veto window must be > 0");
  if (cfg.mode == RunMode::full_quantum) {
    if (p.truncation == Truncation::one_quantum) infeasible("g2 runs need at least the two-quanta basis");
    if (cfg.tau_points < 2) infeasible("tau_points must be >= 2");
    if (!(cfg.tau_max > 0.0)) infeasible("tau_max must be > 0");
    if (!(cfg.sample_spacing > cfg.tau_max + cfg.exclusion_window)) {
      infeasible("sample_spacing (" + std::to_string(cfg.sample_spacing) + ") must exceed tau_max + exclusion_window (" +
                 std::to_string(cfg.tau_max + cfg.exclusion_window) + ")");
    }
    const auto samples = static_cast<std::uint64_t>(std::floor(cfg.duration / cfg.sample_spacing));
    if (samples < std::max<std::uint64_t>(1, cfg.min_samples)) {
      infeasible("duration yields " + std::to_string(samples) + " samples, fewer than min_samples " +
                 std::to_string(cfg.min_samples));
    }
    if (samples < cfg.trajectories) infeasible("fewer samples than trajectories");
  }
  return cfg;
}

Trajectory::Trajectory(const PhysicalParameters& p, const TrajectoryConfig& cfg, const BeamSpec& beam,
                       std::uint64_t index)
    : params_(p),
      cfg_(cfg),
      rates_(generator_rates(engine_rates(p))),
      geom_(mode_geometry(p)),
      dt_(cfg.dt),
      rng_(make_stream(cfg.seed, index)) {
  if (cfg_.mode == RunMode::semiclassical) params_.truncation = Truncation::one_quantum;
  if (cfg_.mode != RunMode::semiclassical_adiabatic) {
    state_ = std::make_unique<TruncatedState>(params_.truncation, cfg_.max_atoms);
  }
  if (const auto* fixed = std::get_if<FixedAtoms>(&beam)) {
    const std::size_t n = fixed->positions.size();
    if (!fixed->velocities.empty() && fixed->velocities.size() != n) {
      throw std::invalid_argument("FixedAtoms: one velocity per atom");
    }
    fixed_positions_ = fixed->positions;
    fixed_velocities_ = fixed->velocities;
    for (std::size_t j = 0; j < n && state_; ++j) state_->add_atom(j);
    update_fixed_couplings();
  } else {
    beam_.emplace(beam_settings(params_));
    beam_->prefill(rng_);
    sync_atoms();
    update_couplings();
  }
  if (!state_) integrate();
}

Trajectory::~Trajectory() = default;
Trajectory::Trajectory(Trajectory&&) noexcept = default;

std::size_t Trajectory::atom_count() const {
  if (state_) return state_->atom_count();
  return g_real_.size();
}

double Trajectory::photon_number() const { return state_ ? state_->photon_number() : adiabatic_n_; }

double Trajectory::stationary_photon_number() const {
  double sum = 0.0;
  if (params_.cavity_kind == CavityKind::ring) {
    for (Complex g : g_complex_) sum += std::norm(g);
  } else {
    for (double g : g_real_) sum += g * g;
  }
  const double amp = rates_.drive / (1.0 + 2.0 * sum / rates_.gamma);
  return amp * amp;
}

std::vector<Vec3> Trajectory::positions() const {
  if (!beam_) {
    std::vector<Vec3> out = fixed_positions_;
    if (!fixed_velocities_.empty()) {
      for (std::size_t j = 0; j < out.size(); ++j) out[j] = out[j] + (time_ / params_.kappa) * fixed_velocities_[j];
    }
    return out;
  }
  std::vector<Vec3> out;
  out.reserve(beam_->atoms().size());
  for (const Atom& a : beam_->atoms()) out.push_back(a.position);
  return out;
}

void Trajectory::sync_atoms() {
  if (state_) {
    for (const Atom& a : beam_->atoms()) {
      if (a.id >= next_new_id_) state_->add_atom(a.id);
    }
  }
  next_new_id_ = beam_->next_id();
}

void Trajectory::update_couplings() {
  const auto& atoms = beam_->atoms();
  const std::size_t n = atoms.size();
  g_real_.resize(n);
  g_complex_.resize(n);
  const double half = -0.5 * dt_ / params_.kappa;
  const bool ring = params_.cavity_kind == CavityKind::ring;
  for (const Atom& a : atoms) {
    const std::size_t slot = state_ ? state_->slot_of(a.id) : static_cast<std::size_t>(&a - atoms.data());
    const Complex g = coupling(a.position + half * a.velocity, geom_, params_.g_max) / params_.kappa;
    if (ring) {
      g_complex_[slot] = g;
    } else {
      g_real_[slot] = g.real();
    }
  }
}

// Couplings at the midpoint of the coming step.
void Trajectory::update_fixed_couplings() {
  const std::size_t n = fixed_positions_.size();
  g_real_.resize(n);
  g_complex_.resize(n);
  const double t_mid = (time_ + 0.5 * dt_) / params_.kappa;
  for (std::size_t j = 0; j < n; ++j) {
    Vec3 r = fixed_positions_[j];
    if (!fixed_velocities_.empty()) r = r + t_mid * fixed_velocities_[j];
    const Complex g = coupling(r, geom_, params_.g_max) / params_.kappa;
    g_real_[j] = g.real();
    g_complex_[j] = g;
  }
}

void Trajectory::integrate() {
  if (!state_) {
    adiabatic_n_ = stationary_photon_number();
    return;
  }
  if (params_.cavity_kind == CavityKind::ring) {
    rk4_.step<Complex>(*state_, g_complex_, rates_, dt_);
  } else {
    rk4_.step<double>(*state_, g_real_, rates_, dt_);
  }
}

void Trajectory::stochastic_jump() {
  const double n = state_->expectations(excitation_);
  const double p_cav = 2.0 * rates_.kappa * n * dt_;
  double p_side = 0.0;
  for (double e : excitation_) p_side += e;
  p_side *= rates_.gamma * dt_;
  if (p_cav + p_side >= 1.0) {
    throw std::runtime_error("jump probability per step " + std::to_string(p_cav + p_side) + " >= 1; reduce dt");
  }
  const double u = uniform01(rng_);
  const double t = time_ + dt_;
  if (u < p_cav) {
    state_->apply_cavity_jump();
    jumps_.push_back({t, JumpKind::forwards, -1, false});
    return;
  }
  if (u >= p_cav + p_side) return;
  double cum = p_cav;
  std::size_t slot = excitation_.size() - 1;
  for (std::size_t j = 0; j < excitation_.size(); ++j) {
    cum += rates_.gamma * excitation_[j] * dt_;
    if (u < cum) {
      slot = j;
      break;
    }
  }
  const auto id = static_cast<std::int64_t>(state_->id_at(slot));
  if (cfg_.veto) {
    const double cutoff = t - cfg_.veto->window;
    std::erase_if(accepted_side_times_, [cutoff](double s) { return s <= cutoff; });
    if (accepted_side_times_.size() >= static_cast<std::size_t>(cfg_.veto->max_jumps)) {
      jumps_.push_back({t, JumpKind::side, id, true});
      return;
    }
    accepted_side_times_.push_back(t);
  }
  state_->apply_atom_jump(slot);
  jumps_.push_back({t, JumpKind::side, id, false});
}

void Trajectory::step() {
  if (beam_) {
    const auto exits = beam_->step(dt_ / params_.kappa, rng_);
    if (state_) {
      for (const Atom& a : exits) {
        if (!state_->contains(a.id)) continue;
        if (cfg_.mode == RunMode::semiclassical) {
          state_->drop_atom(a.id);
        } else if (state_->remove_atom(a.id, rng_)) {
          ++excited_exits_;
        }
      }
    }
    sync_atoms();
    update_couplings();
  } else if (!fixed_velocities_.empty()) {
    update_fixed_couplings();
  }
  integrate();
  if (state_) {
    if (cfg_.mode == RunMode::full_quantum && cfg_.stochastic_jumps) stochastic_jump();
    state_->renormalize();
  }
  time_ += dt_;
}

void Trajectory::enforce_cavity_jump() {
  if (!state_ || cfg_.mode != RunMode::full_quantum) throw std::logic_error("enforced jumps need a full-quantum run");
  state_->apply_cavity_jump();
  jumps_.push_back({time_, JumpKind::enforced, -1, false});
}

namespace {

struct ShardOutput {
  G2Accumulator acc;
  G2Accumulator paired;
  double atom_sum{0.0};
  double photon_sum{0.0};
  std::uint64_t steps{0};
  std::uint64_t excited_exits{0};
  std::vector<JumpEvent> jumps;
};

}  // namespace

G2Result run_g2(const PhysicalParameters& p, const TrajectoryConfig& cfg_in, const BeamSpec& beam) {
  const TrajectoryConfig cfg = resolve(p, cfg_in);
  if (cfg.mode != RunMode::full_quantum) throw std::invalid_argument("run_g2 needs mode full-quantum");

  const double tau_step = cfg.tau_max / static_cast<double>(cfg.tau_points - 1);
  const auto stride = std::max<long long>(1, std::llround(tau_step / cfg.dt));
  const auto warmup_steps = std::llround(cfg.warmup / cfg.dt);
  const auto spacing_steps = std::llround(cfg.sample_spacing / cfg.dt);
  const auto exclusion_steps = static_cast<long long>(std::ceil(cfg.exclusion_window / cfg.dt - 1e-9));
  const auto points = static_cast<std::size_t>(
      std::min<long long>(static_cast<long long>(cfg.tau_points), (spacing_steps - 1) / stride + 1));

  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = static_cast<double>(i) * static_cast<double>(stride) * cfg.dt;

  const auto total = static_cast<std::uint64_t>(std::floor(cfg.duration / cfg.sample_spacing));
  const auto per_shard = split_evenly(total, cfg.trajectories);
  std::vector<ShardOutput> shards(cfg.trajectories);

  parallel_for(shards.size(), cfg.workers, [&](std::size_t s) {
    ShardOutput& out = shards[s];
    out.acc = G2Accumulator(points, cfg.batch_size, s);
    out.paired = G2Accumulator(points, cfg.batch_size, s);
    Trajectory traj(p, cfg, beam, s);
    for (long long i = 0; i < warmup_steps; ++i) traj.step();
    for (std::uint64_t k = 0; k < per_shard[s]; ++k) {
      for (long long phase = 0; phase < spacing_steps; ++phase) {
        if (phase == 0) {
          if (cfg.paired_reference) {
            const double n_c = traj.stationary_photon_number();
            const G2Curve c = g2_fixed(make_configuration(traj.positions(), p), p, grid);
            out.paired.begin_sample(n_c);
            for (std::size_t i = 0; i < points; ++i) out.paired.record(i, n_c * c.g2[i]);
          }
          out.acc.begin_sample(traj.photon_number());
          traj.enforce_cavity_jump();
          out.acc.record(0, traj.photon_number());
        } else {
          const double n = traj.photon_number();
          if (phase % stride == 0 && static_cast<std::size_t>(phase / stride) < points) {
            out.acc.record(static_cast<std::size_t>(phase / stride), n);
          }
          if (phase >= exclusion_steps) {
            out.acc.add_denominator(n);
            out.photon_sum += n;
            if (cfg.paired_reference) out.paired.add_denominator(traj.stationary_photon_number());
          }
        }
        out.atom_sum += static_cast<double>(traj.atom_count());
        ++out.steps;
        traj.step();
      }
    }
    out.excited_exits = traj.excited_exits();
    out.jumps = traj.jumps();
  });

  G2Result result;
  result.config = cfg;
  result.curve = make_curve(grid, p.kappa);
  G2Accumulator merged(points, cfg.batch_size);
  G2Accumulator paired(points, cfg.batch_size);
  double atom_sum = 0.0;
  double photon_sum = 0.0;
  std::uint64_t steps = 0;
  for (ShardOutput& s : shards) {
    merged.merge(s.acc);
    paired.merge(s.paired);
    atom_sum += s.atom_sum;
    photon_sum += s.photon_sum;
    steps += s.steps;
    result.excited_exits += s.excited_exits;
    for (const JumpEvent& e : s.jumps) {
      if (e.kind == JumpKind::forwards) ++result.forwards_jumps;
      if (e.kind == JumpKind::side && !e.vetoed) ++result.side_jumps;
      if (e.vetoed) ++result.vetoed_jumps;
    }
    result.jumps.insert(result.jumps.end(), s.jumps.begin(), s.jumps.end());
  }
  merged.finish(result.curve);
  if (cfg.paired_reference) {
    result.paired_reference = make_curve(grid, p.kappa);
    paired.finish(*result.paired_reference);
  }
  result.samples = merged.samples();
  result.denominator_samples = merged.denominator_count();
  result.mean_atoms = steps ? atom_sum / static_cast<double>(steps) : 0.0;
  result.mean_photon_number =
      result.denominator_samples ? photon_sum / static_cast<double>(result.denominator_samples) : 0.0;
  if (result.samples < cfg.min_samples) {
    throw std::runtime_error("only " + std::to_string(result.samples) + " enforced-jump samples collected");
  }
  return result;
}

std::vector<SemiclassicalSeries> run_semiclassical(const PhysicalParameters& p, const TrajectoryConfig& cfg_in,
                                                   const BeamSpec& beam) {
  const TrajectoryConfig cfg = resolve(p, cfg_in);
  if (cfg.mode == RunMode::full_quantum) throw std::invalid_argument("run_semiclassical needs a semiclassical mode");
  const auto warmup_steps = std::llround(cfg.warmup / cfg.dt);
  const auto steps = static_cast<long long>(std::llround(cfg.duration / cfg.trajectories / cfg.dt));
  std::vector<SemiclassicalSeries> out(cfg.trajectories);
  parallel_for(out.size(), cfg.workers, [&](std::size_t s) {
    SemiclassicalSeries& series = out[s];
    series.dt = cfg.dt * static_cast<double>(cfg.series_stride);
    Trajectory traj(p, cfg, beam, s);
    for (long long i = 0; i < warmup_steps; ++i) traj.step();
    double atoms = 0.0;
    const double t0 = traj.time();
    for (long long i = 0; i < steps; ++i) {
      if (i % static_cast<long long>(cfg.series_stride) == 0) {
        series.t_kappa.push_back(traj.time() - t0);
        series.photon_number.push_back(traj.photon_number());
      }
      atoms += static_cast<double>(traj.atom_count());
      traj.step();
    }
    series.mean_atoms = steps > 0 ? atoms / static_cast<double>(steps) : 0.0;
  });
  return out;
}

BeamStats run_beam_stats(const PhysicalParameters& p, const TrajectoryConfig& cfg_in, bool log_events) {
  TrajectoryConfig cfg = cfg_in;
  cfg.mode = RunMode::semiclassical_adiabatic;
  cfg = resolve(p, cfg);
  const DerivedQuantities d = derive(p);
  BeamState beam(beam_settings(p));
  Rng rng = make_stream(cfg.seed, 0);
  beam.set_event_log(log_events);
  beam.prefill(rng);

  BeamStats stats;
  stats.predicted_count = beam.expected_count();
  stats.injection_rate = d.injection_rate;
  const double dt_si = cfg.dt / p.kappa;
  const auto warmup_steps = std::llround(cfg.warmup / cfg.dt);
  const auto steps = std::llround(cfg.duration / cfg.dt);
  const bool check_z = p.tilt == 0.0;
  std::unordered_map<AtomId, double> first_z;

  for (long long i = 0; i < warmup_steps; ++i) beam.step(dt_si, rng);
  beam.clear_events();
  double sum = 0.0;
  constexpr std::size_t blocks = 32;
  std::vector<double> block_sum(blocks, 0.0);
  std::vector<double> block_n(blocks, 0.0);
  for (long long i = 0; i < steps; ++i) {
    const auto exits = beam.step(dt_si, rng);
    stats.exits += exits.size();
    if (check_z) {
      for (const Atom& a : beam.atoms()) {
        auto [it, inserted] = first_z.emplace(a.id, a.position.z);
        if (!inserted && it->second != a.position.z) stats.z_constant = false;
      }
      for (const Atom& a : exits) {
        auto it = first_z.find(a.id);
        if (it != first_z.end()) {
          if (it->second != a.position.z) stats.z_constant = false;
          first_z.erase(it);
        }
      }
    }
    const double count = static_cast<double>(beam.atoms().size());
    sum += count;
    const std::size_t b = static_cast<std::size_t>(i) * blocks / static_cast<std::size_t>(steps);
    block_sum[b] += count;
    block_n[b] += 1.0;
    stats.t_kappa.push_back(static_cast<double>(i + 1) * cfg.dt);
    stats.counts.push_back(count);
  }
  stats.mean_count = steps > 0 ? sum / static_cast<double>(steps) : 0.0;
  double ss = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    if (block_n[b] == 0.0) continue;
    const double m = block_sum[b] / block_n[b];
    ss += (m - stats.mean_count) * (m - stats.mean_count);
    ++used;
  }
  stats.count_stderr = used > 1 ? std::sqrt(ss / static_cast<double>(used - 1) / static_cast<double>(used)) : 0.0;
  stats.exit_rate = static_cast<double>(stats.exits) / (static_cast<double>(steps) * dt_si);
  stats.events = beam.events();
  return stats;
}

}  // namespace cqed
