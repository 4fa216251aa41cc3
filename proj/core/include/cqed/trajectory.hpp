#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "cqed/beam.hpp"
#include "cqed/g2_estimate.hpp"
#include "cqed/model.hpp"
#include "cqed/propagator.hpp"
#include "cqed/rng.hpp"
#include "cqed/state.hpp"

namespace cqed {

enum class RunMode { full_quantum, semiclassical, semiclassical_adiabatic };

std::string_view to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(std::string_view text);

struct Veto {
  int max_jumps{2};
  double window{1.0};  // kappa^-1

  friend bool operator==(const Veto&, const Veto&) = default;
};

/// Times in units of 1/kappa. Zero means "use the default" where noted.
struct TrajectoryConfig {
  RunMode mode{RunMode::full_quantum};
  double dt{0.0};                // 0: default_dt()
  double sample_spacing{0.0};    // 0: 50
  double exclusion_window{0.0};  // 0: 10 decay times
  double warmup{0.0};            // 0: 20 decay times
  double duration{0.0};          // post-warmup time summed over trajectories
  double tau_max{6.0};
  std::size_t tau_points{200};
  std::optional<Veto> veto;
  std::uint64_t seed{1};
  unsigned workers{1};
  unsigned trajectories{0};  // independent shards; 0: one per worker
  std::size_t batch_size{50};
  std::size_t min_samples{1};
  std::size_t max_atoms{0};  // 0: default for the truncation
  bool stochastic_jumps{true};
  std::size_t series_stride{1};  // semiclassical output every n steps
  // g2 runs: also average the stationary-atom closed form over the atom
  // configurations present at the sample and denominator times.
  bool paired_reference{false};

  friend bool operator==(const TrajectoryConfig&, const TrajectoryConfig&) = default;
};

/// Step size from the fastest rate in the problem (units of 1/kappa).
double default_dt(const PhysicalParameters& p);

/// Fills defaults and checks invariants; throws std::invalid_argument.
TrajectoryConfig resolve(const PhysicalParameters& p, TrajectoryConfig cfg);

struct MonteCarloBeam {};
struct FixedAtoms {
  std::vector<Vec3> positions;   // m
  std::vector<Vec3> velocities;  // m/s; empty for static atoms. Atoms never leave.
};
using BeamSpec = std::variant<MonteCarloBeam, FixedAtoms>;

enum class JumpKind { forwards, side, enforced };

struct JumpEvent {
  double time{0.0};  // kappa^-1
  JumpKind kind{JumpKind::forwards};
  std::int64_t atom{-1};  // atom id for side jumps
  bool vetoed{false};
};

/// One conditional trajectory: beam, state and jump record.
class Trajectory {
 public:
  Trajectory(const PhysicalParameters& p, const TrajectoryConfig& resolved, const BeamSpec& beam,
             std::uint64_t index);
  ~Trajectory();
  Trajectory(Trajectory&&) noexcept;

  void step();
  void enforce_cavity_jump();

  double time() const { return time_; }
  double dt() const { return dt_; }
  double photon_number() const;
  std::size_t atom_count() const;
  /// Weak-field steady photon number for the atoms frozen where they are now.
  double stationary_photon_number() const;
  /// Current atom positions (m).
  std::vector<Vec3> positions() const;
  const TruncatedState* state() const { return state_.get(); }
  const BeamState* beam() const { return beam_ ? &*beam_ : nullptr; }
  const std::vector<JumpEvent>& jumps() const { return jumps_; }
  std::uint64_t excited_exits() const { return excited_exits_; }

 private:
  void sync_atoms();
  void update_couplings();
  void integrate();
  void stochastic_jump();
  void update_fixed_couplings();

  PhysicalParameters params_;
  TrajectoryConfig cfg_;
  GeneratorRates rates_;
  ModeGeometry geom_;
  double dt_;
  double time_{0.0};
  Rng rng_;
  std::optional<BeamState> beam_;
  std::vector<Vec3> fixed_positions_;
  std::vector<Vec3> fixed_velocities_;
  std::unique_ptr<TruncatedState> state_;
  Rk4 rk4_;
  std::vector<double> g_real_;
  std::vector<Complex> g_complex_;
  std::vector<double> excitation_;
  std::vector<JumpEvent> jumps_;
  std::vector<double> accepted_side_times_;
  AtomId next_new_id_{0};
  std::uint64_t excited_exits_{0};
  double adiabatic_n_{0.0};
};

struct G2Result {
  G2Curve curve;
  TrajectoryConfig config;  // resolved
  std::uint64_t samples{0};
  std::uint64_t denominator_samples{0};
  double mean_atoms{0.0};
  double mean_photon_number{0.0};
  std::uint64_t forwards_jumps{0};
  std::uint64_t side_jumps{0};
  std::uint64_t vetoed_jumps{0};
  std::uint64_t excited_exits{0};
  std::vector<JumpEvent> jumps;  // shard order, then time
  std::optional<G2Curve> paired_reference;
};

/// Enforced-jump estimate of g2(tau).
G2Result run_g2(const PhysicalParameters& p, const TrajectoryConfig& cfg, const BeamSpec& beam = MonteCarloBeam{});

struct SemiclassicalSeries {
  double dt{0.0};  // spacing of the samples, 1/kappa
  std::vector<double> t_kappa;
  std::vector<double> photon_number;
  double mean_atoms{0.0};
};

/// One series per trajectory, no jumps; the state runs in the one-quantum basis.
std::vector<SemiclassicalSeries> run_semiclassical(const PhysicalParameters& p, const TrajectoryConfig& cfg,
                                                   const BeamSpec& beam = MonteCarloBeam{});

struct BeamStats {
  double mean_count{0.0};
  double count_stderr{0.0};
  double predicted_count{0.0};
  double exit_rate{0.0};  // 1/s
  double injection_rate{0.0};
  std::uint64_t exits{0};
  bool z_constant{true};  // no atom's z changed (checked only when tilt = 0)
  std::vector<double> t_kappa;
  std::vector<double> counts;
  std::vector<BeamEvent> events;
};

BeamStats run_beam_stats(const PhysicalParameters& p, const TrajectoryConfig& cfg, bool log_events = false);

}  // namespace cqed
