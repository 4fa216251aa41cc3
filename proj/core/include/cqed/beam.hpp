#pragma once

#include <iosfwd>
#include <vector>

#include "cqed/model.hpp"
#include "cqed/rng.hpp"
#include "cqed/types.hpp"

namespace cqed {

struct Atom {
  AtomId id{0};
  double birth_time{0.0};  // s
  Vec3 position;           // m
  Vec3 velocity;           // m/s
};

enum class BeamEventKind { spawn, exit };

struct BeamEvent {
  double time{0.0};  // s
  BeamEventKind kind{BeamEventKind::spawn};
  AtomId id{0};
  Vec3 position;
  double speed{0.0};
  double tilt{0.0};
};

struct BeamSettings {
  ModeGeometry geom;
  double rate{0.0};    // arrivals per second over the injection plane
  double v_oven{0.0};  // m/s, already multiplied by any speed scale
  double tilt{0.0};    // rad
};

BeamSettings beam_settings(const PhysicalParameters& p);

/// Draws a speed from the flux-weighted distribution 2u^3 exp(-u^2) du, u = 2v/(sqrt(pi) v_oven).
double sample_speed(Rng& rng, double v_oven);

/// Analytic CDF of sample_speed in terms of u.
double speed_cdf(double u);

class BeamState {
 public:
  explicit BeamState(BeamSettings settings);

  const BeamSettings& settings() const { return settings_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double time() const { return time_; }
  double half_span() const { return settings_.geom.half_span; }
  AtomId next_id() const { return next_id_; }

  /// Appends Poisson(rate dt) atoms born uniformly within (time - dt, time],
  /// each already advanced to the current clock.
  std::size_t spawn(double dt, Rng& rng);

  /// Ballistic update of every atom and the clock.
  void advance(double dt);

  /// Removes atoms past the exit plane, earliest exit first.
  std::vector<Atom> collect_exits();

  /// advance + spawn + collect_exits.
  std::vector<Atom> step(double dt, Rng& rng);

  /// Fills the volume with a draw from the stationary distribution of the flow.
  void prefill(Rng& rng);

  /// Mean occupancy predicted from arrival rate times mean transit time.
  double expected_count() const;

  void set_event_log(bool enabled) { log_events_ = enabled; }
  const std::vector<BeamEvent>& events() const { return events_; }
  void clear_events() { events_.clear(); }

 private:
  Atom make_atom(double birth_time, double speed, double y, double z0);
  void record(BeamEventKind kind, const Atom& a, double time);

  BeamSettings settings_;
  std::vector<Atom> atoms_;
  std::vector<BeamEvent> events_;
  AtomId next_id_{0};
  double time_{0.0};
  bool log_events_{false};
};

/// CSV event log: time,event,id,x,y,z,v,theta (SI units).
void write_beam_events(std::ostream& out, const std::vector<BeamEvent>& events);

}  // namespace cqed
