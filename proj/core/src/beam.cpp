#include "cqed/beam.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cqed {

namespace {

constexpr double sqrt_pi = 1.7724538509055160273;

}  // namespace

BeamSettings beam_settings(const PhysicalParameters& p) {
  const DerivedQuantities d = derive(p);
  return {mode_geometry(p), d.injection_rate, d.v_oven * p.speed_scale, p.tilt};
}

double sample_speed(Rng& rng, double v_oven) {
  // u^2 ~ Gamma(2, 1)
  const double u = std::sqrt(exponential1(rng) + exponential1(rng));
  return u * sqrt_pi * v_oven / 2.0;
}

double speed_cdf(double u) {
  if (u <= 0.0) return 0.0;
  const double s = u * u;
  return -std::expm1(-s) - s * std::exp(-s);
}

BeamState::BeamState(BeamSettings settings) : settings_(settings) {
  if (!(settings_.v_oven > 0.0)) throw std::invalid_argument("BeamState: v_oven must be > 0");
  if (!(settings_.rate >= 0.0)) throw std::invalid_argument("BeamState: rate must be >= 0");
}

Atom BeamState::make_atom(double birth_time, double speed, double y, double z0) {
  Atom a;
  a.id = next_id_++;
  a.birth_time = birth_time;
  a.position = {-half_span(), y, z0};
  a.velocity = {speed * std::cos(settings_.tilt), 0.0, speed * std::sin(settings_.tilt)};
  return a;
}

void BeamState::record(BeamEventKind kind, const Atom& a, double time) {
  if (!log_events_) return;
  const double v = std::hypot(a.velocity.x, a.velocity.z);
  events_.push_back({time, kind, a.id, a.position, v, settings_.tilt});
}

std::size_t BeamState::spawn(double dt, Rng& rng) {
  const std::uint64_t n = poisson(rng, settings_.rate * dt);
  const double h = half_span();
  const double zq = settings_.geom.lambda / 4.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double age = uniform01(rng) * dt;
    const double y = h * (2.0 * uniform01(rng) - 1.0);
    const double z0 = zq * (2.0 * uniform01(rng) - 1.0);
    const double v = sample_speed(rng, settings_.v_oven);
    Atom a = make_atom(time_ - age, v, y, z0);
    record(BeamEventKind::spawn, a, a.birth_time);
    a.position = a.position + age * a.velocity;
    atoms_.push_back(a);
  }
  return static_cast<std::size_t>(n);
}

void BeamState::advance(double dt) {
  for (Atom& a : atoms_) a.position = a.position + dt * a.velocity;
  time_ += dt;
}

std::vector<Atom> BeamState::collect_exits() {
  const double h = half_span();
  auto keep_end = std::stable_partition(atoms_.begin(), atoms_.end(),
                                        [h](const Atom& a) { return a.position.x <= h; });
  std::vector<Atom> out(keep_end, atoms_.end());
  atoms_.erase(keep_end, atoms_.end());
  auto overshoot_time = [h](const Atom& a) { return (a.position.x - h) / a.velocity.x; };
  std::stable_sort(out.begin(), out.end(), [&](const Atom& a, const Atom& b) {
    return overshoot_time(a) > overshoot_time(b);
  });
  for (const Atom& a : out) record(BeamEventKind::exit, a, time_ - overshoot_time(a));
  return out;
}

std::vector<Atom> BeamState::step(double dt, Rng& rng) {
  advance(dt);
  spawn(dt, rng);
  return collect_exits();
}

double BeamState::expected_count() const {
  // Flux-weighted mean of 1/v is 1/v_oven.
  return settings_.rate * 2.0 * half_span() / (settings_.v_oven * std::cos(settings_.tilt));
}

void BeamState::prefill(Rng& rng) {
  const double h = half_span();
  const double zq = settings_.geom.lambda / 4.0;
  const double tan_tilt = std::tan(settings_.tilt);
  std::normal_distribution<double> normal;
  const std::uint64_t n = poisson(rng, expected_count());
  for (std::uint64_t i = 0; i < n; ++i) {
    // Occupancy weights the flux distribution by 1/v: u^2 ~ Gamma(3/2, 1).
    const double z = normal(rng);
    const double u = std::sqrt(exponential1(rng) + 0.5 * z * z);
    const double v = u * sqrt_pi * settings_.v_oven / 2.0;
    const double travelled = 2.0 * h * uniform01(rng);
    const double y = h * (2.0 * uniform01(rng) - 1.0);
    const double z0 = zq * (2.0 * uniform01(rng) - 1.0);
    Atom a = make_atom(0.0, v, y, z0);
    a.birth_time = time_ - travelled / a.velocity.x;
    a.position = {-h + travelled, y, z0 + travelled * tan_tilt};
    record(BeamEventKind::spawn, a, a.birth_time);
    atoms_.push_back(a);
  }
}

void write_beam_events(std::ostream& out, const std::vector<BeamEvent>& events) {
  out << "time,event,id,x,y,z,v,theta\n";
  out.precision(17);
  for (const BeamEvent& e : events) {
    out << e.time << ',' << (e.kind == BeamEventKind::spawn ? "spawn" : "exit") << ',' << e.id << ','
        << e.position.x << ',' << e.position.y << ',' << e.position.z << ',' << e.speed << ','
        << e.tilt << '\n';
  }
}

}  // namespace cqed
