#include "cqed/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cqed {

namespace {

using constants::pi;

[[noreturn]] void invalid(const std::string& what) {
  throw std::invalid_argument("invalid parameters: " + what);
}

}  // namespace

std::string_view to_string(CavityKind kind) {
  return kind == CavityKind::ring ? "ring" : "standing-wave";
}

std::string_view to_string(Truncation t) {
  switch (t) {
    case Truncation::one_quantum:
      return "one-quantum";
    case Truncation::two_quanta:
      return "two-quanta";
    case Truncation::three_quanta:
      return "three-quanta";
  }
  return "two-quanta";
}

std::optional<CavityKind> parse_cavity_kind(std::string_view text) {
  if (text == "standing-wave" || text == "standing") return CavityKind::standing_wave;
  if (text == "ring") return CavityKind::ring;
  return std::nullopt;
}

std::optional<Truncation> parse_truncation(std::string_view text) {
  if (text == "one-quantum" || text == "1") return Truncation::one_quantum;
  if (text == "two-quanta" || text == "2") return Truncation::two_quanta;
  if (text == "three-quanta" || text == "3") return Truncation::three_quanta;
  return std::nullopt;
}

void validate(const PhysicalParameters& p) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(p.kappa)) invalid("kappa must be > 0");
  if (!positive(p.gamma)) invalid("gamma must be > 0");
  if (!positive(p.g_max)) invalid("g_max must be > 0");
  if (!positive(p.w0)) invalid("w0 must be > 0");
  if (!positive(p.lambda)) invalid("lambda must be > 0");
  if (!positive(p.T)) invalid("T must be > 0");
  if (!positive(p.M)) invalid("M must be > 0");
  if (!positive(p.n_eff_bar)) invalid("n_eff_bar must be > 0");
  if (!(p.F > 0.0 && p.F < 1.0)) invalid("F must lie in (0, 1)");
  if (!(std::isfinite(p.drive) && p.drive >= 0.0)) invalid("drive must be >= 0");
  if (!(std::abs(p.tilt) < pi / 2)) invalid("|tilt| must be < pi/2");
  if (!std::isfinite(p.delta_c) || !std::isfinite(p.delta_a)) invalid("detunings must be finite");
  if (!positive(p.speed_scale)) invalid("speed_scale must be > 0");
}

std::optional<double> mass_for_wavelength(double lambda) {
  if (std::abs(lambda - 852e-9) < 1.5e-9) return constants::mass_cs133;
  if (std::abs(lambda - 780e-9) < 1.5e-9) return constants::mass_rb_natural;
  return std::nullopt;
}

std::optional<PhysicalParameters> preset(std::string_view name) {
  PhysicalParameters p;
  if (name == "set1") {
    p.kappa = 2.0 * pi * 0.9e6;
    p.g_max = 3.56 * p.kappa;
    p.gamma = 5.56 * p.kappa;
    p.w0 = 50e-6;
    p.lambda = 852e-9;
    p.n_eff_bar = 18.0;
    p.T = 473.0;
  } else if (name == "set2") {
    p.kappa = 2.0 * pi * 7.9e6;
    p.g_max = 1.47 * p.kappa;
    p.gamma = 0.77 * p.kappa;
    p.w0 = 21.5e-6;
    p.lambda = 780e-9;
    p.n_eff_bar = 13.0;
    p.T = 430.0;
  } else {
    return std::nullopt;
  }
  p.M = *mass_for_wavelength(p.lambda);
  p.drive = 1e-3 * p.kappa;
  return p;
}

std::pair<double, double> mean_speeds(double temperature, double mass) {
  if (!(temperature > 0.0 && mass > 0.0)) {
    throw std::invalid_argument("mean_speeds: temperature and mass must be > 0");
  }
  const double v_beam = std::sqrt(9.0 * pi * constants::boltzmann * temperature / (8.0 * mass));
  const double v_oven = 8.0 / (3.0 * pi) * v_beam;
  return {v_oven, v_beam};
}

double source_rate(double n_eff_bar, double v_beam, double w0) {
  return 64.0 * n_eff_bar * v_beam / (3.0 * pi * pi * w0);
}

double beam_density(double n_eff_bar, double w0, double l) {
  return 4.0 * n_eff_bar / (pi * w0 * w0 * l);
}

double effective_fraction(double F) {
  if (!(F >= 0.0 && F <= 1.0)) throw std::invalid_argument("effective_fraction: F outside [0, 1]");
  return (2.0 / pi) * ((1.0 - 2.0 * F * F) * std::acos(F) + F * std::sqrt(1.0 - F * F));
}

ModeGeometry mode_geometry(const PhysicalParameters& p) {
  return {p.w0, p.lambda, p.w0 * std::sqrt(std::abs(std::log(p.F))), p.cavity_kind};
}

Complex coupling(const Vec3& r, const ModeGeometry& geom, double g_max) {
  const double envelope = std::exp(-(r.x * r.x + r.y * r.y) / (geom.w0 * geom.w0));
  const double kz = geom.wavenumber() * r.z;
  if (geom.kind == CavityKind::standing_wave) return {g_max * std::cos(kz) * envelope, 0.0};
  return std::polar(g_max / std::numbers::sqrt2 * envelope, kz);
}

DerivedQuantities derive(const PhysicalParameters& p) {
  validate(p);
  DerivedQuantities d;
  d.xi = 2.0 * p.kappa / p.gamma;
  d.c1 = p.g_max * p.g_max / (p.kappa * p.gamma);
  d.two_c = 2.0 * p.n_eff_bar * d.c1;
  d.antibunch_scale = 2.0 * d.c1 * d.xi / (1.0 + d.xi);

  const double half_diff = 0.5 * (p.kappa - 0.5 * p.gamma);
  const double omega_sq = p.n_eff_bar * p.g_max * p.g_max - half_diff * half_diff;
  d.overdamped = omega_sq < 0.0;
  d.omega_rabi = std::sqrt(std::abs(omega_sq));
  d.decay_time = 2.0 / (p.kappa + 0.5 * p.gamma);

  const auto [v_oven, v_beam] = mean_speeds(p.T, p.M);
  d.v_oven = v_oven;
  d.v_beam = v_beam;
  d.rate_R = source_rate(p.n_eff_bar, v_beam, p.w0);
  // R counts arrivals across a 2 w0 wide strip; the injection plane spans 2 w0 sqrt|ln F|.
  d.injection_rate = d.rate_R * std::sqrt(std::abs(std::log(p.F))) * p.speed_scale;
  d.transit_time = p.w0 / (v_oven * p.speed_scale);
  if (p.tilt != 0.0) {
    d.quarter_wave_time = p.lambda / (4.0 * v_oven * p.speed_scale * std::abs(std::sin(p.tilt)));
  }
  return d;
}

EngineRates engine_rates(const PhysicalParameters& p) {
  return {1.0, p.gamma / p.kappa, p.g_max / p.kappa, p.drive / p.kappa, p.delta_c / p.kappa,
          p.delta_a / p.kappa};
}

double weak_field_bound(const PhysicalParameters& p) {
  return (1.0 + p.gamma / (2.0 * p.kappa)) /
         (8.0 * p.n_eff_bar * p.g_max * p.g_max / (p.kappa * p.gamma));
}

}  // namespace cqed
