#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "cqed/types.hpp"

namespace cqed {

enum class CavityKind { standing_wave, ring };
enum class Truncation { one_quantum = 1, two_quanta = 2, three_quanta = 3 };

inline int excitation_limit(Truncation t) { return static_cast<int>(t); }

std::string_view to_string(CavityKind kind);
std::string_view to_string(Truncation t);
std::optional<CavityKind> parse_cavity_kind(std::string_view text);
std::optional<Truncation> parse_truncation(std::string_view text);

/// Experiment constants in SI units (rates in rad/s, lengths in m).
struct PhysicalParameters {
  double kappa{0.0};      // cavity field halfwidth
  double gamma{0.0};      // atomic linewidth (full)
  double g_max{0.0};      // peak dipole coupling
  double w0{0.0};         // mode waist
  double lambda{0.0};     // wavelength
  double n_eff_bar{0.0};  // effective atom number
  double T{0.0};          // oven temperature, K
  double M{0.0};          // atomic mass, kg
  double drive{0.0};      // driving amplitude
  double tilt{0.0};       // beam tilt from perpendicular, rad
  double F{0.01};         // interaction-volume cutoff
  CavityKind cavity_kind{CavityKind::standing_wave};
  double delta_c{0.0};    // cavity detuning from the drive
  double delta_a{0.0};    // atomic detuning from the drive
  Truncation truncation{Truncation::two_quanta};
  double speed_scale{1.0};  // multiplies every sampled atomic speed

  friend bool operator==(const PhysicalParameters&, const PhysicalParameters&) = default;
};

/// Throws std::invalid_argument naming the first violated invariant.
void validate(const PhysicalParameters& p);

/// Atomic mass resolved from the transition wavelength (852 nm Cs, 780 nm Rb).
std::optional<double> mass_for_wavelength(double lambda);

/// Named parameter sets: "set1" (Cs, 852 nm) and "set2" (Rb, 780 nm).
std::optional<PhysicalParameters> preset(std::string_view name);

struct DerivedQuantities {
  double xi{0.0};               // 2 kappa / gamma
  double c1{0.0};               // g_max^2 / (kappa gamma)
  double two_c{0.0};            // 2 N C1
  double antibunch_scale{0.0};  // 2 C1 xi / (1 + xi)
  double omega_rabi{0.0};       // rad/s; |Omega| when overdamped
  bool overdamped{false};       // Omega^2 < 0
  double decay_time{0.0};       // 2 / (kappa + gamma/2), s
  double v_oven{0.0};
  double v_beam{0.0};
  double rate_R{0.0};           // source escape rate, 1/s
  double injection_rate{0.0};   // spawn rate over the injection plane, 1/s
  double transit_time{0.0};     // w0 / v_oven, s
  std::optional<double> quarter_wave_time;  // lambda / (4 v_oven sin(theta)), s

  friend bool operator==(const DerivedQuantities&, const DerivedQuantities&) = default;
};

DerivedQuantities derive(const PhysicalParameters& p);

/// (v_oven, v_beam) in m/s.
std::pair<double, double> mean_speeds(double temperature, double mass);

struct ModeGeometry {
  double w0{0.0};
  double lambda{0.0};
  double half_span{0.0};  // w0 sqrt(|ln F|)
  CavityKind kind{CavityKind::standing_wave};

  double wavenumber() const { return 2.0 * constants::pi / lambda; }
};

ModeGeometry mode_geometry(const PhysicalParameters& p);

/// Dipole coupling at `r` (rad/s in the units of g_max). Standing wave is real.
Complex coupling(const Vec3& r, const ModeGeometry& geom, double g_max);

/// N_eff^F / N_eff for cutoff F.
double effective_fraction(double F);

/// Source escape rate R = 64 N v_beam / (3 pi^2 w0).
double source_rate(double n_eff_bar, double v_beam, double w0);

/// Beam density 4 N / (pi w0^2 l).
double beam_density(double n_eff_bar, double w0, double l);

/// Rates in units of kappa used by the numeric engine.
struct EngineRates {
  double kappa{1.0};
  double gamma{0.0};
  double g_max{0.0};
  double drive{0.0};
  double delta_c{0.0};
  double delta_a{0.0};
};

EngineRates engine_rates(const PhysicalParameters& p);

/// Photon-number bound (1 + gamma/2kappa) / (8 N g^2 / kappa gamma).
double weak_field_bound(const PhysicalParameters& p);

}  // namespace cqed
