#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <optional>
#include <vector>

#include "cqed/g2_estimate.hpp"
#include "cqed/model.hpp"
#include "cqed/rng.hpp"
#include "cqed/trajectory.hpp"

namespace cqed {

struct AtomConfiguration {
  std::vector<Vec3> positions;    // m
  std::vector<Complex> couplings;  // rad/s
  double c_sum{0.0};               // sum_j |g_j|^2 / (kappa gamma)
  double n_eff{0.0};               // sum_j |g_j|^2 / g_max^2
};

AtomConfiguration make_configuration(std::vector<Vec3> positions, const PhysicalParameters& p);

/// e^{-a tau}[cos(W tau) + (a/W) sin(W tau)] with a = (kappa + gamma/2)/2 and
/// W^2 = omega_sq, continued to cosh/sinh for W^2 < 0 (all in units of kappa).
double rabi_envelope(double tau, double a, double omega_sq);

/// Ideal coupling, all atoms at g_max; tau in units of 1/kappa.
G2Curve g2_ideal(const PhysicalParameters& p, std::span<const double> tau_kappa);

/// Stationary configuration with unequal couplings.
G2Curve g2_fixed(const AtomConfiguration& config, const PhysicalParameters& p, std::span<const double> tau_kappa);

/// Steady intracavity photon number (E/kappa)^2 / (1 + 2C)^2.
double stationary_photon_number(const AtomConfiguration& config, const PhysicalParameters& p);

/// Poisson number of atoms placed uniformly in the volume where the coupling is >= F g_max.
AtomConfiguration draw_configuration(const PhysicalParameters& p, Rng& rng);

enum class AveragingScheme { naive, weighted };

std::string_view to_string(AveragingScheme s);
std::optional<AveragingScheme> parse_scheme(std::string_view text);

struct McAverage {
  G2Curve curve;
  double limit{1.0};  // tau -> infinity value
  double mean_atoms{0.0};
  double mean_n_eff{0.0};
  std::uint64_t samples{0};
};

/// Sample i is drawn from make_stream(seed, i), so results do not depend on `workers`.
McAverage g2_mc_average(const PhysicalParameters& p, AveragingScheme scheme, std::size_t n_samples,
                        std::span<const double> tau_kappa, std::uint64_t seed, unsigned workers = 1);

/// Configuration used by sample `index` of g2_mc_average.
AtomConfiguration mc_configuration(const PhysicalParameters& p, std::uint64_t seed, std::uint64_t index);

/// mean(n(t) n(t + tau)) / mean(n)^2 pooled over all series, which must share dt.
/// Lags snap to multiples of the series spacing; errors are a block jackknife.
G2Curve g2_semiclassical(std::span<const SemiclassicalSeries> series, std::span<const double> tau_kappa,
                         double kappa, std::size_t blocks_per_series = 16);

struct Histogram {
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  std::vector<double> prob;
  double mean{0.0};
  double relative_variance{0.0};  // variance / mean^2
};

Histogram photon_histogram(std::span<const double> series, std::size_t bins);

struct ScatteringDiagnostics {
  double r_forwards{0.0};  // 1/s
  double r_side{0.0};      // 1/s
  double ratio{0.0};
  double weak_field_bound{0.0};
};

ScatteringDiagnostics scattering_diagnostics(const AtomConfiguration& config, const PhysicalParameters& p);

}  // namespace cqed
