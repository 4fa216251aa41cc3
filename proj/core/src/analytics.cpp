#include "cqed/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace cqed {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double jackknife(const std::vector<double>& loo) {
  const std::size_t b = loo.size();
  if (b < 2) return nan;
  double mean = 0.0;
  for (double v : loo) mean += v;
  mean /= static_cast<double>(b);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  return std::sqrt(ss * static_cast<double>(b - 1) / static_cast<double>(b));
}

double half_decay(const PhysicalParameters& p) { return 0.5 * (1.0 + 0.5 * p.gamma / p.kappa); }

// Antibunching amplitude of the fixed-configuration formula (kappa units throughout).
struct FixedTerms {
  double amplitude{0.0};
  double omega_sq{0.0};
};

FixedTerms fixed_terms(const AtomConfiguration& c, const PhysicalParameters& p) {
  const double xi = 2.0 * p.kappa / p.gamma;
  double s = 0.0;
  for (Complex g : c.couplings) {
    const double c1j = std::norm(g) / (p.kappa * p.gamma);
    s += 2.0 * c1j / (1.0 + xi * (1.0 + c.c_sum) - 2.0 * xi * c1j);
  }
  const double amp = ((1.0 + xi * (1.0 + c.c_sum)) * s - 2.0 * c.c_sum) / (1.0 + (1.0 + xi / 2.0) * s);
  const double g_max = p.g_max / p.kappa;
  const double diff = 0.5 * (1.0 - 0.5 * p.gamma / p.kappa);
  return {amp, c.n_eff * g_max * g_max - diff * diff};
}

G2Curve square_curve(std::span<const double> tau, const PhysicalParameters& p, double amplitude, double omega_sq) {
  G2Curve curve = make_curve(std::vector<double>(tau.begin(), tau.end()), p.kappa);
  const double a = half_decay(p);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double v = 1.0 - amplitude * rabi_envelope(tau[i], a, omega_sq);
    curve.g2[i] = v * v;
  }
  return curve;
}

}  // namespace

double rabi_envelope(double tau, double a, double omega_sq) {
  const double w = std::sqrt(std::abs(omega_sq));
  if (w < 1e-9 * a) return std::exp(-a * tau) * (1.0 + a * tau);
  if (omega_sq > 0.0) return std::exp(-a * tau) * (std::cos(w * tau) + a / w * std::sin(w * tau));
  // w < a, so both exponentials decay
  const double slow = std::exp(-(a - w) * tau);
  const double fast = std::exp(-(a + w) * tau);
  return 0.5 * (slow + fast) + 0.5 * a / w * (slow - fast);
}

AtomConfiguration make_configuration(std::vector<Vec3> positions, const PhysicalParameters& p) {
  AtomConfiguration c;
  const ModeGeometry geom = mode_geometry(p);
  c.couplings.reserve(positions.size());
  double sum = 0.0;
  for (const Vec3& r : positions) {
    const Complex g = coupling(r, geom, p.g_max);
    c.couplings.push_back(g);
    sum += std::norm(g);
  }
  c.positions = std::move(positions);
  c.c_sum = sum / (p.kappa * p.gamma);
  c.n_eff = sum / (p.g_max * p.g_max);
  return c;
}

G2Curve g2_ideal(const PhysicalParameters& p, std::span<const double> tau) {
  const DerivedQuantities d = derive(p);
  const double scale = d.antibunch_scale;
  const double amp = scale * d.two_c / (1.0 + d.two_c - scale);
  const double diff = 0.5 * (1.0 - 0.5 * p.gamma / p.kappa);
  const double g_max = p.g_max / p.kappa;
  return square_curve(tau, p, amp, p.n_eff_bar * g_max * g_max - diff * diff);
}

G2Curve g2_fixed(const AtomConfiguration& config, const PhysicalParameters& p, std::span<const double> tau) {
  validate(p);
  const FixedTerms t = fixed_terms(config, p);
  return square_curve(tau, p, t.amplitude, t.omega_sq);
}

double stationary_photon_number(const AtomConfiguration& config, const PhysicalParameters& p) {
  const double amp = (p.drive / p.kappa) / (1.0 + 2.0 * config.c_sum);
  return amp * amp;
}

AtomConfiguration draw_configuration(const PhysicalParameters& p, Rng& rng) {
  const double log_f = std::abs(std::log(p.F));
  const double radius = p.w0 * std::sqrt(log_f);
  const double zq = p.lambda / 4.0;
  // Density 4 N / (pi w0^2 l) over a slice of length l = lambda/2.
  const double mean = 4.0 * p.n_eff_bar * log_f;
  const std::uint64_t n = poisson(rng, mean);
  const double k = 2.0 * constants::pi / p.lambda;
  std::vector<Vec3> positions;
  positions.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double r = radius * std::sqrt(uniform01(rng));
    const double phi = 2.0 * constants::pi * uniform01(rng);
    const double z = zq * (2.0 * uniform01(rng) - 1.0);
    const double envelope = std::exp(-r * r / (p.w0 * p.w0));
    const double shape = p.cavity_kind == CavityKind::standing_wave ? std::cos(k * z) * envelope : envelope;
    if (shape >= p.F) positions.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return make_configuration(std::move(positions), p);
}

std::string_view to_string(AveragingScheme s) { return s == AveragingScheme::naive ? "naive" : "weighted"; }

std::optional<AveragingScheme> parse_scheme(std::string_view text) {
  if (text == "naive" || text == "mc-naive") return AveragingScheme::naive;
  if (text == "weighted" || text == "mc-weighted") return AveragingScheme::weighted;
  return std::nullopt;
}

AtomConfiguration mc_configuration(const PhysicalParameters& p, std::uint64_t seed, std::uint64_t index) {
  Rng rng = make_stream(seed, index);
  return draw_configuration(p, rng);
}

McAverage g2_mc_average(const PhysicalParameters& p, AveragingScheme scheme, std::size_t n_samples,
                        std::span<const double> tau, std::uint64_t seed, unsigned workers) {
  validate(p);
  if (n_samples == 0) throw std::invalid_argument("g2_mc_average: n_samples must be >= 1");
  const std::size_t points = tau.size();

  // Per-sample results, filled in parallel and reduced in index order.
  std::vector<double> values(n_samples * points);
  std::vector<double> photon(n_samples);
  std::vector<double> atoms(n_samples);
  std::vector<double> n_eff(n_samples);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const AtomConfiguration c = mc_configuration(p, seed, i);
      const FixedTerms t = fixed_terms(c, p);
      const double a = half_decay(p);
      for (std::size_t j = 0; j < points; ++j) {
        const double v = 1.0 - t.amplitude * rabi_envelope(tau[j], a, t.omega_sq);
        values[i * points + j] = v * v;
      }
      photon[i] = stationary_photon_number(c, p);
      atoms[i] = static_cast<double>(c.positions.size());
      n_eff[i] = c.n_eff;
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_samples)));
  if (threads == 1) {
    work(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(work, n_samples * t / threads, n_samples * (t + 1) / threads);
    }
    for (auto& th : pool) th.join();
  }

  const std::size_t blocks = std::min<std::size_t>(20, n_samples);
  std::vector<std::size_t> block_of(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) block_of[i] = i * blocks / n_samples;

  McAverage out;
  out.samples = n_samples;
  out.curve = make_curve(std::vector<double>(tau.begin(), tau.end()), p.kappa);
  for (std::size_t i = 0; i < n_samples; ++i) {
    out.mean_atoms += atoms[i];
    out.mean_n_eff += n_eff[i];
  }
  out.mean_atoms /= static_cast<double>(n_samples);
  out.mean_n_eff /= static_cast<double>(n_samples);

  // Block sums of weight * value and of the normalizing quantity.
  std::vector<double> w_block(blocks, 0.0);
  std::vector<double> cnt_block(blocks, 0.0);
  std::vector<double> w2_block(blocks, 0.0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double n = photon[i];
    w_block[block_of[i]] += scheme == AveragingScheme::weighted ? n : 1.0;
    w2_block[block_of[i]] += scheme == AveragingScheme::weighted ? n * n : 1.0;
    cnt_block[block_of[i]] += 1.0;
  }
  auto total = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  };
  const double w_tot = total(w_block);
  const double w2_tot = total(w2_block);
  const double cnt_tot = total(cnt_block);
  // g2 = (sum w2 v / cnt) / (sum w / cnt)^2 ; for the naive scheme w = w2 = 1.
  auto ratio = [](double num, double cnt, double w, double wcnt) { return num / cnt / ((w / wcnt) * (w / wcnt)); };
  out.limit = ratio(w2_tot, cnt_tot, w_tot, cnt_tot);

  std::vector<double> num_block(blocks);
  std::vector<double> loo(blocks);
  for (std::size_t j = 0; j < points; ++j) {
    std::fill(num_block.begin(), num_block.end(), 0.0);
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double weight = scheme == AveragingScheme::weighted ? photon[i] * photon[i] : 1.0;
      num_block[block_of[i]] += weight * values[i * points + j];
    }
    const double num_tot = total(num_block);
    out.curve.g2[j] = ratio(num_tot, cnt_tot, w_tot, cnt_tot);
    out.curve.n[j] = n_samples;
    if (blocks >= 2) {
      for (std::size_t b = 0; b < blocks; ++b) {
        loo[b] = ratio(num_tot - num_block[b], cnt_tot - cnt_block[b], w_tot - w_block[b], cnt_tot - cnt_block[b]);
      }
      out.curve.std_error[j] = jackknife(loo);
    }
  }
  return out;
}

G2Curve g2_semiclassical(std::span<const SemiclassicalSeries> series, std::span<const double> tau, double kappa,
                         std::size_t blocks_per_series) {
  if (series.empty()) throw std::invalid_argument("g2_semiclassical: no series");
  const double dt = series.front().dt;
  for (const auto& s : series) {
    if (std::abs(s.dt - dt) > 1e-12 * dt) throw std::invalid_argument("g2_semiclassical: series spacing differs");
  }
  std::vector<std::size_t> lags(tau.size());
  std::vector<double> grid(tau.size());
  std::size_t max_lag = 0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    lags[i] = static_cast<std::size_t>(std::llround(tau[i] / dt));
    grid[i] = static_cast<double>(lags[i]) * dt;
    max_lag = std::max(max_lag, lags[i]);
  }

  // Pooled block sums over every series.
  std::vector<double> block_x;
  std::vector<double> block_n;
  std::vector<std::vector<double>> block_xx;  // [block][lag]
  for (const auto& s : series) {
    const auto& x = s.photon_number;
    if (x.size() <= max_lag + 1) throw std::invalid_argument("g2_semiclassical: series too short for the lag grid");
    const std::size_t count = x.size() - max_lag;
    const std::size_t nb = std::max<std::size_t>(1, std::min(blocks_per_series, count));
    const std::size_t len = count / nb;
    for (std::size_t b = 0; b < nb; ++b) {
      double sx = 0.0;
      std::vector<double> sxx(lags.size(), 0.0);
      for (std::size_t t = b * len; t < (b + 1) * len; ++t) {
        sx += x[t];
        for (std::size_t li = 0; li < lags.size(); ++li) sxx[li] += x[t] * x[t + lags[li]];
      }
      block_x.push_back(sx);
      block_n.push_back(static_cast<double>(len));
      block_xx.push_back(std::move(sxx));
    }
  }

  G2Curve curve = make_curve(grid, kappa);
  const std::size_t blocks = block_x.size();
  double x_tot = 0.0;
  double n_tot = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    x_tot += block_x[b];
    n_tot += block_n[b];
  }
  auto ratio = [](double xx, double x, double n) {
    const double m = x / n;
    return m == 0.0 ? nan : xx / n / (m * m);
  };
  std::vector<double> loo(blocks);
  for (std::size_t li = 0; li < lags.size(); ++li) {
    double xx_tot = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) xx_tot += block_xx[b][li];
    curve.g2[li] = ratio(xx_tot, x_tot, n_tot);
    curve.n[li] = static_cast<std::uint64_t>(n_tot);
    if (blocks >= 2) {
      for (std::size_t b = 0; b < blocks; ++b) {
        loo[b] = ratio(xx_tot - block_xx[b][li], x_tot - block_x[b], n_tot - block_n[b]);
      }
      curve.std_error[li] = jackknife(loo);
    }
  }
  return curve;
}

Histogram photon_histogram(std::span<const double> series, std::size_t bins) {
  if (series.empty()) throw std::invalid_argument("photon_histogram: empty series");
  if (bins < 2) throw std::invalid_argument("photon_histogram: need at least 2 bins");
  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *lo_it;
  double hi = *hi_it;
  if (hi <= lo) hi = lo + std::max(std::abs(lo), 1.0) * 1e-9 * static_cast<double>(bins);
  const double width = (hi - lo) / static_cast<double>(bins);

  Histogram h;
  h.prob.assign(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b) {
    h.bin_lo.push_back(lo + width * static_cast<double>(b));
    h.bin_hi.push_back(b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1));
  }
  double sum = 0.0;
  for (double x : series) {
    auto b = static_cast<std::size_t>((x - lo) / width);
    h.prob[std::min(b, bins - 1)] += 1.0;
    sum += x;
  }
  const double count = static_cast<double>(series.size());
  for (double& p : h.prob) p /= count;
  h.mean = sum / count;
  double var = 0.0;
  for (double x : series) var += (x - h.mean) * (x - h.mean);
  var /= count;
  h.relative_variance = h.mean == 0.0 ? 0.0 : var / (h.mean * h.mean);
  return h;
}

ScatteringDiagnostics scattering_diagnostics(const AtomConfiguration& config, const PhysicalParameters& p) {
  ScatteringDiagnostics d;
  d.r_forwards = 2.0 * p.kappa * stationary_photon_number(config, p);
  d.ratio = 2.0 * config.c_sum;
  d.r_side = d.ratio * d.r_forwards;
  d.weak_field_bound = weak_field_bound(p);
  return d;
}

}  // namespace cqed
