#include "cqed/propagator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cqed {

GeneratorRates generator_rates(const EngineRates& r) {
  return {r.kappa, r.gamma, r.drive, r.delta_c, r.delta_a};
}

namespace {

// out = decay * c + drive * (sqrt(n) lower - sqrt(n+1) upper), elementwise.
void diagonal(std::span<Complex> out, std::span<const Complex> c, Complex decay, double e_lower,
              std::span<const Complex> lower, double e_upper, std::span<const Complex> upper) {
  const std::size_t size = c.size();
  for (std::size_t i = 0; i < size; ++i) {
    Complex v = cmul(decay, c[i]);
    if (!lower.empty()) v += e_lower * lower[i];
    if (!upper.empty()) v -= e_upper * upper[i];
    out[i] = v;
  }
}

template <class G>
void link_photon_single(Complex& out_photon, std::span<Complex> out_single, Complex c_photon,
                        std::span<const Complex> c_single, std::span<const G> g, double s) {
  Complex acc{};
  const Complex sp = s * c_photon;
  for (std::size_t j = 0; j < g.size(); ++j) {
    acc += times(g[j], c_single[j]);
    out_single[j] -= times(conj_if_complex(g[j]), sp);
  }
  out_photon += s * acc;
}

template <class G>
void link_single_pair(std::span<Complex> out_single, std::span<Complex> out_pair, std::span<const Complex> c_single,
                      std::span<const Complex> c_pair, std::span<const G> g, double s) {
  const std::size_t n_atoms = g.size();
  for (std::size_t k = 1; k < n_atoms; ++k) {
    const std::size_t base = pair_index(0, k);
    const Complex* cp = c_pair.data() + base;
    Complex* op = out_pair.data() + base;
    const G sgk = s * g[k];
    const G sgk_c = s * conj_if_complex(g[k]);
    const Complex ck = c_single[k];
    Complex acc_k{};
    for (std::size_t j = 0; j < k; ++j) {
      const Complex p = cp[j];
      acc_k += times(g[j], p);
      out_single[j] += times(sgk, p);
      op[j] -= s * times(conj_if_complex(g[j]), ck) + times(sgk_c, c_single[j]);
    }
    out_single[k] += s * acc_k;
  }
}

template <class G>
void link_pair_triple(std::span<Complex> out_pair, std::span<Complex> out_triple, std::span<const Complex> c_pair,
                      std::span<const Complex> c_triple, std::span<const G> g) {
  const std::size_t n_atoms = g.size();
  std::size_t idx = 0;
  for (std::size_t l = 2; l < n_atoms; ++l) {
    const G gl = g[l];
    const G gl_c = conj_if_complex(gl);
    for (std::size_t k = 1; k < l; ++k) {
      const G gk = g[k];
      const G gk_c = conj_if_complex(gk);
      const std::size_t kl = pair_index(k, l);
      const std::size_t base_jk = pair_index(0, k);
      const std::size_t base_jl = pair_index(0, l);
      const Complex c_kl = c_pair[kl];
      Complex acc_kl{};
      for (std::size_t j = 0; j < k; ++j, ++idx) {
        const Complex t = c_triple[idx];
        out_pair[base_jk + j] += times(gl, t);
        out_pair[base_jl + j] += times(gk, t);
        acc_kl += times(g[j], t);
        out_triple[idx] -= times(conj_if_complex(g[j]), c_kl) + times(gk_c, c_pair[base_jl + j]) +
                           times(gl_c, c_pair[base_jk + j]);
      }
      out_pair[kl] += acc_kl;
    }
  }
}

std::span<const Complex> maybe(const std::vector<Complex>& v) { return v; }

}  // namespace

template <class G>
void derivative(const Amplitudes& c, std::span<const G> g, const GeneratorRates& r, int level, Amplitudes& out) {
  const std::size_t n_atoms = c.single[0].size();
  if (g.size() != n_atoms) {
    throw std::invalid_argument("derivative: " + std::to_string(g.size()) + " couplings for " +
                                std::to_string(n_atoms) + " atoms");
  }
  out.shape(level, n_atoms);
  const std::size_t k_max = static_cast<std::size_t>(level);
  const Complex cav{r.kappa, r.delta_c};
  const Complex atom{0.5 * r.gamma, r.delta_a};
  auto decay = [&](std::size_t n, std::size_t m) {
    return -(static_cast<double>(n) * cav + static_cast<double>(m) * atom);
  };
  const double e = r.drive;
  auto root = [](std::size_t n) { return std::sqrt(static_cast<double>(n)); };

  for (std::size_t n = 0; n <= k_max; ++n) {
    Complex v = cmul(decay(n, 0), c.photon[n]);
    if (n > 0) v += e * root(n) * c.photon[n - 1];
    if (n < k_max) v -= e * root(n + 1) * c.photon[n + 1];
    out.photon[n] = v;
  }
  for (std::size_t n = 0; n + 1 <= k_max; ++n) {
    diagonal(out.single[n], c.single[n], decay(n, 1), e * root(n), n > 0 ? maybe(c.single[n - 1]) : std::span<const Complex>{},
             e * root(n + 1), n + 2 <= k_max ? maybe(c.single[n + 1]) : std::span<const Complex>{});
  }
  for (std::size_t n = 0; n + 2 <= k_max; ++n) {
    diagonal(out.pair[n], c.pair[n], decay(n, 2), e * root(n), n > 0 ? maybe(c.pair[n - 1]) : std::span<const Complex>{},
             e * root(n + 1), n + 3 <= k_max ? maybe(c.pair[n + 1]) : std::span<const Complex>{});
  }
  if (k_max >= 3) {
    diagonal(out.triple, c.triple, decay(0, 3), 0.0, {}, 0.0, {});
  }

  for (std::size_t n = 1; n <= k_max; ++n) {
    link_photon_single<G>(out.photon[n], out.single[n - 1], c.photon[n], c.single[n - 1], g, root(n));
  }
  for (std::size_t n = 1; n + 1 <= k_max; ++n) {
    link_single_pair<G>(out.single[n], out.pair[n - 1], c.single[n], c.pair[n - 1], g, root(n));
  }
  if (k_max >= 3) {
    link_pair_triple<G>(out.pair[1], out.triple, c.pair[1], c.triple, g);
  }
}

template void derivative<double>(const Amplitudes&, std::span<const double>, const GeneratorRates&, int,
                                 Amplitudes&);
template void derivative<Complex>(const Amplitudes&, std::span<const Complex>, const GeneratorRates&, int,
                                  Amplitudes&);

namespace {

void assign_axpy(Amplitudes& out, const Amplitudes& x, double a, const Amplitudes& k) {
  auto o = out.sectors();
  auto xs = x.sectors();
  auto ks = k.sectors();
  for (std::size_t s = 0; s < Amplitudes::sector_count; ++s) {
    for (std::size_t i = 0; i < xs[s].size(); ++i) o[s][i] = xs[s][i] + a * ks[s][i];
  }
}

void add_scaled(Amplitudes& out, double a, const Amplitudes& k) {
  auto o = out.sectors();
  auto ks = k.sectors();
  for (std::size_t s = 0; s < Amplitudes::sector_count; ++s) {
    for (std::size_t i = 0; i < ks[s].size(); ++i) o[s][i] += a * ks[s][i];
  }
}

}  // namespace

template <class G>
void Rk4::step(TruncatedState& state, std::span<const G> g, const GeneratorRates& rates, double dt) {
  Amplitudes& c = state.amplitudes();
  const int level = state.level();
  const std::size_t n_atoms = state.atom_count();
  stage_.shape(level, n_atoms);
  acc_.shape(level, n_atoms);

  derivative<G>(c, g, rates, level, k_);
  assign_axpy(acc_, c, dt / 6.0, k_);
  assign_axpy(stage_, c, dt / 2.0, k_);

  derivative<G>(stage_, g, rates, level, k_);
  add_scaled(acc_, dt / 3.0, k_);
  assign_axpy(stage_, c, dt / 2.0, k_);

  derivative<G>(stage_, g, rates, level, k_);
  add_scaled(acc_, dt / 3.0, k_);
  assign_axpy(stage_, c, dt, k_);

  derivative<G>(stage_, g, rates, level, k_);
  add_scaled(acc_, dt / 6.0, k_);

  std::swap(c, acc_);
}

template void Rk4::step<double>(TruncatedState&, std::span<const double>, const GeneratorRates&, double);
template void Rk4::step<Complex>(TruncatedState&, std::span<const Complex>, const GeneratorRates&, double);

}  // namespace cqed
