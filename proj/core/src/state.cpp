#include "cqed/state.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace cqed {

namespace {

double sq(Complex c) { return c.real() * c.real() + c.imag() * c.imag(); }

double sum_sq(std::span<const Complex> v) {
  double s = 0.0;
  for (Complex c : v) s += sq(c);
  return s;
}

std::size_t sorted_triple(std::size_t a, std::size_t b, std::size_t c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return triple_index(a, b, c);
}

std::size_t sorted_pair(std::size_t a, std::size_t b) {
  return a < b ? pair_index(a, b) : pair_index(b, a);
}

}  // namespace

std::array<std::span<Complex>, Amplitudes::sector_count> Amplitudes::sectors() {
  return {std::span<Complex>(photon), single[0], single[1], single[2], pair[0], pair[1], triple};
}

std::array<std::span<const Complex>, Amplitudes::sector_count> Amplitudes::sectors() const {
  return {std::span<const Complex>(photon), single[0], single[1], single[2], pair[0], pair[1], triple};
}

void Amplitudes::shape(int k, std::size_t atoms) {
  for (int n = k + 1; n < 4; ++n) photon[static_cast<std::size_t>(n)] = {};
  for (int n = 0; n < 3; ++n) single[static_cast<std::size_t>(n)].resize(n + 1 <= k ? atoms : 0);
  for (int n = 0; n < 2; ++n) pair[static_cast<std::size_t>(n)].resize(n + 2 <= k ? pair_count(atoms) : 0);
  triple.resize(k >= 3 ? triple_count(atoms) : 0);
}

void Amplitudes::set_zero() {
  for (auto s : sectors()) std::fill(s.begin(), s.end(), Complex{});
}

double Amplitudes::norm2() const {
  double total = 0.0;
  for (auto s : sectors()) total += sum_sq(s);
  return total;
}

std::size_t Amplitudes::size() const {
  std::size_t total = 0;
  for (auto s : sectors()) total += s.size();
  return total;
}

std::size_t default_max_atoms(Truncation t) {
  switch (t) {
    case Truncation::one_quantum:
      return 1'000'000;
    case Truncation::two_quanta:
      return 4000;
    case Truncation::three_quanta:
      return 250;
  }
  return 4000;
}

TruncatedState::TruncatedState(Truncation t, std::size_t max_atoms)
    : truncation_(t),
      level_(excitation_limit(t)),
      max_atoms_(max_atoms == 0 ? default_max_atoms(t) : max_atoms) {
  amp_.shape(level_, 0);
  amp_.photon[0] = 1.0;
}

std::size_t TruncatedState::slot_of(AtomId id) const {
  auto it = slots_.find(id);
  if (it == slots_.end()) throw std::out_of_range("unknown atom id " + std::to_string(id));
  return it->second;
}

void TruncatedState::add_atom(AtomId id) {
  if (contains(id)) throw std::invalid_argument("duplicate atom id " + std::to_string(id));
  if (ids_.size() >= max_atoms_) {
    throw ResourceCapError("atom count would exceed the cap of " + std::to_string(max_atoms_) +
                           " for the " + std::string(to_string(truncation_)) + " basis");
  }
  slots_.emplace(id, ids_.size());
  ids_.push_back(id);
  amp_.shape(level_, ids_.size());
}

double TruncatedState::excited_weight(std::size_t s) const {
  const std::size_t n_atoms = ids_.size();
  double w = 0.0;
  for (const auto& v : amp_.single) {
    if (!v.empty()) w += sq(v[s]);
  }
  for (const auto& v : amp_.pair) {
    if (v.empty()) continue;
    for (std::size_t m = 0; m < n_atoms; ++m) {
      if (m != s) w += sq(v[sorted_pair(m, s)]);
    }
  }
  if (!amp_.triple.empty()) {
    for (std::size_t p = 1; p < n_atoms; ++p) {
      if (p == s) continue;
      for (std::size_t m = 0; m < p; ++m) {
        if (m != s) w += sq(amp_.triple[sorted_triple(m, p, s)]);
      }
    }
  }
  return w;
}

double TruncatedState::excitation_probability(AtomId id) const {
  return excited_weight(slot_of(id)) / norm2();
}

void TruncatedState::zero_excited(std::size_t s) {
  const std::size_t n_atoms = ids_.size();
  for (auto& v : amp_.single) {
    if (!v.empty()) v[s] = {};
  }
  for (auto& v : amp_.pair) {
    if (v.empty()) continue;
    for (std::size_t m = 0; m < n_atoms; ++m) {
      if (m != s) v[sorted_pair(m, s)] = {};
    }
  }
  if (!amp_.triple.empty()) {
    for (std::size_t p = 1; p < n_atoms; ++p) {
      if (p == s) continue;
      for (std::size_t m = 0; m < p; ++m) {
        if (m != s) amp_.triple[sorted_triple(m, p, s)] = {};
      }
    }
  }
}

void TruncatedState::lower_atom(std::size_t s) {
  const std::size_t n_atoms = ids_.size();
  // Each level reads the one above before that level is overwritten.
  for (std::size_t n = 0; n < 4; ++n) {
    amp_.photon[n] = n < 3 && !amp_.single[n].empty() ? amp_.single[n][s] : Complex{};
  }
  for (std::size_t n = 0; n < 3; ++n) {
    auto& v = amp_.single[n];
    if (v.empty()) continue;
    const bool has_pair = n < 2 && !amp_.pair[n].empty();
    for (std::size_t m = 0; m < n_atoms; ++m) {
      v[m] = (m != s && has_pair) ? amp_.pair[n][sorted_pair(m, s)] : Complex{};
    }
  }
  for (std::size_t n = 0; n < 2; ++n) {
    auto& v = amp_.pair[n];
    if (v.empty()) continue;
    const bool has_triple = n == 0 && !amp_.triple.empty();
    for (std::size_t p = 1; p < n_atoms; ++p) {
      for (std::size_t m = 0; m < p; ++m) {
        const bool keep = has_triple && m != s && p != s;
        v[pair_index(m, p)] = keep ? amp_.triple[sorted_triple(m, p, s)] : Complex{};
      }
    }
  }
  std::fill(amp_.triple.begin(), amp_.triple.end(), Complex{});
}

void TruncatedState::compact(std::size_t s) {
  const std::size_t last = ids_.size() - 1;
  if (s != last) {
    for (auto& v : amp_.single) {
      if (!v.empty()) v[s] = v[last];
    }
    for (auto& v : amp_.pair) {
      if (v.empty()) continue;
      for (std::size_t m = 0; m < last; ++m) {
        if (m != s) v[sorted_pair(m, s)] = v[pair_index(m, last)];
      }
    }
    if (!amp_.triple.empty()) {
      for (std::size_t p = 1; p < last; ++p) {
        if (p == s) continue;
        for (std::size_t m = 0; m < p; ++m) {
          if (m != s) amp_.triple[sorted_triple(m, p, s)] = amp_.triple[triple_index(m, p, last)];
        }
      }
    }
    const AtomId moved = ids_[last];
    ids_[s] = moved;
    slots_[moved] = s;
  }
  ids_.pop_back();
  amp_.shape(level_, ids_.size());
}

bool TruncatedState::remove_atom(AtomId id, Rng& rng) {
  const std::size_t s = slot_of(id);
  const double norm = norm2();
  if (!(norm > 0.0)) throw std::domain_error("remove_atom: state has zero norm");
  const double p_exc = excited_weight(s) / norm;
  if (p_exc > 1.0 + 1e-9 || !std::isfinite(p_exc)) {
    throw std::domain_error("remove_atom: excitation probability " + std::to_string(p_exc));
  }
  const bool excited = uniform01(rng) < p_exc;
  if (excited) {
    lower_atom(s);
  } else {
    zero_excited(s);
  }
  slots_.erase(id);
  compact(s);
  renormalize();
  return excited;
}

void TruncatedState::drop_atom(AtomId id) {
  const std::size_t s = slot_of(id);
  zero_excited(s);
  slots_.erase(id);
  compact(s);
  renormalize();
}

void TruncatedState::renormalize() {
  const double n2 = norm2();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::domain_error("renormalize: norm is zero or not finite");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto sector : amp_.sectors()) {
    for (Complex& c : sector) c = {c.real() * scale, c.imag() * scale};
  }
}

double TruncatedState::photon_number() const {
  double weighted = 0.0;
  for (std::size_t n = 1; n < 4; ++n) {
    double w = sq(amp_.photon[n]);
    if (n < 3) w += sum_sq(amp_.single[n]);
    if (n < 2) w += sum_sq(amp_.pair[n]);
    weighted += static_cast<double>(n) * w;
  }
  const double n2 = norm2();
  if (!(n2 > 0.0)) throw std::domain_error("photon_number: zero norm");
  return weighted / n2;
}

double TruncatedState::expectations(std::vector<double>& e) const {
  const std::size_t n_atoms = ids_.size();
  e.assign(n_atoms, 0.0);
  for (const auto& v : amp_.single) {
    for (std::size_t j = 0; j < v.size(); ++j) e[j] += sq(v[j]);
  }
  for (const auto& v : amp_.pair) {
    if (v.empty()) continue;
    std::size_t idx = 0;
    for (std::size_t k = 1; k < n_atoms; ++k) {
      for (std::size_t j = 0; j < k; ++j, ++idx) {
        const double w = sq(v[idx]);
        e[j] += w;
        e[k] += w;
      }
    }
  }
  if (!amp_.triple.empty()) {
    std::size_t idx = 0;
    for (std::size_t l = 2; l < n_atoms; ++l) {
      for (std::size_t k = 1; k < l; ++k) {
        for (std::size_t j = 0; j < k; ++j, ++idx) {
          const double w = sq(amp_.triple[idx]);
          e[j] += w;
          e[k] += w;
          e[l] += w;
        }
      }
    }
  }
  const double n2 = norm2();
  if (!(n2 > 0.0)) throw std::domain_error("expectations: zero norm");
  for (double& x : e) x /= n2;
  return photon_number();
}

Expectations TruncatedState::expectations() const {
  Expectations out;
  out.photon_number = expectations(out.atom_excitation);
  return out;
}

void TruncatedState::apply_cavity_jump() {
  if (!(photon_number() > 0.0)) throw std::domain_error("apply_cavity_jump: no photons");
  for (std::size_t n = 0; n < 4; ++n) {
    amp_.photon[n] = n < 3 ? std::sqrt(static_cast<double>(n + 1)) * amp_.photon[n + 1] : Complex{};
  }
  for (std::size_t n = 0; n < 3; ++n) {
    auto& v = amp_.single[n];
    const bool has_upper = n + 1 < 3 && !amp_.single[n + 1].empty();
    const double f = std::sqrt(static_cast<double>(n + 1));
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = has_upper ? f * amp_.single[n + 1][j] : Complex{};
  }
  {
    auto& v = amp_.pair[0];
    const bool has_upper = !amp_.pair[1].empty();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = has_upper ? amp_.pair[1][j] : Complex{};
    std::fill(amp_.pair[1].begin(), amp_.pair[1].end(), Complex{});
  }
  std::fill(amp_.triple.begin(), amp_.triple.end(), Complex{});
  renormalize();
}

void TruncatedState::apply_atom_jump(std::size_t slot) {
  if (slot >= ids_.size()) throw std::out_of_range("apply_atom_jump: bad slot");
  if (!(excited_weight(slot) > 0.0)) throw std::domain_error("apply_atom_jump: atom not excited");
  lower_atom(slot);
  renormalize();
}

void TruncatedState::set_vacuum() {
  amp_.set_zero();
  amp_.photon[0] = 1.0;
}

void TruncatedState::write_csv(std::ostream& out) const {
  out << "sector,i,j,k,re,im\n";
  out.precision(17);
  auto row = [&](const char* sector, long i, long j, long k, Complex c) {
    out << sector << ',' << i << ',' << j << ',' << k << ',' << c.real() << ',' << c.imag() << '\n';
  };
  const long n_atoms = static_cast<long>(ids_.size());
  for (long n = 0; n <= level_; ++n) row("photon", n, -1, -1, amp_.photon[static_cast<std::size_t>(n)]);
  for (long n = 0; n < 3; ++n) {
    const auto& v = amp_.single[static_cast<std::size_t>(n)];
    for (std::size_t j = 0; j < v.size(); ++j) row("single", n, static_cast<long>(j), -1, v[j]);
  }
  for (long n = 0; n < 2; ++n) {
    const auto& v = amp_.pair[static_cast<std::size_t>(n)];
    if (v.empty()) continue;
    std::size_t idx = 0;
    for (long k = 1; k < n_atoms; ++k) {
      for (long j = 0; j < k; ++j) row("pair", n, j, k, v[idx++]);
    }
  }
  std::size_t idx = 0;
  for (long l = 2; l < n_atoms && !amp_.triple.empty(); ++l) {
    for (long k = 1; k < l; ++k) {
      for (long j = 0; j < k; ++j) row("triple", j, k, l, amp_.triple[idx++]);
    }
  }
}

}  // namespace cqed
