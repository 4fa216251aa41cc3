#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cqed/model.hpp"
#include "cqed/rng.hpp"
#include "cqed/types.hpp"

namespace cqed {

inline constexpr std::size_t pair_index(std::size_t j, std::size_t k) {  // j < k
  return k * (k - 1) / 2 + j;
}

inline constexpr std::size_t triple_index(std::size_t j, std::size_t k, std::size_t l) {  // j < k < l
  return l * (l - 1) * (l - 2) / 6 + k * (k - 1) / 2 + j;
}

inline constexpr std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }
inline constexpr std::size_t triple_count(std::size_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

/// Amplitudes c(n, S) of n photons with the atoms in S excited, n + |S| <= K.
///
///   photon[n]    S = {}          g0, alpha, eta, eta3
///   single[n][j] S = {j}         beta, zeta, zeta2
///   pair[n][jk]  S = {j, k}      theta, theta1   (pair_index)
///   triple[jkl]  S = {j, k, l}   iota            (triple_index)
///
/// Sectors above the truncation stay zero (photon) or empty (vectors).
struct Amplitudes {
  std::array<Complex, 4> photon{};
  std::array<std::vector<Complex>, 3> single;
  std::array<std::vector<Complex>, 2> pair;
  std::vector<Complex> triple;

  static constexpr std::size_t sector_count = 7;
  std::array<std::span<Complex>, sector_count> sectors();
  std::array<std::span<const Complex>, sector_count> sectors() const;

  /// Resize every sector for `atoms` atoms under truncation `k`.
  void shape(int k, std::size_t atoms);
  void set_zero();
  double norm2() const;
  std::size_t size() const;
};

class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Expectations {
  double photon_number{0.0};
  std::vector<double> atom_excitation;  // by slot
};

class TruncatedState {
 public:
  explicit TruncatedState(Truncation t, std::size_t max_atoms = 0);

  Truncation truncation() const { return truncation_; }
  int level() const { return level_; }
  std::size_t atom_count() const { return ids_.size(); }
  std::size_t max_atoms() const { return max_atoms_; }

  Amplitudes& amplitudes() { return amp_; }
  const Amplitudes& amplitudes() const { return amp_; }

  bool contains(AtomId id) const { return slots_.count(id) != 0; }
  std::size_t slot_of(AtomId id) const;
  AtomId id_at(std::size_t slot) const { return ids_.at(slot); }
  const std::vector<AtomId>& ids() const { return ids_; }

  /// New atom in its ground state; norm and existing amplitudes unchanged.
  void add_atom(AtomId id);

  /// Probability that the atom would be found excited.
  double excitation_probability(AtomId id) const;

  /// Disentangles the atom by a projective measurement of its excitation;
  /// returns true when the excited branch was selected.
  bool remove_atom(AtomId id, Rng& rng);

  /// Removes the atom on the ground-state branch.
  void drop_atom(AtomId id);

  double norm2() const { return amp_.norm2(); }
  void renormalize();

  double photon_number() const;
  Expectations expectations() const;
  /// photon_number plus per-slot excitation written into `excitation`.
  double expectations(std::vector<double>& excitation) const;

  void apply_cavity_jump();
  void apply_atom_jump(std::size_t slot);

  /// Resets to the vacuum over the current atoms.
  void set_vacuum();

  /// Rows: sector,i,j,k,re,im. photon/single/pair rows carry the photon
  /// number in i and atom slots in j, k; triple rows carry three slots.
  /// Unused fields are -1.
  void write_csv(std::ostream& out) const;

 private:
  void lower_atom(std::size_t slot);  // sigma_- on slot, in place
  void zero_excited(std::size_t slot);
  double excited_weight(std::size_t slot) const;
  void compact(std::size_t slot);

  Truncation truncation_;
  int level_;
  std::size_t max_atoms_;
  Amplitudes amp_;
  std::vector<AtomId> ids_;
  std::unordered_map<AtomId, std::size_t> slots_;
};

/// Default atom cap per truncation (memory guard for the cubic sector).
std::size_t default_max_atoms(Truncation t);

}  // namespace cqed
