#include <doctest.h>

#include <algorithm>
#include <set>

#include "cqed/dense_oracle.hpp"
#include "cqed/state.hpp"
#include "dense_embed.hpp"

using namespace cqed;
using cqed::test::embed;

namespace {

TruncatedState random_state(Truncation t, std::size_t atoms, std::uint64_t seed) {
  TruncatedState s(t);
  for (std::size_t j = 0; j < atoms; ++j) s.add_atom(static_cast<AtomId>(100 + j));
  Rng rng(seed);
  test::fill_random(s, rng);
  return s;
}

// Reduced vector over the atoms listed in `keep` (old slot indices, new order),
// assuming the removed atom is in its ground state.
Eigen::VectorXcd reduce(const Eigen::VectorXcd& v, int level, std::size_t atoms, const std::vector<std::size_t>& keep) {
  const std::size_t block = std::size_t{1} << atoms;
  const std::size_t new_block = std::size_t{1} << keep.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>((level + 1) * new_block));
  for (int n = 0; n <= level; ++n) {
    for (std::size_t nb = 0; nb < new_block; ++nb) {
      std::size_t bits = 0;
      for (std::size_t i = 0; i < keep.size(); ++i)
        if (nb & (std::size_t{1} << i)) bits |= std::size_t{1} << keep[i];
      out(static_cast<Eigen::Index>(n * new_block + nb)) = v(static_cast<Eigen::Index>(n * block + bits));
    }
  }
  return out;
}

double max_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("pair and triple indices enumerate subsets without gaps") {
  const std::size_t n = 9;
  std::set<std::size_t> pairs;
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t j = 0; j < k; ++j) pairs.insert(pair_index(j, k));
  CHECK(pairs.size() == pair_count(n));
  CHECK(*pairs.rbegin() == pair_count(n) - 1);
  std::set<std::size_t> triples;
  for (std::size_t l = 2; l < n; ++l)
    for (std::size_t k = 1; k < l; ++k)
      for (std::size_t j = 0; j < k; ++j) triples.insert(triple_index(j, k, l));
  CHECK(triples.size() == triple_count(n));
  CHECK(*triples.rbegin() == triple_count(n) - 1);
}

TEST_CASE("sector sizes follow the truncation") {
  for (auto t : {Truncation::one_quantum, Truncation::two_quanta, Truncation::three_quanta}) {
    TruncatedState s(t);
    for (AtomId id = 0; id < 5; ++id) s.add_atom(id);
    const std::size_t expected = [&] {
      std::size_t total = 0;
      const int k = excitation_limit(t);
      // subsets of size m with n photons, n + m <= k
      const std::size_t binom[4] = {1, 5, 10, 10};
      for (int m = 0; m <= k; ++m) total += binom[m] * static_cast<std::size_t>(k - m + 1);
      return total;
    }();
    CHECK(s.amplitudes().size() == expected + static_cast<std::size_t>(3 - excitation_limit(t)));
  }
}

TEST_CASE("add_atom keeps norm and amplitudes; duplicates and caps are rejected") {
  auto s = random_state(Truncation::two_quanta, 3, 7);
  const auto before = embed(s.amplitudes(), 2, 3);
  s.add_atom(999);
  const auto after = embed(s.amplitudes(), 2, 4);
  CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-14));
  // the new atom is ground: components with its bit clear reproduce the old state
  CHECK(max_diff(reduce(after, 2, 4, {0, 1, 2}), before) == 0.0);
  CHECK_THROWS_AS(s.add_atom(999), std::invalid_argument);

  TruncatedState capped(Truncation::three_quanta, 2);
  capped.add_atom(1);
  capped.add_atom(2);
  CHECK_THROWS_AS(capped.add_atom(3), ResourceCapError);
}

TEST_CASE("cavity and atom jumps match the dense operators") {
  for (auto t : {Truncation::two_quanta, Truncation::three_quanta}) {
    const int k = excitation_limit(t);
    const std::size_t atoms = 4;
    const auto a = dense_annihilation(k, atoms);

    auto s = random_state(t, atoms, 11 + static_cast<std::uint64_t>(k));
    Eigen::VectorXcd v = a * embed(s.amplitudes(), k, atoms);
    v /= v.norm();
    s.apply_cavity_jump();
    CHECK(max_diff(embed(s.amplitudes(), k, atoms), v) < 1e-14);

    for (std::size_t j = 0; j < atoms; ++j) {
      auto sj = random_state(t, atoms, 40 + j);
      Eigen::VectorXcd w = dense_sigma_minus(j, k, atoms) * embed(sj.amplitudes(), k, atoms);
      w /= w.norm();
      sj.apply_atom_jump(j);
      CHECK(max_diff(embed(sj.amplitudes(), k, atoms), w) < 1e-14);
    }
  }
}

TEST_CASE("expectations match the dense operators") {
  const int k = 3;
  const std::size_t atoms = 4;
  auto s = random_state(Truncation::three_quanta, atoms, 5);
  const auto v = embed(s.amplitudes(), k, atoms);
  const auto a = dense_annihilation(k, atoms);
  const auto e = s.expectations();
  CHECK(e.photon_number == doctest::Approx((a * v).squaredNorm()).epsilon(1e-13));
  CHECK(s.photon_number() == doctest::Approx(e.photon_number).epsilon(1e-14));
  for (std::size_t j = 0; j < atoms; ++j) {
    const double p = (dense_sigma_minus(j, k, atoms) * v).squaredNorm();
    CHECK(e.atom_excitation[j] == doctest::Approx(p).epsilon(1e-13));
    CHECK(s.excitation_probability(s.id_at(j)) == doctest::Approx(p).epsilon(1e-13));
  }
}

TEST_CASE("remove_atom applies the measurement branch and compacts slots") {
  const int k = 3;
  const std::size_t atoms = 4;
  int excited_seen = 0;
  int ground_seen = 0;
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    auto s = random_state(Truncation::three_quanta, atoms, 100 + trial);
    const std::size_t slot = trial % atoms;
    const AtomId id = s.id_at(slot);
    const auto v = embed(s.amplitudes(), k, atoms);

    Rng rng(trial);
    const bool excited = s.remove_atom(id, rng);
    (excited ? excited_seen : ground_seen)++;

    Eigen::VectorXcd branch;
    if (excited) {
      branch = dense_sigma_minus(slot, k, atoms) * v;
    } else {
      branch = v;
      const auto s_j = dense_sigma_minus(slot, k, atoms);
      branch -= (s_j.adjoint() * s_j) * v;
    }
    // swap-with-last: the former last slot now occupies `slot`
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i + 1 < atoms; ++i) keep.push_back(i == slot ? atoms - 1 : i);
    Eigen::VectorXcd expected = reduce(branch, k, atoms, keep);
    expected /= expected.norm();

    CHECK(!s.contains(id));
    CHECK(s.atom_count() == atoms - 1);
    for (std::size_t i = 0; i + 1 < atoms; ++i) CHECK(s.slot_of(s.id_at(i)) == i);
    CHECK(max_diff(embed(s.amplitudes(), k, atoms - 1), expected) < 1e-13);
  }
  CHECK(excited_seen > 0);
  CHECK(ground_seen > 0);
}

TEST_CASE("drop_atom takes the ground branch") {
  auto s = random_state(Truncation::two_quanta, 3, 3);
  const auto v = embed(s.amplitudes(), 2, 3);
  const AtomId last = s.id_at(2);
  s.drop_atom(last);
  const auto s2 = dense_sigma_minus(2, 2, 3);
  Eigen::VectorXcd expected = reduce(v - s2.adjoint() * s2 * v, 2, 3, {0, 1});
  expected /= expected.norm();
  CHECK(max_diff(embed(s.amplitudes(), 2, 2), expected) < 1e-14);
}

TEST_CASE("cavity jump on the vacuum is an error") {
  TruncatedState s(Truncation::two_quanta);
  s.add_atom(1);
  CHECK_THROWS_AS(s.apply_cavity_jump(), std::domain_error);
  CHECK_THROWS_AS(s.apply_atom_jump(0), std::domain_error);
  CHECK_THROWS_AS(s.slot_of(77), std::out_of_range);
}
