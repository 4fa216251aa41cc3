#include <doctest.h>

#include "cqed/dense_oracle.hpp"
#include "cqed/propagator.hpp"
#include "dense_embed.hpp"

using namespace cqed;
using cqed::test::embed;
using cqed::test::project;

namespace {

// Dense non-Hermitian generator in units of kappa, built directly from the
// ladder operators.
template <class G>
Eigen::MatrixXcd dense_generator(const std::vector<G>& g, const GeneratorRates& r, int level) {
  const std::size_t atoms = g.size();
  const auto a = dense_annihilation(level, atoms);
  const Eigen::MatrixXcd ad = a.adjoint();
  Eigen::MatrixXcd k = r.drive * (ad - a) - Complex(r.kappa, r.delta_c) * (ad * a);
  for (std::size_t j = 0; j < atoms; ++j) {
    const auto s = dense_sigma_minus(j, level, atoms);
    const Eigen::MatrixXcd sd = s.adjoint();
    const Complex gj = g[j];
    k += gj * (ad * s) - std::conj(gj) * (a * sd) - Complex(0.5 * r.gamma, r.delta_a) * (sd * s);
  }
  return k;
}

TruncatedState random_state(Truncation t, std::size_t atoms, std::uint64_t seed) {
  TruncatedState s(t);
  for (std::size_t j = 0; j < atoms; ++j) s.add_atom(static_cast<AtomId>(j));
  Rng rng(seed);
  test::fill_random(s, rng);
  return s;
}

template <class G>
void check_against_dense(Truncation t, std::size_t atoms, const std::vector<G>& g, const GeneratorRates& r) {
  const int level = excitation_limit(t);
  auto s = random_state(t, atoms, 17 * atoms + static_cast<std::uint64_t>(level));
  Amplitudes out;
  derivative<G>(s.amplitudes(), std::span<const G>(g), r, level, out);
  const auto v = embed(s.amplitudes(), level, atoms);
  const Eigen::VectorXcd expected = project(dense_generator(g, r, level) * v, level, atoms);
  CHECK((embed(out, level, atoms) - expected).cwiseAbs().maxCoeff() < 1e-13);
}

}  // namespace

TEST_CASE("derivative equals the projected dense generator") {
  const GeneratorRates r{1.0, 2.3, 0.37, 0.41, -0.83};
  const std::vector<double> g_real{1.2, -0.7, 0.35, 2.1};
  const std::vector<Complex> g_complex{{1.2, 0.4}, {-0.7, 0.9}, {0.0, -0.35}, {2.1, 0.2}};
  for (auto t : {Truncation::one_quantum, Truncation::two_quanta, Truncation::three_quanta}) {
    CAPTURE(excitation_limit(t));
    for (std::size_t atoms : {0u, 1u, 2u, 3u, 4u}) {
      CAPTURE(atoms);
      check_against_dense(t, atoms, std::vector<double>(g_real.begin(), g_real.begin() + atoms), r);
      check_against_dense(t, atoms, std::vector<Complex>(g_complex.begin(), g_complex.begin() + atoms), r);
    }
  }
}

TEST_CASE("RK4 step agrees with the Taylor series of the dense propagator to fifth order") {
  const GeneratorRates r{1.0, 1.5, 0.2, 0.0, 0.3};
  const std::vector<double> g{1.1, 0.6, -0.9};
  const int level = 2;
  auto s = random_state(Truncation::two_quanta, g.size(), 9);
  const auto v = embed(s.amplitudes(), level, g.size());
  // restrict the generator to the truncated space
  Eigen::MatrixXcd k = dense_generator(g, r, level);
  for (Eigen::Index c = 0; c < k.cols(); ++c) {
    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(k.rows());
    unit(c) = 1.0;
    if (project(unit, level, g.size()).norm() == 0.0) k.col(c).setZero();
    k.col(c) = project(k.col(c), level, g.size());
  }
  const double dt = 0.05;
  Eigen::VectorXcd exact = v;
  Eigen::VectorXcd term = v;
  for (int m = 1; m < 20; ++m) {
    term = (dt / m) * (k * term);
    exact += term;
  }
  Rk4 rk4;
  rk4.step<double>(s, g, r, dt);
  const double err = (embed(s.amplitudes(), level, g.size()) - exact).norm();
  const double x = dt * k.operatorNorm();
  const double bound = std::pow(x, 5) / 120.0 * std::exp(x);
  CHECK(err < bound);
  CHECK(err > 0.0);
}

TEST_CASE("norm decays at 2 kappa <n> + gamma sum <sigma+ sigma->") {
  for (auto t : {Truncation::one_quantum, Truncation::two_quanta, Truncation::three_quanta}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const GeneratorRates r{1.0, 0.77 + 0.3 * static_cast<double>(seed), 0.05 * static_cast<double>(seed), 0.1,
                             -0.2};
      Rng rng(seed);
      std::vector<Complex> g;
      for (int j = 0; j < 6; ++j) g.emplace_back(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
      auto s = random_state(t, g.size(), seed * 31);
      const auto e = s.expectations();
      double exc = 0.0;
      for (double p : e.atom_excitation) exc += p;
      const double rate = 2.0 * r.kappa * e.photon_number + r.gamma * exc;

      // central difference of log |psi|^2
      const double h = 1e-4;
      auto fwd = s;
      auto bwd = s;
      Rk4 rk4;
      rk4.step<Complex>(fwd, g, r, h);
      rk4.step<Complex>(bwd, g, r, -h);
      const double slope = (std::log(fwd.norm2()) - std::log(bwd.norm2())) / (2.0 * h);
      CHECK(-slope == doctest::Approx(rate).epsilon(1e-6));
    }
  }
}
