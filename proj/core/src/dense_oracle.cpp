#include "cqed/dense_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cqed {

namespace {

using Mat = Eigen::MatrixXcd;

std::size_t dimension(int fock, std::size_t atoms) {
  return static_cast<std::size_t>(fock + 1) << atoms;
}

void check_size(int fock, std::size_t atoms) {
  if (fock < 1 || fock > 4) throw std::invalid_argument("dense oracle: fock cutoff must be in [1, 4]");
  if (atoms > 3) throw std::invalid_argument("dense oracle: at most 3 atoms");
  if (dimension(fock, atoms) > 64) throw std::invalid_argument("dense oracle: dimension exceeds 64");
}

// Lindblad generator in units of kappa.
struct Liouvillian {
  Mat k;      // non-Hermitian generator
  Mat k_dag;
  Mat a;
  Mat a_dag;
  std::vector<Mat> s;
  std::vector<Mat> s_dag;
  double kappa{1.0};
  double gamma{0.0};

  Mat apply(const Mat& rho) const {
    Mat out = k * rho + rho * k_dag + 2.0 * kappa * (a * rho * a_dag);
    for (std::size_t j = 0; j < s.size(); ++j) out += gamma * (s[j] * rho * s_dag[j]);
    return out;
  }
};

Liouvillian build(const std::vector<Vec3>& positions, int fock, const PhysicalParameters& p) {
  validate(p);
  const std::size_t n = positions.size();
  check_size(fock, n);
  const ModeGeometry geom = mode_geometry(p);
  const double gamma = p.gamma / p.kappa;

  Liouvillian l;
  l.kappa = 1.0;
  l.gamma = gamma;
  l.a = dense_annihilation(fock, n);
  l.a_dag = l.a.adjoint();
  Mat k = (p.drive / p.kappa) * (l.a_dag - l.a) - Complex(1.0, p.delta_c / p.kappa) * (l.a_dag * l.a);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex g = coupling(positions[j], geom, p.g_max) / p.kappa;
    Mat s = dense_sigma_minus(j, fock, n);
    Mat s_dag = s.adjoint();
    k += g * (l.a_dag * s) - std::conj(g) * (l.a * s_dag);
    k -= Complex(0.5 * gamma, p.delta_a / p.kappa) * (s_dag * s);
    l.s.push_back(std::move(s));
    l.s_dag.push_back(std::move(s_dag));
  }
  l.k = std::move(k);
  l.k_dag = l.k.adjoint();
  return l;
}

void rk4(const Liouvillian& l, Mat& rho, double dt) {
  const Mat k1 = l.apply(rho);
  const Mat k2 = l.apply(rho + 0.5 * dt * k1);
  const Mat k3 = l.apply(rho + 0.5 * dt * k2);
  const Mat k4 = l.apply(rho + dt * k3);
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double expectation(const Mat& op, const Mat& rho) { return (op * rho).trace().real(); }

}  // namespace

Eigen::MatrixXcd dense_annihilation(int fock, std::size_t atoms) {
  const std::size_t block = std::size_t{1} << atoms;
  const std::size_t dim = dimension(fock, atoms);
  Mat a = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (int n = 1; n <= fock; ++n) {
    for (std::size_t bits = 0; bits < block; ++bits) {
      const auto row = static_cast<Eigen::Index>(static_cast<std::size_t>(n - 1) * block + bits);
      const auto col = static_cast<Eigen::Index>(static_cast<std::size_t>(n) * block + bits);
      a(row, col) = std::sqrt(static_cast<double>(n));
    }
  }
  return a;
}

Eigen::MatrixXcd dense_sigma_minus(std::size_t j, int fock, std::size_t atoms) {
  if (j >= atoms) throw std::out_of_range("dense_sigma_minus: atom index");
  const std::size_t block = std::size_t{1} << atoms;
  const std::size_t dim = dimension(fock, atoms);
  Mat s = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const std::size_t mask = std::size_t{1} << j;
  for (int n = 0; n <= fock; ++n) {
    for (std::size_t bits = 0; bits < block; ++bits) {
      if (!(bits & mask)) continue;
      const std::size_t base = static_cast<std::size_t>(n) * block;
      s(static_cast<Eigen::Index>(base + (bits & ~mask)), static_cast<Eigen::Index>(base + bits)) = 1.0;
    }
  }
  return s;
}

DenseSteadyState dense_steady_state(const std::vector<Vec3>& positions, int fock, const PhysicalParameters& p,
                                    const DenseOptions& opts) {
  const Liouvillian l = build(positions, fock, p);
  const Eigen::Index dim = l.a.rows();
  const Mat number = l.a_dag * l.a;
  const Mat pairs = l.a_dag * l.a_dag * l.a * l.a;

  Mat rho = Mat::Zero(dim, dim);
  rho(0, 0) = 1.0;
  DenseSteadyState out;
  constexpr std::size_t check_every = 50;
  for (std::size_t step = 1; step <= opts.max_steps; ++step) {
    rk4(l, rho, opts.dt);
    if (step % check_every != 0) continue;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    const Mat d = l.apply(rho);
    const double residual = d.cwiseAbs().maxCoeff();
    const double n = expectation(number, rho);
    const double n2 = expectation(pairs, rho);
    const double dn = std::abs(expectation(number, d));
    const double dn2 = std::abs(expectation(pairs, d));
    const bool observables_settled =
        dn <= opts.observable_tol * std::abs(n) && dn2 <= opts.observable_tol * std::abs(n2);
    if (residual < opts.tol && observables_settled) {
      out.rho = rho;
      out.photon_number = n;
      out.steps = step;
      return out;
    }
  }
  throw std::runtime_error("dense_steady_state: no convergence within " + std::to_string(opts.max_steps) + " steps");
}

G2Curve dense_g2(const std::vector<Vec3>& positions, int fock, const PhysicalParameters& p,
                 std::span<const double> tau, const DenseOptions& opts) {
  const DenseSteadyState ss = dense_steady_state(positions, fock, p, opts);
  const Liouvillian l = build(positions, fock, p);
  const Mat number = l.a_dag * l.a;
  G2Curve curve = make_curve(std::vector<double>(tau.begin(), tau.end()), p.kappa);
  const double n = ss.photon_number;
  if (!(n > 0.0)) throw std::domain_error("dense_g2: zero steady-state photon number");

  Mat rho = l.a * ss.rho * l.a_dag;
  double t = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < t) throw std::invalid_argument("dense_g2: tau grid must be non-decreasing");
    const double span = tau[i] - t;
    const auto sub = static_cast<std::size_t>(std::ceil(span / opts.dt - 1e-9));
    for (std::size_t s = 0; s < sub; ++s) rk4(l, rho, span / static_cast<double>(sub));
    t = tau[i];
    curve.g2[i] = expectation(number, rho) / (n * n);
    curve.std_error[i] = 0.0;
  }
  return curve;
}

}  // namespace cqed
