#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cqed/g2_estimate.hpp"
#include "cqed/model.hpp"

namespace cqed {

// Brute-force density-matrix reference for a few fixed atoms. Basis index is
// n * 2^N + bits, where bit j set means atom j is excited.

Eigen::MatrixXcd dense_annihilation(int fock_cutoff, std::size_t atoms);
Eigen::MatrixXcd dense_sigma_minus(std::size_t j, int fock_cutoff, std::size_t atoms);

struct DenseOptions {
  double dt{0.01};         // 1/kappa
  double tol{1e-12};       // bound on ||d rho/dt||
  double observable_tol{1e-9};  // relative rate of change of <a^+a> and <a^+a^+aa>
  std::size_t max_steps{400'000};
};

struct DenseSteadyState {
  Eigen::MatrixXcd rho;
  double photon_number{0.0};
  std::size_t steps{0};
};

DenseSteadyState dense_steady_state(const std::vector<Vec3>& positions, int fock_cutoff, const PhysicalParameters& p,
                                    const DenseOptions& opts = {});

/// Tr[a^+a e^{L tau}(a rho a^+)] / <a^+a>^2 with tau in units of 1/kappa.
G2Curve dense_g2(const std::vector<Vec3>& positions, int fock_cutoff, const PhysicalParameters& p,
                 std::span<const double> tau_kappa, const DenseOptions& opts = {});

}  // namespace cqed
