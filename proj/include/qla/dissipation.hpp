// dissipation.hpp: lossy 1D Maxwell as an amplitude-damping channel.
//
// The Schrodinger form i d/dt psi = (H0 - i H1) psi is split as
// exp(-i dt H0) U1 K0 U1^dagger, and K0 is embedded in a unitary on
// environment (x) system. Everything is dense complex linear algebra on
// small matrices.
//
// H1 for a Fourier mode of the lossy medium is proportional to sigma_x k and
// has one negative eigenvalue. Only the positive eigenvalues are treated as
// damping rates; eigen-directions with a non-positive eigenvalue are left
// untouched by K0 (and by the reference propagator built from
// dissipative_part()).

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qla/lattice.hpp"

namespace qla {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct LossyMedium1D {
  double eps_r = 1.0;
  double eps_i = 0.0;
  double mu0 = 1.0;

  /// Throws unless eps_r > 0, eps_i >= 0 and mu0 > 0.
  void validate() const;
  double loss_angle() const { return eps_i / eps_r; }
  double v_delta() const;
};

struct SplitHamiltonians {
  CMatrix h0;
  CMatrix h1;
  /// Columns are eigenvectors of h1, ordered by descending eigenvalue.
  CMatrix u1;
  Eigen::VectorXd eigenvalues;
  /// The strictly positive eigenvalues (the leading entries of eigenvalues).
  std::vector<double> gammas;

  int dimension() const { return static_cast<int>(h0.rows()); }
  int rank() const { return static_cast<int>(gammas.size()); }
  /// u1 diag(gammas, 0, ...) u1^dagger.
  CMatrix dissipative_part() const;
};

/// Checks hermiticity (1e-12) and diagonalizes h1.
SplitHamiltonians split_hamiltonians(const CMatrix& h0, const CMatrix& h1);

/// Single Fourier mode k of the lossy medium:
/// h0 = v (sigma_x + (loss/2) sigma_y) k, h1 = (loss v / 2) sigma_x k.
SplitHamiltonians lossy_hamiltonians(const LossyMedium1D& medium, double k);

/// Same operators on a periodic grid of n points over [0, length), with the
/// spectral derivative for p_x. Dimension 2n, (q_E, q_H) interleaved per point.
SplitHamiltonians dense_lossy_hamiltonians(const LossyMedium1D& medium, int n, double length);

struct KrausPair {
  Eigen::MatrixXd k0;
  Eigen::MatrixXd k1;
  double dt = 0.0;
  int r = 0;

  /// max |K0^T K0 + K1^T K1 - I|.
  double completeness_residual() const;
};

/// K0 = diag(exp(-gamma_i dt), 1, ...); K1 holds sqrt(1 - exp(-2 gamma_i dt))
/// in its last r rows, first r columns. Rejects gamma <= 0, dt <= 0, r > d.
KrausPair kraus_pair(const std::vector<double>& gammas, int d, double dt);

struct DilationOperator {
  Eigen::MatrixXd u_diss;

  double unitarity_residual() const;
};

/// 2d x 2d unitary whose first d columns are (K0; K1). Row/column blocks have
/// sizes r, d - r, d - r, r, which tile for every r <= d.
DilationOperator dilation(const KrausPair& pair);

/// exp(-i dt h0) via the eigen-decomposition of h0.
CMatrix unitary_propagator(const CMatrix& h0, double dt);

/// exp(-i dt (h0 - i H1+)) with H1+ = dissipative_part(), by dense
/// matrix exponential.
CMatrix exact_propagator(const SplitHamiltonians& split, double dt);

/// exp(-i dt h0) u1 K0 u1^dagger psi.
CVector trotter_step(const CVector& psi, const SplitHamiltonians& split, double dt);

struct OpenStep {
  CVector state;  // renormalized
  double p0 = 0.0;
};

/// Embeds |0> (x) psi, applies the dilation in the h1 eigenbasis and the h0
/// propagator, projects onto environment |0>. Throws when p0 < 1e-12.
OpenStep evolve_open(const CVector& psi, const SplitHamiltonians& split, double dt);

struct SuccessProbability {
  double p0 = 0.0;
  /// 1 + (exp(-2 gmax dt) - 1) sum_{i<=r} exp(-2 g_i dt) |psi_i|^2, as printed.
  double printed_bound = 0.0;
  /// 1 - (1 - exp(-2 gmax dt)) sum_{i<=r} |psi_i|^2, always a valid bound.
  double weight_bound = 0.0;
  bool printed_bound_holds = false;
  bool weight_bound_holds = false;
};

/// psi is given in the h1 eigenbasis, damped components first.
SuccessProbability success_probability(const CVector& psi, const std::vector<double>& gammas, double dt);

}  // namespace qla
