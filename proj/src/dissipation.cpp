#include "qla/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace qla {
namespace {

using cd = std::complex<double>;

constexpr double kHermitianTol = 1e-12;

void check_square(const CMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw Error(std::string(what) + " must be a non-empty square matrix");
}

void check_hermitian(const CMatrix& m, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
    throw Error(std::string(what) + " is not Hermitian");
  }
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd s;
  s << 0, 1, 1, 0;
  return s;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd s;
  s << 0, cd(0, -1), cd(0, 1), 0;
  return s;
}

}  // namespace

void LossyMedium1D::validate() const {
  if (!(eps_r > 0.0) || !std::isfinite(eps_r)) throw Error("eps_r must be positive");
  if (!(eps_i >= 0.0) || !std::isfinite(eps_i)) throw Error("eps_i must be >= 0 (loss, not gain)");
  if (!(mu0 > 0.0) || !std::isfinite(mu0)) throw Error("mu0 must be positive");
}

double LossyMedium1D::v_delta() const {
  const double loss = loss_angle();
  return 1.0 / std::sqrt(eps_r * mu0 * (1.0 + loss * loss));
}

CMatrix SplitHamiltonians::dissipative_part() const {
  const int d = dimension();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < rank(); ++i) diag[i] = gammas[static_cast<std::size_t>(i)];
  return u1 * diag.cast<cd>().asDiagonal() * u1.adjoint();
}

SplitHamiltonians split_hamiltonians(const CMatrix& h0, const CMatrix& h1) {
  check_square(h0, "h0");
  check_square(h1, "h1");
  if (h0.rows() != h1.rows()) throw Error("h0 and h1 have different dimensions");
  check_hermitian(h0, "h0");
  check_hermitian(h1, "h1");

  SplitHamiltonians s;
  s.h0 = h0;
  s.h1 = h1;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h1);
  if (es.info() != Eigen::Success) throw Error("h1 diagonalization failed");
  const Eigen::Index d = h1.rows();
  // Eigen returns ascending order; flip so damped directions come first.
  s.eigenvalues = es.eigenvalues().reverse();
  s.u1 = es.eigenvectors().rowwise().reverse();

  const double scale = std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d; ++i) {
    if (s.eigenvalues[i] > kHermitianTol * scale) s.gammas.push_back(s.eigenvalues[i]);
  }
  const CMatrix rebuilt = s.u1 * s.eigenvalues.cast<cd>().asDiagonal() * s.u1.adjoint();
  if ((rebuilt - h1).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
    throw Error("h1 eigen-decomposition is inaccurate");
  }
  return s;
}

SplitHamiltonians lossy_hamiltonians(const LossyMedium1D& medium, double k) {
  medium.validate();
  if (!std::isfinite(k)) throw Error("wavenumber must be finite");
  const double v = medium.v_delta();
  const double loss = medium.loss_angle();
  const CMatrix h0 = v * k * (pauli_x() + 0.5 * loss * pauli_y());
  const CMatrix h1 = 0.5 * loss * v * k * pauli_x();
  return split_hamiltonians(h0, h1);
}

SplitHamiltonians dense_lossy_hamiltonians(const LossyMedium1D& medium, int n, double length) {
  medium.validate();
  if (n < 2) throw Error("dense discretization needs at least 2 points");
  if (!(length > 0.0)) throw Error("domain length must be positive");

  // p = F^dagger diag(k) F with the Nyquist mode dropped so p stays Hermitian.
  CMatrix f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < n; ++j) {
      const double phase = -2.0 * std::numbers::pi * m * j / n;
      f(m, j) = norm * cd(std::cos(phase), std::sin(phase));
    }
  }
  Eigen::VectorXd k(n);
  for (int m = 0; m < n; ++m) {
    const int mm = m <= (n - 1) / 2 ? m : m - n;
    k[m] = (2 * m == n) ? 0.0 : 2.0 * std::numbers::pi * mm / length;
  }
  const CMatrix p = f.adjoint() * k.cast<cd>().asDiagonal() * f;

  const double v = medium.v_delta();
  const double loss = medium.loss_angle();
  const Eigen::Matrix2cd s0 = v * (pauli_x() + 0.5 * loss * pauli_y());
  const Eigen::Matrix2cd s1 = 0.5 * loss * v * pauli_x();
  CMatrix h0(2 * n, 2 * n), h1(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          h0(2 * j + a, 2 * l + b) = s0(a, b) * p(j, l);
          h1(2 * j + a, 2 * l + b) = s1(a, b) * p(j, l);
        }
      }
    }
  }
  // Remove round-off asymmetry from the DFT products.
  h0 = (0.5 * (h0 + h0.adjoint())).eval();
  h1 = (0.5 * (h1 + h1.adjoint())).eval();
  return split_hamiltonians(h0, h1);
}

double KrausPair::completeness_residual() const {
  const Eigen::MatrixXd sum = k0.transpose() * k0 + k1.transpose() * k1;
  return (sum - Eigen::MatrixXd::Identity(k0.rows(), k0.cols())).cwiseAbs().maxCoeff();
}

KrausPair kraus_pair(const std::vector<double>& gammas, int d, double dt) {
  const int r = static_cast<int>(gammas.size());
  if (d < 1) throw Error("Kraus pair dimension must be positive");
  if (r > d) throw Error("more damping rates than the system dimension");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("dt must be positive");
  for (double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) throw Error("damping rates must be positive (gamma = " + std::to_string(g) + ")");
  }
  KrausPair pair;
  pair.dt = dt;
  pair.r = r;
  pair.k0 = Eigen::MatrixXd::Identity(d, d);
  pair.k1 = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < r; ++i) {
    const double g = std::exp(-gammas[static_cast<std::size_t>(i)] * dt);
    pair.k0(i, i) = g;
    // sqrt(1 - g^2) without cancellation for small gamma dt
    pair.k1(d - r + i, i) = std::sqrt(-std::expm1(-2.0 * gammas[static_cast<std::size_t>(i)] * dt));
  }
  return pair;
}

double DilationOperator::unitarity_residual() const {
  const Eigen::MatrixXd p = u_diss.transpose() * u_diss;
  return (p - Eigen::MatrixXd::Identity(p.rows(), p.cols())).cwiseAbs().maxCoeff();
}

DilationOperator dilation(const KrausPair& pair) {
  const Eigen::Index d = pair.k0.rows();
  const Eigen::Index r = pair.r;
  DilationOperator op;
  op.u_diss = Eigen::MatrixXd::Identity(2 * d, 2 * d);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double g = pair.k0(i, i);
    const double leak = pair.k1(d - r + i, i);
    const Eigen::Index top = i;
    const Eigen::Index bottom = 2 * d - r + i;
    op.u_diss(top, top) = g;
    op.u_diss(top, bottom) = -leak;
    op.u_diss(bottom, top) = leak;
    op.u_diss(bottom, bottom) = g;
  }
  if (pair.completeness_residual() > 1e-12) throw Error("Kraus pair is not complete");
  const double res = op.unitarity_residual();
  if (res > 1e-12) throw Error("dilation is not unitary (residual " + std::to_string(res) + ")");
  return op;
}

CMatrix unitary_propagator(const CMatrix& h0, double dt) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h0);
  if (es.info() != Eigen::Success) throw Error("h0 diagonalization failed");
  CVector phase(h0.rows());
  for (Eigen::Index i = 0; i < h0.rows(); ++i) phase[i] = std::exp(cd(0.0, -dt * es.eigenvalues()[i]));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix exact_propagator(const SplitHamiltonians& split, double dt) {
  const CMatrix gen = cd(0.0, -dt) * (split.h0 - cd(0.0, 1.0) * split.dissipative_part());
  return gen.exp();
}

CVector trotter_step(const CVector& psi, const SplitHamiltonians& split, double dt) {
  if (psi.size() != split.dimension()) throw Error("state dimension does not match the Hamiltonians");
  CVector eig = split.u1.adjoint() * psi;
  for (int i = 0; i < split.rank(); ++i) eig[i] *= std::exp(-split.gammas[static_cast<std::size_t>(i)] * dt);
  return unitary_propagator(split.h0, dt) * (split.u1 * eig);
}

OpenStep evolve_open(const CVector& psi, const SplitHamiltonians& split, double dt) {
  const int d = split.dimension();
  if (psi.size() != d) throw Error("state dimension does not match the Hamiltonians");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw Error("evolve_open expects a normalized state");

  CVector joint = CVector::Zero(2 * d);
  joint.head(d) = split.u1.adjoint() * psi;
  if (split.rank() > 0) {
    const DilationOperator op = dilation(kraus_pair(split.gammas, d, dt));
    joint = op.u_diss.cast<cd>() * joint;
  }
  // Project the environment onto |0>.
  const CVector kept = joint.head(d);
  const double p0 = kept.squaredNorm();
  if (p0 < 1e-12) throw Error("measurement branch probability below 1e-12");

  OpenStep out;
  out.p0 = p0;
  out.state = unitary_propagator(split.h0, dt) * (split.u1 * kept) / std::sqrt(p0);
  return out;
}

SuccessProbability success_probability(const CVector& psi, const std::vector<double>& gammas, double dt) {
  const std::size_t r = gammas.size();
  if (static_cast<std::size_t>(psi.size()) < r) throw Error("state shorter than the damped subspace");
  double gmax = 0.0;
  for (double g : gammas) gmax = std::max(gmax, g);

  double damped = 0.0;   // sum_{i<=r} e^{-2 g_i dt} |psi_i|^2
  double weight = 0.0;   // sum_{i<=r} |psi_i|^2
  double rest = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double a = std::norm(psi[i]);
    if (static_cast<std::size_t>(i) < r) {
      damped += std::exp(-2.0 * gammas[static_cast<std::size_t>(i)] * dt) * a;
      weight += a;
    } else {
      rest += a;
    }
  }
  SuccessProbability s;
  s.p0 = damped + rest;
  const double emax = std::exp(-2.0 * gmax * dt);
  s.printed_bound = 1.0 + (emax - 1.0) * damped;
  s.weight_bound = 1.0 - (1.0 - emax) * weight;
  s.printed_bound_holds = s.p0 >= s.printed_bound - 1e-15;
  s.weight_bound_holds = s.p0 >= s.weight_bound - 1e-15;
  return s;
}

}  // namespace qla
