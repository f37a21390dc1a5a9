// lcu.hpp: the potential operators written as a weighted sum of four
// orthogonal matrices, V = (1/2)(LCU1 + LCU2 + LCU3 + LCU4).
#pragma once

#include <array>

#include "qla/lattice.hpp"

namespace qla {

struct LcuSet {
  std::array<SiteMatrix, 4> terms{};
  std::array<double, 4> weights{0.5, 0.5, 0.5, 0.5};

  SiteMatrix sum() const;
  /// Sum of the weights; the normalization cost of the decomposition.
  double total_weight() const { return weights[0] + weights[1] + weights[2] + weights[3]; }
};

/// Decomposition of potential_x_matrix(beta0, beta2).
LcuSet lcu_terms(double beta0, double beta2);

/// Decomposition of potential_y_matrix(beta1, beta3), built with the same
/// pattern as the x set (derived by symmetry, no printed counterpart).
LcuSet lcu_terms_y(double beta1, double beta3);

/// max |V_X - sum| over all entries.
double verify_lcu(double beta0, double beta2);
double verify_lcu_y(double beta1, double beta3);

/// max |M^T M - I| over all entries.
double orthogonality_residual(const SiteMatrix& m);

}  // namespace qla
