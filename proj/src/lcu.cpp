#include "qla/lcu.hpp"

#include <cmath>

#include "qla/evolution.hpp"

namespace qla {
namespace {

// One non-identity row of V: row `target` picks up coef * q_source and keeps
// cos(beta) * q_target.
struct Coupling {
  int source;
  int target;
  double beta;
  double sign;
};

LcuSet build(const std::array<Coupling, 2>& rows) {
  LcuSet set;
  SiteMatrix& lcu1 = set.terms[0];
  SiteMatrix& lcu2 = set.terms[1];
  SiteMatrix& lcu3 = set.terms[2];
  SiteMatrix& lcu4 = set.terms[3];
  lcu1 = identity_matrix();

  // Sources keep +1 on the diagonal of LCU2; everything else flips.
  lcu2 = SiteMatrix{};
  for (int i = 0; i < kComponents; ++i) lcu2[i][i] = -1.0;
  for (const Coupling& r : rows) lcu2[r.source][r.source] = 1.0;

  lcu3 = identity_matrix();
  lcu4 = identity_matrix();
  for (const Coupling& r : rows) {
    const double c = std::cos(r.beta);
    const double s = r.sign * std::sin(r.beta);
    lcu3[r.source][r.source] = c;
    lcu3[r.target][r.target] = c;
    lcu3[r.target][r.source] = s;
    lcu3[r.source][r.target] = -s;

    lcu4[r.source][r.source] = -c;
    lcu4[r.target][r.target] = c;
    lcu4[r.target][r.source] = s;
    lcu4[r.source][r.target] = s;
  }
  return set;
}

double max_abs_diff(const SiteMatrix& a, const SiteMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < kComponents; ++i) {
    for (int j = 0; j < kComponents; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  }
  return m;
}

}  // namespace

SiteMatrix LcuSet::sum() const {
  SiteMatrix out{};
  for (std::size_t k = 0; k < terms.size(); ++k) {
    for (int i = 0; i < kComponents; ++i) {
      for (int j = 0; j < kComponents; ++j) out[i][j] += weights[k] * terms[k][i][j];
    }
  }
  return out;
}

LcuSet lcu_terms(double beta0, double beta2) {
  return build({Coupling{1, 5, beta0, 1.0}, Coupling{2, 4, beta2, -1.0}});
}

LcuSet lcu_terms_y(double beta1, double beta3) {
  return build({Coupling{2, 3, beta3, 1.0}, Coupling{0, 5, beta1, -1.0}});
}

double verify_lcu(double beta0, double beta2) {
  return max_abs_diff(potential_x_matrix(beta0, beta2), lcu_terms(beta0, beta2).sum());
}

double verify_lcu_y(double beta1, double beta3) {
  return max_abs_diff(potential_y_matrix(beta1, beta3), lcu_terms_y(beta1, beta3).sum());
}

double orthogonality_residual(const SiteMatrix& m) {
  double r = 0.0;
  for (int i = 0; i < kComponents; ++i) {
    for (int j = 0; j < kComponents; ++j) {
      double s = 0.0;
      for (int k = 0; k < kComponents; ++k) s += m[k][i] * m[k][j];
      r = std::max(r, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return r;
}

}  // namespace qla
