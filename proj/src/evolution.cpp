#include "qla/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qla {
namespace {

struct SweepOp {
  bool collide;
  bool adjoint;
  int subset;  // 0: {1,4} along x / {0,3} along y; 1: {2,5}
  int pull;    // +1: q(x) <- q(x + 1)
};

// Sweep operators in application order (rightmost operator first).
constexpr std::array<SweepOp, 16> kSweep{{
    {true, true, 0, 0},  {false, false, 0, -1},  // C+,  S-_A
    {true, false, 0, 0}, {false, false, 0, +1},  // C,   S+_A
    {true, true, 0, 0},  {false, false, 1, +1},  // C+,  S+_B
    {true, false, 0, 0}, {false, false, 1, -1},  // C,   S-_B
    {true, false, 0, 0}, {false, false, 0, +1},  // C,   S+_A
    {true, true, 0, 0},  {false, false, 0, -1},  // C+,  S-_A
    {true, false, 0, 0}, {false, false, 1, -1},  // C,   S-_B
    {true, true, 0, 0},  {false, false, 1, +1},  // C+,  S+_B
}};

std::size_t sweep_length(SweepOrder order) { return order == SweepOrder::second_order ? 16 : 8; }

// Streamed component pairs.
constexpr std::array<std::array<int, 2>, 2> kSubsetX{{{1, 4}, {2, 5}}};
constexpr std::array<std::array<int, 2>, 2> kSubsetY{{{0, 3}, {2, 5}}};

double physical_gradient_angle(double delta, double dn_per_lattice_unit, double n) {
  // delta^2 * (dn/dX / delta) / n^2
  return delta * dn_per_lattice_unit / (n * n);
}

EvolutionPlan::Trig trig_of(const std::vector<double>& angles, double scale) {
  EvolutionPlan::Trig t;
  t.c.resize(angles.size());
  t.s.resize(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    t.c[i] = std::cos(scale * angles[i]);
    t.s[i] = std::sin(scale * angles[i]);
  }
  return t;
}

// Per-site kernels. Every row of the 6x6 matrices has at most two nonzero
// entries, so these evaluate exactly the sums pointwise_apply forms.
inline void rotate(double* q, int i, int j, double c, double s) {
  // q_i <- c q_i - s q_j ; q_j <- s q_i + c q_j
  const double a = q[i];
  const double b = q[j];
  q[i] = c * a - s * b;
  q[j] = s * a + c * b;
}

inline void collide_x_site(double* q, double c1, double s1, double c2, double s2, bool adjoint) {
  if (adjoint) {
    s1 = -s1;
    s2 = -s2;
  }
  rotate(q, 1, 5, c1, s1);
  rotate(q, 2, 4, c2, s2);
}

inline void collide_y_site(double* q, double c0, double s0, double c2, double s2, bool adjoint) {
  if (adjoint) {
    s0 = -s0;
    s2 = -s2;
  }
  // row0 = c0 q0 + s0 q5, row5 = -s0 q0 + c0 q5 (same for (q2, q3))
  const double q0 = q[0], q5 = q[5], q2 = q[2], q3 = q[3];
  q[0] = c0 * q0 + s0 * q5;
  q[5] = -s0 * q0 + c0 * q5;
  q[2] = c2 * q2 + s2 * q3;
  q[3] = -s2 * q2 + c2 * q3;
}

inline void potential_x_site(double* q, PotentialForm form, double cb0, double sb0, double cb2,
                             double sb2) {
  if (form == PotentialForm::printed) {
    const double q1 = q[1], q2 = q[2], q4 = q[4], q5 = q[5];
    q[4] = -sb2 * q2 + cb2 * q4;
    q[5] = sb0 * q1 + cb0 * q5;
  } else {
    rotate(q, 1, 5, cb0, sb0);
    rotate(q, 2, 4, cb2, -sb2);
  }
}

inline void potential_y_site(double* q, PotentialForm form, double cb1, double sb1, double cb3,
                             double sb3) {
  if (form == PotentialForm::printed) {
    const double q0 = q[0], q2 = q[2], q3 = q[3], q5 = q[5];
    q[3] = sb3 * q2 + cb3 * q3;
    q[5] = -sb1 * q0 + cb1 * q5;
  } else {
    const double q0 = q[0], q5 = q[5], q2 = q[2], q3 = q[3];
    q[0] = cb1 * q0 + sb1 * q5;
    q[5] = -sb1 * q0 + cb1 * q5;
    q[2] = cb3 * q2 - sb3 * q3;
    q[3] = sb3 * q2 + cb3 * q3;
  }
}

inline void potentials_site(double* q, const EvolutionPlan& plan, std::size_t i) {
  const PotentialForm form = plan.options().form;
  const auto& b0 = plan.potential_trig(0);
  const auto& b1 = plan.potential_trig(1);
  const auto& b2 = plan.potential_trig(2);
  const auto& b3 = plan.potential_trig(3);
  potential_x_site(q, form, b0.c[i], b0.s[i], b2.c[i], b2.s[i]);
  potential_y_site(q, form, b1.c[i], b1.s[i], b3.c[i], b3.s[i]);
}

// Cyclic pull along a strided line: p[k] <- p[k + pull] (mod length).
inline void pull_line(double* p, std::size_t stride, int length, int pull) {
  const std::size_t last = static_cast<std::size_t>(length - 1) * stride;
  if (pull == 1) {
    const double wrap = p[0];
    for (std::size_t i = 0; i < last; i += stride) p[i] = p[i + stride];
    p[last] = wrap;
  } else {
    const double wrap = p[last];
    for (std::size_t i = last; i > 0; i -= stride) p[i] = p[i - stride];
    p[0] = wrap;
  }
}

// pull_line over the columns [x0, x1) of a panel, walking whole rows so the
// accesses stay sequential.
void pull_panel(double* base, std::size_t row, int ny, int x0, int x1, const std::array<int, 2>& comps, int pull) {
  constexpr int kMaxPanel = 64;
  double wrap[kMaxPanel][2];
  const int w = x1 - x0;
  const std::size_t first = static_cast<std::size_t>(x0) * kComponents;
  const int keep = pull == 1 ? 0 : ny - 1;
  const int a = comps[0], b = comps[1];
  double* kept = base + static_cast<std::size_t>(keep) * row + first;
  for (int x = 0; x < w; ++x) {
    wrap[x][0] = kept[x * kComponents + a];
    wrap[x][1] = kept[x * kComponents + b];
  }
  if (pull == 1) {
    for (int y = 0; y < ny - 1; ++y) {
      double* dst = base + static_cast<std::size_t>(y) * row + first;
      const double* src = dst + row;
      for (int x = 0; x < w; ++x) {
        dst[x * kComponents + a] = src[x * kComponents + a];
        dst[x * kComponents + b] = src[x * kComponents + b];
      }
    }
  } else {
    for (int y = ny - 1; y > 0; --y) {
      double* dst = base + static_cast<std::size_t>(y) * row + first;
      const double* src = dst - row;
      for (int x = 0; x < w; ++x) {
        dst[x * kComponents + a] = src[x * kComponents + a];
        dst[x * kComponents + b] = src[x * kComponents + b];
      }
    }
  }
  double* other = base + static_cast<std::size_t>(ny - 1 - keep) * row + first;
  for (int x = 0; x < w; ++x) {
    other[x * kComponents + a] = wrap[x][0];
    other[x * kComponents + b] = wrap[x][1];
  }
}

void sweep_row(double* row, std::size_t row_site0, int nx, const EvolutionPlan& plan) {
  const auto& t1 = plan.sweep_trig(1);
  const auto& t2 = plan.sweep_trig(2);
  const std::size_t n_ops = sweep_length(plan.options().order);
  for (std::size_t k = 0; k < n_ops; ++k) {
    const SweepOp& op = kSweep[k];
    if (op.collide) {
      for (int x = 0; x < nx; ++x) {
        const std::size_t i = row_site0 + static_cast<std::size_t>(x);
        collide_x_site(row + static_cast<std::size_t>(x) * kComponents, t1.c[i], t1.s[i], t2.c[i],
                       t2.s[i], op.adjoint);
      }
    } else {
      for (int c : kSubsetX[static_cast<std::size_t>(op.subset)]) {
        pull_line(row + c, kComponents, nx, op.pull);
      }
    }
  }
}

void sweep_columns(double* base, int x0, int x1, const EvolutionPlan& plan) {
  const LatticeGrid& g = plan.grid();
  const std::size_t row = static_cast<std::size_t>(g.nx) * kComponents;
  const auto& t0 = plan.sweep_trig(0);
  const auto& t2 = plan.sweep_trig(2);
  const std::size_t n_ops = sweep_length(plan.options().order);
  for (std::size_t k = 0; k < n_ops; ++k) {
    const SweepOp& op = kSweep[k];
    if (op.collide) {
      for (int y = 0; y < g.ny; ++y) {
        for (int x = x0; x < x1; ++x) {
          const std::size_t i = g.site_index(x, y);
          collide_y_site(base + i * kComponents, t0.c[i], t0.s[i], t2.c[i], t2.s[i], op.adjoint);
        }
      }
    } else {
      pull_panel(base, row, g.ny, x0, x1, kSubsetY[static_cast<std::size_t>(op.subset)], op.pull);
    }
  }
}

// Reference building blocks on whole fields.
QubitField collide_field(const QubitField& field, const EvolutionPlan& plan, Axis axis, bool adjoint) {
  const LatticeGrid& g = field.grid();
  const auto& ta = plan.sweep_trig(axis == Axis::x ? 1 : 0);
  const auto& t2 = plan.sweep_trig(2);
  return pointwise_apply(field, [&](int x, int y) {
    const std::size_t i = g.site_index(x, y);
    SiteMatrix m = identity_matrix();
    // Build from the tabulated cos/sin so the reference matches the kernels.
    if (axis == Axis::x) {
      m[1][1] = ta.c[i]; m[1][5] = -ta.s[i]; m[5][1] = ta.s[i]; m[5][5] = ta.c[i];
      m[2][2] = t2.c[i]; m[2][4] = -t2.s[i]; m[4][2] = t2.s[i]; m[4][4] = t2.c[i];
    } else {
      m[0][0] = ta.c[i]; m[0][5] = ta.s[i]; m[5][0] = -ta.s[i]; m[5][5] = ta.c[i];
      m[2][2] = t2.c[i]; m[2][3] = t2.s[i]; m[3][2] = -t2.s[i]; m[3][3] = t2.c[i];
    }
    return adjoint ? transpose(m) : m;
  });
}

QubitField sweep_field(const QubitField& field, const EvolutionPlan& plan, Axis axis) {
  QubitField q = field;
  const auto& subsets = axis == Axis::x ? kSubsetX : kSubsetY;
  const std::size_t n_ops = sweep_length(plan.options().order);
  for (std::size_t k = 0; k < n_ops; ++k) {
    const SweepOp& op = kSweep[k];
    if (op.collide) {
      q = collide_field(q, plan, axis, op.adjoint);
    } else {
      const auto& s = subsets[static_cast<std::size_t>(op.subset)];
      shift_in_place(q, ComponentSet{s[0], s[1]}, axis, -op.pull);
    }
  }
  return q;
}

QubitField potentials_field(const QubitField& field, const EvolutionPlan& plan) {
  const LatticeGrid& g = field.grid();
  const PotentialForm form = plan.options().form;
  QubitField q = pointwise_apply(field, [&](int x, int y) {
    const std::size_t i = g.site_index(x, y);
    const auto& b0 = plan.potential_trig(0);
    const auto& b2 = plan.potential_trig(2);
    SiteMatrix m = identity_matrix();
    if (form == PotentialForm::printed) {
      m[4][2] = -b2.s[i]; m[4][4] = b2.c[i];
      m[5][1] = b0.s[i]; m[5][5] = b0.c[i];
    } else {
      m[1][1] = b0.c[i]; m[1][5] = -b0.s[i]; m[5][1] = b0.s[i]; m[5][5] = b0.c[i];
      m[2][2] = b2.c[i]; m[2][4] = b2.s[i]; m[4][2] = -b2.s[i]; m[4][4] = b2.c[i];
    }
    return m;
  });
  return pointwise_apply(q, [&](int x, int y) {
    const std::size_t i = g.site_index(x, y);
    const auto& b1 = plan.potential_trig(1);
    const auto& b3 = plan.potential_trig(3);
    SiteMatrix m = identity_matrix();
    if (form == PotentialForm::printed) {
      m[3][2] = b3.s[i]; m[3][3] = b3.c[i];
      m[5][0] = -b1.s[i]; m[5][5] = b1.c[i];
    } else {
      m[0][0] = b1.c[i]; m[0][5] = b1.s[i]; m[5][0] = -b1.s[i]; m[5][5] = b1.c[i];
      m[2][2] = b3.c[i]; m[2][3] = -b3.s[i]; m[3][2] = b3.s[i]; m[3][3] = b3.c[i];
    }
    return m;
  });
}

}  // namespace

CollisionAngles collision_angles(const RefractiveField& media) {
  const double delta = media.grid.delta;
  const std::size_t n = media.grid.sites();
  CollisionAngles a;
  a.theta0.resize(n);
  a.theta1.resize(n);
  a.theta2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.theta0[i] = delta / (4.0 * media.n[0][i]);
    a.theta1[i] = delta / (4.0 * media.n[1][i]);
    a.theta2[i] = delta / (4.0 * media.n[2][i]);
  }
  return a;
}

PotentialAngles potential_angles(const RefractiveField& media) {
  const double delta = media.grid.delta;
  const std::size_t n = media.grid.sites();
  PotentialAngles b;
  b.beta0.resize(n);
  b.beta1.resize(n);
  b.beta2.resize(n);
  b.beta3.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.beta0[i] = physical_gradient_angle(delta, media.dn_dx[1][i], media.n[1][i]);
    b.beta1[i] = physical_gradient_angle(delta, media.dn_dy[0][i], media.n[0][i]);
    b.beta2[i] = physical_gradient_angle(delta, media.dn_dx[2][i], media.n[2][i]);
    b.beta3[i] = physical_gradient_angle(delta, media.dn_dy[2][i], media.n[2][i]);
  }
  return b;
}

EvolutionPlan::EvolutionPlan(const RefractiveField& media, PlanOptions options)
    : grid_(media.grid),
      options_(options),
      collision_(collision_angles(media)),
      potential_(potential_angles(media)) {
  grid_.validate();
  const double sweep_scale = options_.order == SweepOrder::first_order ? 2.0 : 1.0;
  sweep_trig_[0] = trig_of(collision_.theta0, sweep_scale);
  sweep_trig_[1] = trig_of(collision_.theta1, sweep_scale);
  sweep_trig_[2] = trig_of(collision_.theta2, sweep_scale);

  double pot_scale = potential_fraction();
  if (options_.form == PotentialForm::balanced) pot_scale *= 0.5;
  if (!options_.potentials) pot_scale = 0.0;
  potential_trig_[0] = trig_of(potential_.beta0, pot_scale);
  potential_trig_[1] = trig_of(potential_.beta1, pot_scale);
  potential_trig_[2] = trig_of(potential_.beta2, pot_scale);
  potential_trig_[3] = trig_of(potential_.beta3, pot_scale);
}

SiteMatrix collision_x_matrix(double theta1, double theta2) {
  SiteMatrix m = identity_matrix();
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  m[1][1] = c1; m[1][5] = -s1;
  m[2][2] = c2; m[2][4] = -s2;
  m[4][2] = s2; m[4][4] = c2;
  m[5][1] = s1; m[5][5] = c1;
  return m;
}

SiteMatrix collision_y_matrix(double theta0, double theta2) {
  SiteMatrix m = identity_matrix();
  const double c0 = std::cos(theta0), s0 = std::sin(theta0);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  m[0][0] = c0; m[0][5] = s0;
  m[2][2] = c2; m[2][3] = s2;
  m[3][2] = -s2; m[3][3] = c2;
  m[5][0] = -s0; m[5][5] = c0;
  return m;
}

SiteMatrix potential_x_matrix(double beta0, double beta2) {
  SiteMatrix m = identity_matrix();
  m[4][2] = -std::sin(beta2);
  m[4][4] = std::cos(beta2);
  m[5][1] = std::sin(beta0);
  m[5][5] = std::cos(beta0);
  return m;
}

SiteMatrix potential_y_matrix(double beta1, double beta3) {
  SiteMatrix m = identity_matrix();
  m[3][2] = std::sin(beta3);
  m[3][3] = std::cos(beta3);
  m[5][0] = -std::sin(beta1);
  m[5][5] = std::cos(beta1);
  return m;
}

SiteMatrix balanced_potential_x_matrix(double beta0, double beta2) {
  SiteMatrix m = identity_matrix();
  const double c0 = std::cos(beta0 / 2), s0 = std::sin(beta0 / 2);
  const double c2 = std::cos(beta2 / 2), s2 = std::sin(beta2 / 2);
  m[1][1] = c0; m[1][5] = -s0; m[5][1] = s0; m[5][5] = c0;
  m[2][2] = c2; m[2][4] = s2; m[4][2] = -s2; m[4][4] = c2;
  return m;
}

SiteMatrix balanced_potential_y_matrix(double beta1, double beta3) {
  SiteMatrix m = identity_matrix();
  const double c1 = std::cos(beta1 / 2), s1 = std::sin(beta1 / 2);
  const double c3 = std::cos(beta3 / 2), s3 = std::sin(beta3 / 2);
  m[0][0] = c1; m[0][5] = s1; m[5][0] = -s1; m[5][5] = c1;
  m[2][2] = c3; m[2][3] = -s3; m[3][2] = s3; m[3][3] = c3;
  return m;
}

QubitField collision_x(const QubitField& field, const CollisionAngles& angles, bool adjoint) {
  const LatticeGrid& g = field.grid();
  return pointwise_apply(field, [&](int x, int y) {
    const std::size_t i = g.site_index(x, y);
    const SiteMatrix m = collision_x_matrix(angles.theta1[i], angles.theta2[i]);
    return adjoint ? transpose(m) : m;
  });
}

QubitField collision_y(const QubitField& field, const CollisionAngles& angles, bool adjoint) {
  const LatticeGrid& g = field.grid();
  return pointwise_apply(field, [&](int x, int y) {
    const std::size_t i = g.site_index(x, y);
    const SiteMatrix m = collision_y_matrix(angles.theta0[i], angles.theta2[i]);
    return adjoint ? transpose(m) : m;
  });
}

QubitField unitary_sweep_x(const QubitField& field, const EvolutionPlan& plan) {
  return sweep_field(field, plan, Axis::x);
}

QubitField unitary_sweep_y(const QubitField& field, const EvolutionPlan& plan) {
  return sweep_field(field, plan, Axis::y);
}

QubitField potential_x(const QubitField& field, const EvolutionPlan& plan) {
  const LatticeGrid& g = field.grid();
  const PotentialAngles& b = plan.potential();
  return pointwise_apply(field, [&](int x, int y) {
    const std::size_t i = g.site_index(x, y);
    return potential_x_matrix(b.beta0[i], b.beta2[i]);
  });
}

QubitField potential_y(const QubitField& field, const EvolutionPlan& plan) {
  const LatticeGrid& g = field.grid();
  const PotentialAngles& b = plan.potential();
  return pointwise_apply(field, [&](int x, int y) {
    const std::size_t i = g.site_index(x, y);
    return potential_y_matrix(b.beta1[i], b.beta3[i]);
  });
}

QubitField reference_step(const QubitField& field, const EvolutionPlan& plan) {
  const bool halfway = plan.options().mode == PotentialMode::halfway_and_end;
  QubitField q = sweep_field(field, plan, Axis::x);
  if (halfway) q = potentials_field(q, plan);
  q = sweep_field(q, plan, Axis::y);
  return potentials_field(q, plan);
}

void advance(QubitField& field, const EvolutionPlan& plan, int steps) {
  const LatticeGrid& g = plan.grid();
  if (!(field.grid() == g)) throw Error("advance: field and plan grids differ");
  const bool halfway = plan.options().mode == PotentialMode::halfway_and_end;
  const std::size_t row = static_cast<std::size_t>(g.nx) * kComponents;
  constexpr int kPanel = 64;
  const int panels = (g.nx + kPanel - 1) / kPanel;
  double* base = field.data().data();

  for (int s = 0; s < steps; ++s) {
    // x sweep: rows are independent.
#pragma omp parallel for schedule(static)
    for (int y = 0; y < g.ny; ++y) {
      double* r = base + static_cast<std::size_t>(y) * row;
      const std::size_t site0 = g.site_index(0, y);
      sweep_row(r, site0, g.nx, plan);
      if (halfway) {
        for (int x = 0; x < g.nx; ++x) {
          potentials_site(r + static_cast<std::size_t>(x) * kComponents, plan, site0 + static_cast<std::size_t>(x));
        }
      }
    }
    // y sweep: column panels are independent.
#pragma omp parallel for schedule(static)
    for (int p = 0; p < panels; ++p) {
      const int x0 = p * kPanel;
      const int x1 = std::min(g.nx, x0 + kPanel);
      sweep_columns(base, x0, x1, plan);
      for (int y = 0; y < g.ny; ++y) {
        for (int x = x0; x < x1; ++x) {
          const std::size_t i = g.site_index(x, y);
          potentials_site(base + i * kComponents, plan, i);
        }
      }
    }
  }
}

QubitField step(const QubitField& field, const EvolutionPlan& plan) {
  QubitField out = field;
  advance(out, plan, 1);
  return out;
}

}  // namespace qla
