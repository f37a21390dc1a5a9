// evolution.hpp: the qubit lattice time step.
//
// One step advances Q(t) to Q(t + dt) with dt = delta^2:
//
//   Q <- V_Y V_X U_Y U_X Q            (end_only)
//   Q <- V U_Y V U_X Q, V at half strength   (halfway_and_end)
//
// U_X / U_Y are the 16-operator collide-stream sweeps; operator products are
// read right to left. Streaming operators S^{+} pull from the +1 neighbour,
// q(x) <- q(x + 1), which is shift(direction = -1) in lattice_core terms.
//
// Two forms of the potential operator are available:
//  - printed:  sparse matrices that differ from the identity in two rows
//              (rows 4, 5 for V_X and rows 3, 5 for V_Y). Non-unitary.
//  - balanced: two-sided rotations by b/2 in the same planes. The unitary
//              sweeps already produce half of every refractive-index gradient
//              term, so this is the form consistent with the continuum
//              equations; it coincides with the LCU_3 pattern at half angle.

#pragma once

#include <array>
#include <vector>

#include "qla/lattice.hpp"
#include "qla/media.hpp"

namespace qla {

/// theta0 = delta / (4 n_x), theta1 = delta / (4 n_y), theta2 = delta / (4 n_z).
struct CollisionAngles {
  std::vector<double> theta0;
  std::vector<double> theta1;
  std::vector<double> theta2;
};

/// beta0 = delta^2 (dn_y/dx) / n_y^2, beta1 = delta^2 (dn_x/dy) / n_x^2,
/// beta2 = delta^2 (dn_z/dx) / n_z^2, beta3 = delta^2 (dn_z/dy) / n_z^2, with
/// physical derivatives (lattice spacing delta).
struct PotentialAngles {
  std::vector<double> beta0;
  std::vector<double> beta1;
  std::vector<double> beta2;
  std::vector<double> beta3;
};

enum class PotentialMode { end_only, halfway_and_end };
enum class PotentialForm { balanced, printed };
/// first_order keeps only the first four collide-stream pairs of each sweep
/// and doubles the collision angles so the same continuum limit is targeted.
enum class SweepOrder { second_order, first_order };

struct PlanOptions {
  PotentialMode mode = PotentialMode::halfway_and_end;
  PotentialForm form = PotentialForm::balanced;
  SweepOrder order = SweepOrder::second_order;
  bool potentials = true;
};

CollisionAngles collision_angles(const RefractiveField& media);
PotentialAngles potential_angles(const RefractiveField& media);

/// Precomputed per-site angles and their cosines/sines for one run.
class EvolutionPlan {
 public:
  EvolutionPlan(const RefractiveField& media, PlanOptions options = {});

  const LatticeGrid& grid() const { return grid_; }
  const PlanOptions& options() const { return options_; }
  const CollisionAngles& collision() const { return collision_; }
  const PotentialAngles& potential() const { return potential_; }

  /// Fraction of the full potential strength applied per application
  /// (1 for end_only, 1/2 for halfway_and_end).
  double potential_fraction() const {
    return options_.mode == PotentialMode::halfway_and_end ? 0.5 : 1.0;
  }

  // Trig tables, one entry per site. The sweep tables already include the
  // angle doubling of first_order sweeps; the potential tables include the
  // mode fraction and the half angle of the balanced form.
  struct Trig {
    std::vector<double> c;
    std::vector<double> s;
  };
  const Trig& sweep_trig(int k) const { return sweep_trig_[static_cast<std::size_t>(k)]; }
  const Trig& potential_trig(int k) const { return potential_trig_[static_cast<std::size_t>(k)]; }

 private:
  LatticeGrid grid_;
  PlanOptions options_;
  CollisionAngles collision_;
  PotentialAngles potential_;
  std::array<Trig, 3> sweep_trig_;
  std::array<Trig, 4> potential_trig_;
};

SiteMatrix collision_x_matrix(double theta1, double theta2);
SiteMatrix collision_y_matrix(double theta0, double theta2);
SiteMatrix potential_x_matrix(double beta0, double beta2);
SiteMatrix potential_y_matrix(double beta1, double beta3);
SiteMatrix balanced_potential_x_matrix(double beta0, double beta2);
SiteMatrix balanced_potential_y_matrix(double beta1, double beta3);

QubitField collision_x(const QubitField& field, const CollisionAngles& angles, bool adjoint);
QubitField collision_y(const QubitField& field, const CollisionAngles& angles, bool adjoint);

/// Full 16-operator sweeps (or the first-order truncation when the plan asks
/// for it) composed from the lattice primitives.
QubitField unitary_sweep_x(const QubitField& field, const EvolutionPlan& plan);
QubitField unitary_sweep_y(const QubitField& field, const EvolutionPlan& plan);

/// Printed potential matrices with the plan's full angles.
QubitField potential_x(const QubitField& field, const EvolutionPlan& plan);
QubitField potential_y(const QubitField& field, const EvolutionPlan& plan);

/// One time step using the composed primitives; slow, used as reference.
QubitField reference_step(const QubitField& field, const EvolutionPlan& plan);

/// One time step through the fused row/column kernels. Produces the same
/// floating-point result as reference_step.
QubitField step(const QubitField& field, const EvolutionPlan& plan);
void advance(QubitField& field, const EvolutionPlan& plan, int steps = 1);

}  // namespace qla
