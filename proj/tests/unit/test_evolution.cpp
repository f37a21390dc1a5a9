#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qla/evolution.hpp"

using namespace qla;

namespace {

QubitField random_field(const LatticeGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  return new_field(g, [&](int, int) {
    SiteVector v;
    for (double& c : v) c = gauss(rng);
    return v;
  });
}

double max_abs_diff(const QubitField& a, const QubitField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

RefractiveField bumpy_medium(const LatticeGrid& g) {
  return sample_medium(MediumSpec{Cylinder{g.nx / 2.0, g.ny / 2.0, g.nx / 3.0, 2.5, 3.0}, {}}, g);
}

// Energy-weighted centroid along one axis.
double centroid(const QubitField& q, Axis axis) {
  const LatticeGrid& g = q.grid();
  double num = 0, den = 0;
  for (int y = 0; y < g.ny; ++y) {
    for (int x = 0; x < g.nx; ++x) {
      double e = 0;
      for (int c = 0; c < kComponents; ++c) e += q.at(x, y, c) * q.at(x, y, c);
      num += e * (axis == Axis::x ? x : y);
      den += e;
    }
  }
  return num / den;
}

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("collision angles") {
    const LatticeGrid g{4, 4, 0.1};
    RefractiveField m = sample_medium(MediumSpec{}, g);
    m.n[1].assign(g.sites(), 2.0);
    const CollisionAngles a = collision_angles(m);
    CHECK(a.theta1[0] == doctest::Approx(0.0125));
    CHECK(a.theta0[0] == doctest::Approx(0.025));
    CHECK(a.theta2[5] == doctest::Approx(0.025));
  }

  TEST_CASE("potential angles vanish in homogeneous media") {
    const LatticeGrid g{8, 8, 0.1};
    const PotentialAngles b = potential_angles(sample_medium(MediumSpec{Homogeneous{2.0}, {}}, g));
    for (std::size_t i = 0; i < g.sites(); ++i) {
      CHECK(b.beta0[i] == 0.0);
      CHECK(b.beta1[i] == 0.0);
      CHECK(b.beta2[i] == 0.0);
      CHECK(b.beta3[i] == 0.0);
    }
  }

  TEST_CASE("collision matrices") {
    const SiteMatrix zero = collision_x_matrix(0.0, 0.0);
    CHECK(zero == identity_matrix());
    CHECK(collision_y_matrix(0.0, 0.0) == identity_matrix());

    // At pi/2 the (1,5) and (2,4) pairs swap up to sign.
    const SiteMatrix quarter = collision_x_matrix(std::numbers::pi / 2, std::numbers::pi / 2);
    const SiteVector v{1, 2, 3, 4, 5, 6};
    SiteVector out{};
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) out[i] += quarter[i][j] * v[j];
    }
    CHECK(out[0] == 1.0);
    CHECK(out[1] == doctest::Approx(-6.0));
    CHECK(out[5] == doctest::Approx(2.0));
    CHECK(out[2] == doctest::Approx(-5.0));
    CHECK(out[4] == doctest::Approx(3.0));
    CHECK(out[3] == 4.0);
  }

  TEST_CASE("collision followed by its adjoint is the identity") {
    const LatticeGrid g{20, 17, 0.3};
    const RefractiveField m = bumpy_medium(g);
    const CollisionAngles a = collision_angles(m);
    const QubitField q = random_field(g, 1);
    CHECK(max_abs_diff(collision_x(collision_x(q, a, false), a, true), q) <= 1e-15 * 8);
    CHECK(max_abs_diff(collision_y(collision_y(q, a, true), a, false), q) <= 1e-15 * 8);
    CHECK(collision_x(q, CollisionAngles{std::vector<double>(g.sites(), 0.0), std::vector<double>(g.sites(), 0.0),
                                         std::vector<double>(g.sites(), 0.0)},
                      false) == q);
  }

  TEST_CASE("sweeps fix a constant vacuum field and keep the norm") {
    const LatticeGrid g{12, 10, 0.1};
    const RefractiveField vac = sample_medium(MediumSpec{}, g);
    const EvolutionPlan plan(vac);
    const QubitField c = new_field(g, [](int, int) { return SiteVector{0.3, -1, 2, 0.5, 0.25, -0.75}; });
    CHECK(max_abs_diff(unitary_sweep_x(c, plan), c) <= 1e-15);
    CHECK(max_abs_diff(unitary_sweep_y(c, plan), c) <= 1e-15);

    const RefractiveField m = bumpy_medium({40, 36, 0.1});
    const EvolutionPlan p2(m);
    const QubitField q = random_field(m.grid, 9);
    CHECK(std::abs(unitary_sweep_x(q, p2).norm_squared() / q.norm_squared() - 1) <= 1e-12);
    CHECK(std::abs(unitary_sweep_y(q, p2).norm_squared() / q.norm_squared() - 1) <= 1e-12);
  }

  TEST_CASE("printed potential matrices") {
    CHECK(potential_x_matrix(0, 0) == identity_matrix());
    CHECK(potential_y_matrix(0, 0) == identity_matrix());
    const SiteMatrix vx = potential_x_matrix(0.01, 0.02);
    CHECK(vx[4][2] == -std::sin(0.02));
    CHECK(vx[4][4] == std::cos(0.02));
    CHECK(vx[5][1] == std::sin(0.01));
    const SiteMatrix vy = potential_y_matrix(0.03, 0.04);
    CHECK(vy[5][0] == -std::sin(0.03));
    CHECK(vy[3][2] == std::sin(0.04));
    CHECK(vy[3][3] == std::cos(0.04));
  }

  TEST_CASE("potentials are the identity in vacuum") {
    const LatticeGrid g{8, 8, 0.1};
    const EvolutionPlan plan(sample_medium(MediumSpec{}, g));
    const QubitField q = random_field(g, 4);
    CHECK(potential_x(q, plan) == q);
    CHECK(potential_y(q, plan) == q);
  }

  TEST_CASE("potential_y feeds the n_z gradient term into q3") {
    // q3 gains dt * q2 * (dn_z/dy) / n_z^2 with the physical derivative.
    const LatticeGrid g{40, 40, 0.05};
    const RefractiveField m = bumpy_medium(g);
    const EvolutionPlan plan(m);
    const QubitField e2 = new_field(g, [](int, int) { return SiteVector{0, 0, 1, 0, 0, 0}; });
    const QubitField out = potential_y(e2, plan);
    const double dt = g.delta * g.delta;
    double worst = 0, scale = 0;
    for (int y = 1; y < g.ny - 1; ++y) {
      for (int x = 0; x < g.nx; ++x) {
        const double nz = m.index(2, x, y);
        const double dnz_dy = (m.index(2, x, y + 1) - m.index(2, x, y - 1)) / (2 * g.delta);
        const double expect = dt * dnz_dy / (nz * nz);
        worst = std::max(worst, std::abs(out.at(x, y, 3) - expect));
        scale = std::max(scale, std::abs(expect));
      }
    }
    REQUIRE(scale > 0);
    CHECK(worst <= 0.05 * scale);
    const QubitField vx = potential_x(e2, plan);
    REQUIRE(plan.potential().beta2[g.site_index(14, 20)] != 0.0);
    CHECK(vx.at(14, 20, 4) == doctest::Approx(-std::sin(plan.potential().beta2[g.site_index(14, 20)])));
  }

  TEST_CASE("fused step equals the reference step bit for bit") {
    const LatticeGrid g{37, 29, 0.2};
    const RefractiveField m = sample_medium(MediumSpec{Cylinder{18, 14, 14, 2.0, 2.0}, {}}, g);
    const QubitField q = random_field(g, 21);
    for (PotentialForm form : {PotentialForm::balanced, PotentialForm::printed}) {
      for (PotentialMode mode : {PotentialMode::end_only, PotentialMode::halfway_and_end}) {
        for (SweepOrder order : {SweepOrder::second_order, SweepOrder::first_order}) {
          PlanOptions o;
          o.form = form;
          o.mode = mode;
          o.order = order;
          const EvolutionPlan plan(m, o);
          CHECK(step(q, plan) == reference_step(q, plan));
        }
      }
    }
  }

  TEST_CASE("step is linear and maps zero to zero") {
    const LatticeGrid g{16, 16, 0.1};
    const EvolutionPlan plan(bumpy_medium(g));
    CHECK(step(QubitField(g), plan) == QubitField(g));
    const QubitField q = random_field(g, 5);
    QubitField q2 = q;
    for (double& v : q2.data()) v *= 2.0;
    QubitField expect = step(q, plan);
    for (double& v : expect.data()) v *= 2.0;
    CHECK(step(q2, plan) == expect);
  }

  TEST_CASE("norm is conserved with potentials disabled") {
    const LatticeGrid g{32, 32, 0.1};
    PlanOptions off;
    off.potentials = false;
    const EvolutionPlan plan(bumpy_medium(g), off);
    QubitField q = random_field(g, 8);
    const double n0 = q.norm_squared();
    advance(q, plan, 1000);
    CHECK(std::abs(q.norm_squared() / n0 - 1.0) <= 1e-10);
  }

  TEST_CASE("balanced potentials keep the norm") {
    const LatticeGrid g{32, 32, 0.1};
    const EvolutionPlan plan(bumpy_medium(g));
    QubitField q = random_field(g, 12);
    const double n0 = q.norm_squared();
    advance(q, plan, 500);
    CHECK(std::abs(q.norm_squared() / n0 - 1.0) <= 1e-12);
  }

  TEST_CASE("vacuum pulses move at the same speed along x and y") {
    const double delta = 0.1;
    const int steps = 800;
    auto gauss = [](int s) { return std::exp(-0.5 * std::pow((s - 40.0) / 8.0, 2)); };
    // E_z pulse moving toward +x (B_y) and toward +y (B_x).
    const LatticeGrid gx{200, 4, delta}, gy{4, 200, delta};
    QubitField px = new_field(gx, [&](int x, int) { return SiteVector{0, 0, -gauss(x), 0, gauss(x), 0}; });
    QubitField py = new_field(gy, [&](int, int y) { return SiteVector{0, 0, gauss(y), gauss(y), 0, 0}; });
    const double x0 = centroid(px, Axis::x), y0 = centroid(py, Axis::y);
    advance(px, EvolutionPlan(sample_medium(MediumSpec{}, gx)), steps);
    advance(py, EvolutionPlan(sample_medium(MediumSpec{}, gy)), steps);
    const double vx = (centroid(px, Axis::x) - x0) / steps;
    const double vy = (centroid(py, Axis::y) - y0) / steps;
    CHECK(vx > 0);
    CHECK(vy > 0);
    CHECK(std::abs(vx / vy - 1.0) <= 0.005);
    CHECK(vx == doctest::Approx(delta).epsilon(0.01));
  }
}
