#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "qla/media.hpp"

using namespace qla;

TEST_SUITE("media") {
  TEST_CASE("vacuum medium") {
    const LatticeGrid g{16, 12, 0.1};
    const RefractiveField f = sample_medium(MediumSpec{Homogeneous{1.0}, {}}, g);
    for (int a = 0; a < 3; ++a) {
      for (std::size_t i = 0; i < g.sites(); ++i) {
        CHECK(f.n[a][i] == 1.0);
        CHECK(f.dn_dx[a][i] == 0.0);
        CHECK(f.dn_dy[a][i] == 0.0);
      }
    }
  }

  TEST_CASE("cylinder peak and boundary layer") {
    const LatticeGrid g{200, 200, 0.1};
    const RefractiveField f = sample_medium(MediumSpec{Cylinder{100, 100, 100, 3.0, 10.0}, {}}, g);
    CHECK(f.index(2, 100, 100) == doctest::Approx(1.0 + (1.0 + std::tanh(5.0))).epsilon(1e-12));

    // Scan outward along +x and find where n crosses 2.98 and 1.02.
    double inner = -1, outer = -1;
    for (int x = 100; x < 199; ++x) {
      const double a = f.index(0, x, 100), b = f.index(0, x + 1, 100);
      if (a >= 2.98 && b < 2.98) inner = x + (a - 2.98) / (a - b);
      if (a >= 1.02 && b < 1.02) outer = x + (a - 1.02) / (a - b);
    }
    REQUIRE(inner > 0);
    REQUIRE(outer > 0);
    // atanh(0.98) on either side of R, i.e. about 4.6 boundary widths.
    CHECK((outer - inner) == doctest::Approx(2 * std::atanh(0.98) * 10.0).epsilon(0.01));
    CHECK(outer - inner > 40.0);
    CHECK(outer - inner < 50.0);
  }

  TEST_CASE("analytic derivatives agree with central differences") {
    const LatticeGrid g{120, 110, 0.1};
    for (const Profile& p : {Profile{Cylinder{60, 55, 60, 2.5, 6.0}}, Profile{Cone{60, 55, 70, 2.0, 4.0}}}) {
      const RefractiveField f = sample_medium(MediumSpec{p, {}}, g);
      double worst = 0;
      for (int y = 1; y < g.ny - 1; ++y) {
        for (int x = 1; x < g.nx - 1; ++x) {
          const double fx = 0.5 * (f.index(1, x + 1, y) - f.index(1, x - 1, y));
          const double fy = 0.5 * (f.index(1, x, y + 1) - f.index(1, x, y - 1));
          const std::size_t i = g.site_index(x, y);
          worst = std::max({worst, std::abs(fx - f.dn_dx[1][i]), std::abs(fy - f.dn_dy[1][i])});
        }
      }
      // Third derivative of a tanh of width w is about amp / w^3; the
      // central-difference error is a sixth of that.
      CHECK(worst < 1e-2);
    }
  }

  TEST_CASE("cone is linear inside the base") {
    const LatticeGrid g{100, 100, 0.1};
    const RefractiveField f = sample_medium(MediumSpec{Cone{50, 50, 60, 2.5, 0.0}, {}}, g);
    CHECK(f.index(0, 50, 50) == doctest::Approx(2.5));
    CHECK(f.index(0, 65, 50) == doctest::Approx(1.0 + 1.5 * 15.0 / 30.0));
    CHECK(f.index(0, 85, 50) == 1.0);
    CHECK(f.dn_dx[0][g.site_index(65, 50)] == doctest::Approx(-1.5 / 30.0));
  }

  TEST_CASE("rounded cone keeps n >= 1 and is close to the sharp cone away from the edge") {
    const LatticeGrid g{100, 100, 0.1};
    const RefractiveField f = sample_medium(MediumSpec{Cone{50, 50, 60, 2.5, 2.0}, {}}, g);
    for (double v : f.n[0]) CHECK(v >= 1.0);
    CHECK(f.index(0, 50, 50) == doctest::Approx(2.5).epsilon(1e-6));
  }

  TEST_CASE("geometry must fit with padding") {
    const LatticeGrid g{100, 100, 0.1};
    CHECK_THROWS_AS((sample_medium(MediumSpec{Cylinder{50, 50, 96, 3.0, 5.0}, {}}, g)), Error);
    CHECK_THROWS_AS((sample_medium(MediumSpec{Cylinder{10, 50, 20, 3.0, 5.0}, {}}, g)), Error);
    CHECK_THROWS_AS(sample_medium(MediumSpec{Homogeneous{0.5}, {}}, g), Error);
    CHECK_THROWS_AS((sample_medium(MediumSpec{Cylinder{50, 50, 20, 3.0, 0.0}, {}}, g)), Error);
  }

  TEST_CASE("per-axis override") {
    const LatticeGrid g{60, 60, 0.1};
    MediumSpec spec{Homogeneous{1.0}, {}};
    spec.per_axis[2] = Cylinder{30, 30, 20, 3.0, 2.0};
    const RefractiveField f = sample_medium(spec, g);
    CHECK(f.index(0, 30, 30) == 1.0);
    CHECK(f.index(2, 30, 30) == doctest::Approx(1.0 + (1.0 + std::tanh(5.0))).epsilon(1e-12));
  }

  TEST_CASE("dyson map") {
    const LatticeGrid g{4, 4, 0.1};
    RefractiveField vac = sample_medium(MediumSpec{}, g);
    Vec3Field e(g.sites(), {0, 0, 1}), h(g.sites(), {0, 0, 0});
    const QubitField q = dyson_map(e, h, vac);
    CHECK((q.site(1, 2) == SiteVector{0, 0, 1, 0, 0, 0}));

    RefractiveField dense = vac;
    dense.n[2][g.site_index(2, 3)] = 3.0;
    Vec3Field e2(g.sites(), {0, 0, 0});
    e2[g.site_index(2, 3)] = {0, 0, 2};
    const QubitField q2 = dyson_map(e2, h, dense);
    CHECK(q2.at(2, 3, 2) == 6.0);
    CHECK(inverse_dyson(q2, dense).e[g.site_index(2, 3)][2] == 2.0);

    CHECK_THROWS_AS(dyson_map(Vec3Field(3), h, vac), Error);
  }

  TEST_CASE("inverse dyson round trip") {
    const LatticeGrid g{20, 16, 0.1};
    const RefractiveField f = sample_medium(MediumSpec{Cylinder{10, 8, 6, 2.5, 1.0}, {}}, g);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    Vec3Field e(g.sites()), h(g.sites());
    for (std::size_t i = 0; i < g.sites(); ++i) {
      e[i] = {u(rng), u(rng), u(rng)};
      h[i] = {u(rng), u(rng), u(rng)};
    }
    const PhysicalFields back = inverse_dyson(dyson_map(e, h, f), f);
    for (std::size_t i = 0; i < g.sites(); ++i) {
      for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(back.e[i][c] - e[i][c]) <= 1e-14);
        CHECK(back.h[i][c] == h[i][c]);
      }
    }
    const PhysicalFields zero = inverse_dyson(QubitField(g), f);
    CHECK(zero.e[5][2] == 0.0);
  }

  TEST_CASE("raster medium file round trip") {
    const LatticeGrid g{8, 6, 0.05};
    std::vector<double> values(g.sites());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = 1.0 + 0.01 * static_cast<double>(i);
    const auto path = std::filesystem::temp_directory_path() / "qla_raster_test.qlan";
    write_raster_medium(path, g, 1, values);
    const RefractiveField f = read_raster_medium(path, g.delta);
    CHECK(f.grid == g);
    CHECK(f.index(1, 3, 2) == values[g.site_index(3, 2)]);
    // Periodic central difference along x: (n(4,2) - n(2,2)) / 2 = 0.01.
    CHECK(f.dn_dx[0][g.site_index(3, 2)] == doctest::Approx(0.01));
    CHECK(f.dn_dy[0][g.site_index(3, 2)] == doctest::Approx(0.08));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(read_raster_medium(path, 0.1), Error);
    CHECK_THROWS_AS(raster_medium(g, 2, values), Error);
  }
}
