#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qla/config.hpp"
#include "qla/driver.hpp"
#include "qla/snapshot.hpp"

using namespace qla;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qla_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig small_config(const fs::path& out) {
  RunConfig c;
  c.grid = {64, 16, 0.1};
  c.medium = {Homogeneous{1.0}, {}};
  c.pulse.center_x = 20;
  c.pulse.width = 12;
  c.steps = 20;
  c.snapshot_interval = 8;
  c.output_dir = out;
  return c;
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::vector<char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Cross-correlation shift of q4 against the initial profile, refined by a
// parabola through the peak lag, and the relative L2 distance between the
// final (q2, q4) and the ideal pulse translated by that shift.
struct PulseMeasure {
  double shift = 0.0;
  double distortion = 0.0;
};

PulseMeasure propagate_pulse(const LatticeGrid& g, const PulseSpec& p, double travel) {
  const RefractiveField vac = sample_medium({Homogeneous{1.0}, {}}, g);
  Simulation sim(vac, init_pulse(p, vac), {});
  sim.advance(std::lround(travel / g.delta));
  const int y = g.ny / 2;
  auto corr = [&](int lag) {
    double s = 0;
    for (int x = 0; x < g.nx; ++x) s += sim.field().at(((x + lag) % g.nx + g.nx) % g.nx, y, 4) * pulse_profile(p, x);
    return s;
  };
  int best = 0;
  double peak = corr(0);
  for (int lag = 1; lag < g.nx; ++lag) {
    const double c = corr(lag);
    if (c > peak) {
      peak = c;
      best = lag;
    }
  }
  const double l = corr(best - 1), r = corr(best + 1);
  PulseMeasure m;
  m.shift = best + 0.5 * (l - r) / (l - 2 * peak + r);
  PulseSpec moved = p;
  moved.center_x = p.center_x + m.shift;
  double num = 0, den = 0;
  for (int x = 0; x < g.nx; ++x) {
    const double ideal = pulse_profile(moved, x);
    const double e4 = sim.field().at(x, y, 4) - ideal;
    const double e2 = sim.field().at(x, y, 2) + ideal;
    num += e4 * e4 + e2 * e2;
    den += 2 * ideal * ideal;
  }
  m.distortion = std::sqrt(num / den);
  return m;
}

}  // namespace

TEST_SUITE("driver") {
  TEST_CASE("config defaults and parsing") {
    const RunConfig c = parse_config(R"({
      "grid": {"nx": 128, "ny": 64, "delta": 0.05},
      "medium": {"type": "cone", "center": [64, 32], "base_diameter": 40, "n_max": 2, "edge_rounding": 1.5},
      "pulse": {"polarization": "Ey_Bz", "center_x": 20, "width": 16, "amplitude": 0.5},
      "steps": 10, "snapshot_interval": 5, "potential_mode": "end_only", "potential_form": "printed"
    })");
    CHECK((c.grid == LatticeGrid{128, 64, 0.05}));
    REQUIRE(std::holds_alternative<Cone>(c.medium.profile));
    CHECK(std::get<Cone>(c.medium.profile).edge_rounding == 1.5);
    CHECK(c.pulse.polarization == Polarization::Ey_Bz);
    CHECK(c.pulse.amplitude == 0.5);
    CHECK(c.potential_mode == PotentialMode::end_only);
    CHECK(c.potential_form == PotentialForm::printed);

    const RunConfig d = parse_config("{}");
    CHECK((d.grid == LatticeGrid{512, 512, 0.1}));
    CHECK(d.potential_mode == PotentialMode::halfway_and_end);
    CHECK(d.potential_form == PotentialForm::balanced);
  }

  TEST_CASE("config round trip") {
    RunConfig c = small_config("somewhere");
    c.medium.per_axis[2] = Cylinder{32, 8, 10, 2.5, 2};
    c.seed = 77;
    const std::string text = config_to_json(c);
    const RunConfig back = parse_config(text);
    CHECK(config_to_json(back) == text);
    CHECK(back.medium.per_axis[2].has_value());
    CHECK(back.seed == 77);
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config(R"({"grd": {}})"), Error);
    CHECK_THROWS_AS((parse_config(R"({"grid": {"nx": 64, "ny": 64, "delta": 0.1, "nz": 1}})")), Error);
    CHECK_THROWS_AS(parse_config(R"({"medium": {"type": "sphere"}})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"potential_mode": "sometimes"})"), Error);
    CHECK_THROWS_AS(parse_config("{"), Error);
    CHECK_THROWS_AS((parse_config(R"({"grid": {"nx": 2, "ny": 64, "delta": 0.1}})")), Error);
    CHECK_THROWS_AS(parse_config(R"({"steps": -1})"), Error);
    CHECK_THROWS_AS(load_config("/nonexistent/qla.json"), Error);
  }

  TEST_CASE("snapshot round trip") {
    const fs::path dir = scratch("snap");
    const LatticeGrid g{8, 6, 0.25};
    QubitField f(g);
    for (std::size_t i = 0; i < f.data().size(); ++i) f.data()[i] = std::sin(0.37 * static_cast<double>(i));
    const fs::path p = dir / "a.qlaf";
    const std::uint32_t crc = write_snapshot(f, 123, p);
    CHECK(fs::file_size(p) == 4 + 4 * 4 + 8 + 8 + 8 * 8 * 6 * 6 + 4);
    CHECK(stored_crc(p) == crc);
    const Snapshot s = read_snapshot(p);
    CHECK(s.step == 123);
    CHECK(s.field.grid() == g);
    CHECK(std::equal(s.field.data().begin(), s.field.data().end(), f.data().begin()));

    const std::vector<char> bytes = slurp(p);
    std::vector<char> body(bytes.begin(), bytes.end() - 4);
    CHECK(crc32_of(body.data(), body.size()) == crc);

    std::vector<char> flipped = bytes;
    flipped[100] ^= 0x01;
    spit(dir / "flip.qlaf", flipped);
    CHECK_THROWS_WITH_AS(read_snapshot(dir / "flip.qlaf"), doctest::Contains("checksum"), Error);

    spit(dir / "short.qlaf", std::vector<char>(bytes.begin(), bytes.begin() + 200));
    CHECK_THROWS_AS(read_snapshot(dir / "short.qlaf"), Error);

    std::vector<char> ver = bytes;
    ver[4] = 2;
    spit(dir / "ver.qlaf", ver);
    CHECK_THROWS_WITH_AS(read_snapshot(dir / "ver.qlaf"), doctest::Contains("version"), Error);

    std::vector<char> magic = bytes;
    magic[0] = 'X';
    spit(dir / "magic.qlaf", magic);
    CHECK_THROWS_AS(read_snapshot(dir / "magic.qlaf"), Error);
    fs::remove_all(dir);
  }

  TEST_CASE("pulse initialization") {
    const LatticeGrid g{128, 4, 0.1};
    const RefractiveField vac = sample_medium({Homogeneous{1.0}, {}}, g);
    PulseSpec p;
    p.center_x = 40;
    p.width = 43;
    const QubitField f = init_pulse(p, vac);
    CHECK(f.at(40, 0, 2) == doctest::Approx(-1.0));
    CHECK(f.at(40, 3, 4) == doctest::Approx(1.0));
    CHECK(f.at(50, 1, 4) == doctest::Approx(std::exp(-0.5)));
    CHECK(f.at(50, 1, 0) == 0.0);

    p.polarization = Polarization::Ey_Bz;
    const QubitField h = init_pulse(p, vac);
    CHECK(h.at(40, 2, 1) == doctest::Approx(1.0));
    CHECK(h.at(40, 2, 5) == doctest::Approx(1.0));
    CHECK(h.at(40, 2, 2) == 0.0);

    const RefractiveField glass = sample_medium({Homogeneous{1.5}, {}}, g);
    CHECK_THROWS_AS(init_pulse(p, glass), Error);
  }

  TEST_CASE("run with zero steps") {
    const fs::path dir = scratch("zero");
    RunConfig c = small_config(dir);
    c.steps = 0;
    const SnapshotManifest m = run(c);
    REQUIRE(m.snapshots.size() == 1);
    CHECK(m.snapshots[0].step == 0);
    CHECK(m.max_relative_drift == 0.0);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "series.csv"));
    fs::remove_all(dir);
  }

  TEST_CASE("runs are deterministic and manifests verify") {
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    const SnapshotManifest ma = run(small_config(a));
    const SnapshotManifest mb = run(small_config(b));
    REQUIRE(ma.snapshots.size() == 4);  // 0, 8, 16, 20
    CHECK(ma.snapshots.back().step == 20);
    for (std::size_t i = 0; i < ma.snapshots.size(); ++i) CHECK(ma.snapshots[i].crc32 == mb.snapshots[i].crc32);
    CHECK(verify_manifest(ma, a));

    std::vector<char> bytes = slurp(a / ma.snapshots[1].file);
    bytes[64] ^= 0x10;
    spit(a / ma.snapshots[1].file, bytes);
    CHECK_FALSE(verify_manifest(ma, a));
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("run id follows the configuration") {
    const fs::path a = scratch("id");
    RunConfig c = small_config(a);
    c.steps = 0;
    const std::string id = run(c).run_id;
    c.pulse.amplitude = 0.5;
    CHECK(run(c).run_id != id);
    fs::remove_all(a);
  }

  TEST_CASE("non-finite fields are reported") {
    const LatticeGrid g{16, 16, 0.1};
    const RefractiveField vac = sample_medium({Homogeneous{1.0}, {}}, g);
    QubitField f(g);
    f.at(3, 3, 2) = std::nan("");
    Simulation sim(vac, f, {});
    CHECK_THROWS_WITH_AS(sim.advance(2), doctest::Contains("step 1"), Error);
  }

  TEST_CASE("vacuum pulse keeps its shape over five widths") {
    // Full width 200 lattice units, wide enough for lattice dispersion to stay small.
    const LatticeGrid g{1700, 4, 0.1};
    PulseSpec p;
    p.center_x = 250;
    p.width = 200;
    const PulseMeasure m = propagate_pulse(g, p, 5 * p.width);
    CHECK(m.shift > 0.0);
    CHECK(m.shift == doctest::Approx(5 * p.width).epsilon(0.01));
    CHECK(m.distortion <= 0.01);
  }

  TEST_CASE("desk-scale pulse distortion follows the lattice dispersion") {
    // Distortion at fixed travel grows like the cube of the wavenumber and
    // does not depend on delta.
    const LatticeGrid g{512, 4, 0.1};
    PulseSpec narrow;
    narrow.center_x = 60;
    narrow.width = 50;
    PulseSpec wide = narrow;
    wide.center_x = 120;
    wide.width = 100;
    const PulseMeasure a = propagate_pulse(g, narrow, 250);
    const PulseMeasure b = propagate_pulse(g, wide, 250);
    const PulseMeasure c = propagate_pulse({512, 4, 0.05}, narrow, 250);
    CHECK(a.distortion / b.distortion == doctest::Approx(8.0).epsilon(0.15));
    CHECK(c.distortion == doctest::Approx(a.distortion).epsilon(0.02));
    CHECK(a.distortion > 0.01);
  }
}
