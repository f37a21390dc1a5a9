#include "qla/driver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "qla/snapshot.hpp"

namespace qla {
namespace {

PlanOptions plan_options(const RunConfig& c) {
  PlanOptions o;
  o.mode = c.potential_mode;
  o.form = c.potential_form;
  return o;
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string snapshot_name(long step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%09ld.qlaf", step);
  return buf;
}

}  // namespace

double pulse_profile(const PulseSpec& pulse, double x) {
  const double sigma = pulse.width / 4.3;
  const double u = (x - pulse.center_x) / sigma;
  return std::exp(-0.5 * u * u);
}

QubitField init_pulse(const PulseSpec& pulse, const RefractiveField& media) {
  const LatticeGrid& g = media.grid;
  if (!(pulse.width > 0.0)) throw Error("pulse width must be positive");
  for (int x = 0; x < g.nx; ++x) {
    if (pulse_profile(pulse, x) <= 1e-4) continue;
    for (int y = 0; y < g.ny; ++y) {
      if (!media.is_vacuum_at(x, y, 1e-4)) {
        throw Error("pulse overlaps the dielectric at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
      }
    }
  }
  const double a = pulse.amplitude;
  return new_field(g, [&](int x, int) {
    const double v = a * pulse_profile(pulse, x);
    SiteVector q{};
    if (pulse.polarization == Polarization::Ez_By) {
      q[2] = -v;
      q[4] = v;
    } else {
      q[1] = v;
      q[5] = v;
    }
    return q;
  });
}

RefractiveField build_medium(const RunConfig& config) {
  if (config.raster_path) {
    RefractiveField f = read_raster_medium(*config.raster_path, config.grid.delta);
    if (f.grid.nx != config.grid.nx || f.grid.ny != config.grid.ny) {
      throw Error("raster medium is " + std::to_string(f.grid.nx) + "x" + std::to_string(f.grid.ny) +
                  " but the grid is " + std::to_string(config.grid.nx) + "x" + std::to_string(config.grid.ny));
    }
    return f;
  }
  return sample_medium(config.medium, config.grid);
}

Simulation::Simulation(const RunConfig& config)
    : media_(build_medium(config)), plan_(media_, plan_options(config)), field_(init_pulse(config.pulse, media_)) {}

Simulation::Simulation(RefractiveField media, const QubitField& initial, PlanOptions options)
    : media_(std::move(media)), plan_(media_, options), field_(initial) {
  if (!(field_.grid() == media_.grid)) throw Error("initial field and medium grids differ");
}

void Simulation::advance(long n) {
  for (long i = 0; i < n; ++i) {
    qla::advance(field_, plan_, 1);
    ++step_;
    if (!field_.all_finite()) throw Error("non-finite field at step " + std::to_string(step_));
  }
}

SnapshotManifest run(const RunConfig& config) {
  config.validate();
  Simulation sim(config);
  std::filesystem::create_directories(config.output_dir);

  SnapshotManifest m;
  m.config_json = config_to_json(config);
  m.run_id = hex32(crc32_of(m.config_json.data(), m.config_json.size()));
  m.series_file = "series.csv";

  SeriesRecorder series(sim.media(), config.snapshot_interval);
  auto checkpoint = [&](long step) {
    if (!series.wants(step, config.steps)) return;
    series.record(step, sim.field());
    SnapshotEntry e;
    e.step = step;
    e.file = snapshot_name(step);
    e.crc32 = write_snapshot(sim.field(), static_cast<std::uint64_t>(step), config.output_dir / e.file);
    m.snapshots.push_back(e);
  };

  checkpoint(0);
  while (sim.step_count() < config.steps) {
    sim.advance(1);
    checkpoint(sim.step_count());
  }
  m.max_relative_drift = series.max_relative_drift();
  series.write_csv(config.output_dir / m.series_file);
  write_manifest(m, config.output_dir / "manifest.json");
  return m;
}

void write_manifest(const SnapshotManifest& m, const std::filesystem::path& path) {
  nlohmann::json j;
  j["run_id"] = m.run_id;
  j["config"] = nlohmann::json::parse(m.config_json);
  j["series"] = m.series_file;
  j["max_relative_drift"] = m.max_relative_drift;
  j["snapshots"] = nlohmann::json::array();
  for (const auto& s : m.snapshots) {
    j["snapshots"].push_back({{"step", s.step}, {"file", s.file}, {"crc32", hex32(s.crc32)}});
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("cannot write manifest " + path.string());
}

bool verify_manifest(const SnapshotManifest& m, const std::filesystem::path& output_dir) {
  for (const auto& s : m.snapshots) {
    try {
      read_snapshot(output_dir / s.file);
    } catch (const Error&) {
      return false;
    }
    if (stored_crc(output_dir / s.file) != s.crc32) return false;
  }
  return true;
}

}  // namespace qla
