// driver.hpp: pulse initialization and the run loop.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qla/config.hpp"
#include "qla/diagnostics.hpp"
#include "qla/evolution.hpp"
#include "qla/media.hpp"

namespace qla {

/// Gaussian profile g(x) = exp(-(x - x0)^2 / (2 sigma^2)), sigma = width / 4.3.
double pulse_profile(const PulseSpec& pulse, double x);

/// Ez_By: q2 = -A g, q4 = +A g (moves toward +x). Ey_Bz: q1 = q5 = +A g.
/// Uniform in y. Throws when the pulse (g > 1e-4) overlaps non-vacuum sites.
QubitField init_pulse(const PulseSpec& pulse, const RefractiveField& media);

/// Samples (or reads) the medium a config describes.
RefractiveField build_medium(const RunConfig& config);

/// Medium, plan and field of one run.
class Simulation {
 public:
  explicit Simulation(const RunConfig& config);
  Simulation(RefractiveField media, const QubitField& initial, PlanOptions options);

  const RefractiveField& media() const { return media_; }
  const EvolutionPlan& plan() const { return plan_; }
  const QubitField& field() const { return field_; }
  long step_count() const { return step_; }

  /// Advances n steps. Throws with the offending step number if the field
  /// stops being finite.
  void advance(long n);

 private:
  RefractiveField media_;
  EvolutionPlan plan_;
  QubitField field_;
  long step_ = 0;
};

struct SnapshotEntry {
  long step = 0;
  std::string file;  // relative to the output directory
  std::uint32_t crc32 = 0;
};

struct SnapshotManifest {
  std::string run_id;
  std::string config_json;
  std::vector<SnapshotEntry> snapshots;
  std::string series_file;
  double max_relative_drift = 0.0;
};

/// Runs the configured experiment, writing snapshots, series.csv and
/// manifest.json into config.output_dir.
SnapshotManifest run(const RunConfig& config);

void write_manifest(const SnapshotManifest& manifest, const std::filesystem::path& path);

/// Re-reads every listed snapshot and compares checksums.
bool verify_manifest(const SnapshotManifest& manifest, const std::filesystem::path& output_dir);

}  // namespace qla
