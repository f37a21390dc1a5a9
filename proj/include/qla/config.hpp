// config.hpp: run configuration, read from a JSON document.
//
// {
//   "grid":   {"nx": 512, "ny": 512, "delta": 0.1},
//   "medium": {"type": "cylinder", "center": [256, 256], "diameter": 100,
//              "n_max": 3, "boundary_width": 5},
//   "pulse":  {"polarization": "Ez_By", "center_x": 100, "width": 50, "amplitude": 1},
//   "steps": 1000, "snapshot_interval": 100,
//   "potential_mode": "halfway_and_end", "potential_form": "balanced",
//   "output_dir": "out", "seed": 0
// }
//
// Medium types: homogeneous {n}, cylinder {center, diameter, n_max,
// boundary_width}, cone {center, base_diameter, n_max, edge_rounding},
// raster {path}. A built-in medium may carry "per_axis": {"n_x": {...},
// "n_y": {...}, "n_z": {...}} with full profile objects that replace the
// shared profile for that index component. Unknown keys are errors.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "qla/evolution.hpp"
#include "qla/lattice.hpp"
#include "qla/media.hpp"

namespace qla {

enum class Polarization { Ez_By, Ey_Bz };

struct PulseSpec {
  Polarization polarization = Polarization::Ez_By;
  double center_x = 100.0;
  /// Full width in lattice units; sigma = width / 4.3.
  double width = 50.0;
  double amplitude = 1.0;
};

struct RunConfig {
  LatticeGrid grid{512, 512, 0.1};
  MediumSpec medium{Cylinder{256.0, 256.0, 100.0, 3.0, 5.0}, {}};
  /// Set for raster media; resolved against the config file's directory.
  std::optional<std::filesystem::path> raster_path;
  PulseSpec pulse;
  long steps = 0;
  int snapshot_interval = 0;
  PotentialMode potential_mode = PotentialMode::halfway_and_end;
  PotentialForm potential_form = PotentialForm::balanced;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;

  /// Range checks that do not need the medium.
  void validate() const;
};

/// Parses a JSON document. Relative raster paths are resolved against base_dir.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON (sorted keys, every field present); parse_config of the
/// result gives back the same configuration.
std::string config_to_json(const RunConfig& config);

const char* to_string(Polarization p);
const char* to_string(PotentialMode m);
const char* to_string(PotentialForm f);

}  // namespace qla
