// diagnostics.hpp: energy, divergence constraints and time series.
#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "qla/lattice.hpp"
#include "qla/media.hpp"

namespace qla {

/// (1 / (nx ny)) * sum over sites and components of q_c^2.
double energy(const QubitField& field);

struct DivergenceReport {
  double max_abs = 0.0;  // normalized by the reference amplitude
  int x = 0;
  int y = 0;
};

/// Peak |B| = max over sites of |(q3, q4, q5)|.
double peak_b(const QubitField& field);
/// Peak |D| with D_i = n_i q_i.
double peak_d(const QubitField& field, const RefractiveField& media);

/// Central-difference dq3/dx + dq4/dy per lattice unit, divided by b0.
/// Throws when b0 <= 0.
DivergenceReport div_b(const QubitField& field, double b0);
/// Central-difference dD_x/dx + dD_y/dy, divided by d0.
DivergenceReport div_d(const QubitField& field, const RefractiveField& media, double d0);

struct EnergyRecord {
  long step = 0;
  double energy = 0.0;
  double relative_drift = 0.0;
};

struct SeriesRecord {
  EnergyRecord energy;
  DivergenceReport div_b;
  DivergenceReport div_d;
};

/// Collects records every `cadence` steps and at the last step (cadence 0:
/// first and last only).
/// Normalizers are fixed by the first record.
class SeriesRecorder {
 public:
  SeriesRecorder(const RefractiveField& media, int cadence);

  /// True when `step` of a run with `total_steps` steps should be recorded.
  bool wants(long step, long total_steps) const;
  void record(long step, const QubitField& field);

  const std::vector<SeriesRecord>& records() const { return records_; }
  double max_relative_drift() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  const RefractiveField* media_;
  int cadence_;
  double e0_ = 0.0;
  double b0_ = 0.0;
  double d0_ = 0.0;
  std::vector<SeriesRecord> records_;
};

}  // namespace qla
