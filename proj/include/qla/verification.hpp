// verification.hpp: the property checks behind `qla verify`.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qla/lattice.hpp"
#include "qla/media.hpp"

namespace qla {

struct CheckResult {
  std::string name;
  double value = 0.0;
  std::string requirement;  // human-readable, e.g. "<= 1e-14"
  bool passed = false;
  /// Reported but not counted toward the exit status.
  bool informational = false;
};

/// Centered-difference right-hand side of the 2D Maxwell system in Q
/// variables, with physical spacing h (grid.delta for unit-delta lattices).
QubitField maxwell_rhs(const QubitField& q, const RefractiveField& media, double h);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::vector<CheckResult> run_verification_suite(std::uint64_t seed = 20240917);

}  // namespace qla
