#include "qla/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace qla {
namespace {

// Rows are summed separately and then added in row order, so the result
// never depends on how rows are split across threads.
template <typename F>
double ordered_sum(const LatticeGrid& g, F&& site_value) {
  std::vector<double> rows(static_cast<std::size_t>(g.ny), 0.0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < g.ny; ++y) {
    double s = 0.0;
    for (int x = 0; x < g.nx; ++x) s += site_value(x, y);
    rows[static_cast<std::size_t>(y)] = s;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

template <typename F>
DivergenceReport divergence(const LatticeGrid& g, double norm, F&& fx_fy) {
  if (!(norm > 0.0)) throw Error("divergence normalizer must be positive (zero initial field?)");
  DivergenceReport rep;
  rep.max_abs = -1.0;
  for (int y = 0; y < g.ny; ++y) {
    const int yp = (y + 1) % g.ny;
    const int ym = (y + g.ny - 1) % g.ny;
    for (int x = 0; x < g.nx; ++x) {
      const int xp = (x + 1) % g.nx;
      const int xm = (x + g.nx - 1) % g.nx;
      const double div = 0.5 * (fx_fy(xp, y)[0] - fx_fy(xm, y)[0]) + 0.5 * (fx_fy(x, yp)[1] - fx_fy(x, ym)[1]);
      const double v = std::abs(div) / norm;
      if (v > rep.max_abs) {
        rep.max_abs = v;
        rep.x = x;
        rep.y = y;
      }
    }
  }
  return rep;
}

}  // namespace

double energy(const QubitField& field) {
  const LatticeGrid& g = field.grid();
  const double total = ordered_sum(g, [&](int x, int y) {
    double s = 0.0;
    for (int c = 0; c < kComponents; ++c) s += field.at(x, y, c) * field.at(x, y, c);
    return s;
  });
  return total / static_cast<double>(g.sites());
}

double peak_b(const QubitField& field) {
  double m = 0.0;
  const LatticeGrid& g = field.grid();
  for (int y = 0; y < g.ny; ++y) {
    for (int x = 0; x < g.nx; ++x) {
      m = std::max(m, std::hypot(field.at(x, y, 3), field.at(x, y, 4), field.at(x, y, 5)));
    }
  }
  return m;
}

double peak_d(const QubitField& field, const RefractiveField& media) {
  double m = 0.0;
  const LatticeGrid& g = field.grid();
  for (int y = 0; y < g.ny; ++y) {
    for (int x = 0; x < g.nx; ++x) {
      m = std::max(m, std::hypot(media.index(0, x, y) * field.at(x, y, 0), media.index(1, x, y) * field.at(x, y, 1),
                                 media.index(2, x, y) * field.at(x, y, 2)));
    }
  }
  return m;
}

DivergenceReport div_b(const QubitField& field, double b0) {
  return divergence(field.grid(), b0, [&](int x, int y) {
    return std::array<double, 2>{field.at(x, y, 3), field.at(x, y, 4)};
  });
}

DivergenceReport div_d(const QubitField& field, const RefractiveField& media, double d0) {
  if (!(field.grid() == media.grid)) throw Error("div_d: field and media grids differ");
  return divergence(field.grid(), d0, [&](int x, int y) {
    return std::array<double, 2>{media.index(0, x, y) * field.at(x, y, 0), media.index(1, x, y) * field.at(x, y, 1)};
  });
}

SeriesRecorder::SeriesRecorder(const RefractiveField& media, int cadence) : media_(&media), cadence_(cadence) {
  if (cadence < 0) throw Error("snapshot cadence must be >= 0");
}

bool SeriesRecorder::wants(long step, long total_steps) const {
  if (cadence_ == 0) return step == 0 || step == total_steps;
  return step % cadence_ == 0 || step == total_steps;
}

void SeriesRecorder::record(long step, const QubitField& field) {
  SeriesRecord r;
  r.energy.step = step;
  r.energy.energy = energy(field);
  if (records_.empty()) {
    e0_ = r.energy.energy;
    b0_ = peak_b(field);
    d0_ = peak_d(field, *media_);
  }
  r.energy.relative_drift = e0_ > 0.0 ? (r.energy.energy - e0_) / e0_ : 0.0;
  // A polarization without B (or D) at t = 0 has nothing to normalize by.
  if (b0_ > 0.0) r.div_b = div_b(field, b0_);
  if (d0_ > 0.0) r.div_d = div_d(field, *media_, d0_);
  records_.push_back(r);
}

double SeriesRecorder::max_relative_drift() const {
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, std::abs(r.energy.relative_drift));
  return m;
}

void SeriesRecorder::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "step,energy,relative_drift,max_div_b,max_div_d\n";
  char line[160];
  for (const auto& r : records_) {
    std::snprintf(line, sizeof line, "%ld,%.17g,%.17g,%.17g,%.17g\n", r.energy.step, r.energy.energy,
                  r.energy.relative_drift, r.div_b.max_abs, r.div_d.max_abs);
    out << line;
  }
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace qla
