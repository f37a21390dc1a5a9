#include "qla/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace qla {

ComponentSet::ComponentSet(std::initializer_list<int> components) {
  for (int c : components) {
    if (c < 0 || c >= kComponents) {
      throw Error("component index out of range: " + std::to_string(c));
    }
    bits_.set(static_cast<std::size_t>(c));
  }
}

std::vector<int> ComponentSet::members() const {
  std::vector<int> out;
  for (int c = 0; c < kComponents; ++c) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

void LatticeGrid::validate() const {
  if (nx < 4 || ny < 4) {
    throw Error("lattice needs at least 4 sites per axis, got " + std::to_string(nx) + "x" +
                std::to_string(ny));
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error("lattice delta must be positive and finite");
  }
}

QubitField::QubitField(const LatticeGrid& grid) : grid_(grid) {
  grid_.validate();
  amp_.assign(grid_.sites() * kComponents, 0.0);
}

SiteVector QubitField::site(int x, int y) const {
  SiteVector v;
  const double* p = &amp_[offset(x, y, 0)];
  std::copy(p, p + kComponents, v.begin());
  return v;
}

void QubitField::set_site(int x, int y, const SiteVector& v) {
  std::copy(v.begin(), v.end(), &amp_[offset(x, y, 0)]);
}

double QubitField::norm_squared() const {
  const int ny = grid_.ny;
  const std::size_t row = static_cast<std::size_t>(grid_.nx) * kComponents;
  std::vector<double> partial(static_cast<std::size_t>(ny), 0.0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < ny; ++y) {
    const double* p = amp_.data() + static_cast<std::size_t>(y) * row;
    double s = 0.0;
    for (std::size_t i = 0; i < row; ++i) s += p[i] * p[i];
    partial[static_cast<std::size_t>(y)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

bool QubitField::all_finite() const {
  return std::all_of(amp_.begin(), amp_.end(), [](double v) { return std::isfinite(v); });
}

QubitField new_field(const LatticeGrid& grid, const std::function<SiteVector(int, int)>& fill) {
  QubitField field(grid);
  for (int y = 0; y < grid.ny; ++y) {
    for (int x = 0; x < grid.nx; ++x) {
      const SiteVector v = fill(x, y);
      for (double a : v) {
        if (!std::isfinite(a)) {
          throw Error("non-finite fill value at site (" + std::to_string(x) + ", " +
                      std::to_string(y) + ")");
        }
      }
      field.set_site(x, y, v);
    }
  }
  return field;
}

void shift_in_place(QubitField& field, const ComponentSet& components, Axis axis, int direction) {
  if (components.empty()) throw Error("shift needs a non-empty component set");
  if (direction != 1 && direction != -1) throw Error("shift direction must be +1 or -1");

  const LatticeGrid& g = field.grid();
  const std::vector<int> comps = components.members();
  std::span<double> a = field.data();
  const std::size_t stride =
      axis == Axis::x ? kComponents : static_cast<std::size_t>(g.nx) * kComponents;
  const int length = axis == Axis::x ? g.nx : g.ny;
  const int lines = axis == Axis::x ? g.ny : g.nx;
  const std::size_t line_step =
      axis == Axis::x ? static_cast<std::size_t>(g.nx) * kComponents : kComponents;

  // Each line (row for x, column for y) is an independent cyclic rotation.
#pragma omp parallel for schedule(static)
  for (int line = 0; line < lines; ++line) {
    double* base = a.data() + static_cast<std::size_t>(line) * line_step;
    for (int c : comps) {
      double* p = base + c;
      const std::size_t last = static_cast<std::size_t>(length - 1) * stride;
      if (direction == 1) {
        const double wrap = p[last];
        for (std::size_t i = last; i > 0; i -= stride) p[i] = p[i - stride];
        p[0] = wrap;
      } else {
        const double wrap = p[0];
        for (std::size_t i = 0; i < last; i += stride) p[i] = p[i + stride];
        p[last] = wrap;
      }
    }
  }
}

QubitField shift(const QubitField& field, const ComponentSet& components, Axis axis, int direction) {
  QubitField out = field;
  shift_in_place(out, components, axis, direction);
  return out;
}

QubitField pointwise_apply(const QubitField& field,
                           const std::function<SiteMatrix(int, int)>& site_matrix) {
  const LatticeGrid& g = field.grid();
  QubitField out(g);
  for (int y = 0; y < g.ny; ++y) {
    for (int x = 0; x < g.nx; ++x) {
      const SiteMatrix m = site_matrix(x, y);
      const SiteVector v = field.site(x, y);
      SiteVector r{};
      for (int i = 0; i < kComponents; ++i) {
        double s = 0.0;
        for (int j = 0; j < kComponents; ++j) s += m[i][j] * v[j];
        r[i] = s;
      }
      out.set_site(x, y, r);
    }
  }
  return out;
}

SiteMatrix identity_matrix() {
  SiteMatrix m{};
  for (int i = 0; i < kComponents; ++i) m[i][i] = 1.0;
  return m;
}

SiteMatrix transpose(const SiteMatrix& m) {
  SiteMatrix t{};
  for (int i = 0; i < kComponents; ++i) {
    for (int j = 0; j < kComponents; ++j) t[i][j] = m[j][i];
  }
  return t;
}

}  // namespace qla
