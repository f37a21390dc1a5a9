#include "qla/media.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "binary_io.hpp"

namespace qla {
namespace {

struct Sample {
  double n;
  double dx;
  double dy;
};

void check_index(double n, const char* what) {
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw Error(std::string(what) + " must be a finite refractive index >= 1");
  }
}

void check_fits(double cx, double cy, double radius, double padding, const LatticeGrid& g) {
  const double reach = radius + padding;
  if (cx - reach < 0.0 || cx + reach > g.nx - 1 || cy - reach < 0.0 || cy + reach > g.ny - 1) {
    throw Error("scatterer does not fit inside the " + std::to_string(g.nx) + "x" +
                std::to_string(g.ny) + " lattice with the required padding");
  }
}

void validate_profile(const Profile& p, const LatticeGrid& g) {
  if (const auto* h = std::get_if<Homogeneous>(&p)) {
    check_index(h->n, "homogeneous n");
  } else if (const auto* c = std::get_if<Cylinder>(&p)) {
    check_index(c->n_max, "cylinder n_max");
    if (!(c->diameter > 0.0)) throw Error("cylinder diameter must be positive");
    if (!(c->boundary_width > 0.0)) throw Error("cylinder boundary_width must be positive");
    check_fits(c->center_x, c->center_y, c->diameter / 2.0, c->boundary_width, g);
  } else if (const auto* k = std::get_if<Cone>(&p)) {
    check_index(k->n_max, "cone n_max");
    if (!(k->base_diameter > 0.0)) throw Error("cone base_diameter must be positive");
    if (k->edge_rounding < 0.0) throw Error("cone edge_rounding must be >= 0");
    check_fits(k->center_x, k->center_y, k->base_diameter / 2.0, std::max(k->edge_rounding, 1.0), g);
  }
}

// Radial profile value and dn/dr, chained to Cartesian derivatives.
Sample radial(double n_of_r, double dn_dr, double rx, double ry, double r) {
  if (r == 0.0) return {n_of_r, 0.0, 0.0};
  return {n_of_r, dn_dr * rx / r, dn_dr * ry / r};
}

Sample evaluate(const Profile& p, double x, double y) {
  if (const auto* h = std::get_if<Homogeneous>(&p)) return {h->n, 0.0, 0.0};

  if (const auto* c = std::get_if<Cylinder>(&p)) {
    const double rx = x - c->center_x;
    const double ry = y - c->center_y;
    const double r = std::hypot(rx, ry);
    const double u = (r - c->diameter / 2.0) / c->boundary_width;
    const double t = std::tanh(u);
    const double amp = c->n_max - 1.0;
    const double n = 1.0 + amp * (1.0 - t) / 2.0;
    const double dn_dr = -amp * (1.0 - t * t) / (2.0 * c->boundary_width);
    return radial(n, dn_dr, rx, ry, r);
  }

  const auto& k = std::get<Cone>(p);
  const double rx = x - k.center_x;
  const double ry = y - k.center_y;
  const double r = std::hypot(rx, ry);
  const double base = k.base_diameter / 2.0;
  const double slope = (k.n_max - 1.0) / base;
  if (k.edge_rounding > 0.0) {
    // softplus(base - r) keeps n >= 1 and has a tanh-shaped slope.
    const double rho = k.edge_rounding;
    const double u = (base - r) / rho;
    const double softplus = u > 30.0 ? u : std::log1p(std::exp(u));
    const double sigmoid = 0.5 * (1.0 + std::tanh(u / 2.0));
    return radial(1.0 + slope * rho * softplus, -slope * sigmoid, rx, ry, r);
  }
  if (r >= base) return {1.0, 0.0, 0.0};
  return radial(1.0 + slope * (base - r), -slope, rx, ry, r);
}

void allocate(RefractiveField& f, const LatticeGrid& g) {
  f.grid = g;
  for (int a = 0; a < 3; ++a) {
    f.n[a].assign(g.sites(), 1.0);
    f.dn_dx[a].assign(g.sites(), 0.0);
    f.dn_dy[a].assign(g.sites(), 0.0);
  }
}

}  // namespace

bool RefractiveField::is_vacuum_at(int x, int y, double tol) const {
  const std::size_t i = grid.site_index(x, y);
  for (int a = 0; a < 3; ++a) {
    if (std::abs(n[a][i] - 1.0) > tol) return false;
  }
  return true;
}

RefractiveField sample_medium(const MediumSpec& spec, const LatticeGrid& grid) {
  grid.validate();
  RefractiveField f;
  allocate(f, grid);
  for (int a = 0; a < 3; ++a) {
    const Profile& p = spec.profile_for(a);
    validate_profile(p, grid);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < grid.ny; ++y) {
      for (int x = 0; x < grid.nx; ++x) {
        const Sample s = evaluate(p, x, y);
        const std::size_t i = grid.site_index(x, y);
        f.n[a][i] = s.n;
        f.dn_dx[a][i] = s.dx;
        f.dn_dy[a][i] = s.dy;
      }
    }
  }
  return f;
}

RefractiveField raster_medium(const LatticeGrid& grid, int components, std::span<const double> values) {
  grid.validate();
  if (components != 1 && components != 3) throw Error("raster medium needs 1 or 3 components");
  if (values.size() != grid.sites() * static_cast<std::size_t>(components)) {
    throw Error("raster medium size does not match the lattice");
  }
  RefractiveField f;
  allocate(f, grid);
  for (int a = 0; a < 3; ++a) {
    const int src = components == 1 ? 0 : a;
    for (std::size_t i = 0; i < grid.sites(); ++i) {
      const double n = values[i * static_cast<std::size_t>(components) + static_cast<std::size_t>(src)];
      check_index(n, "raster index");
      f.n[a][i] = n;
    }
    for (int y = 0; y < grid.ny; ++y) {
      const int yp = (y + 1) % grid.ny;
      const int ym = (y + grid.ny - 1) % grid.ny;
      for (int x = 0; x < grid.nx; ++x) {
        const int xp = (x + 1) % grid.nx;
        const int xm = (x + grid.nx - 1) % grid.nx;
        const std::size_t i = grid.site_index(x, y);
        f.dn_dx[a][i] = 0.5 * (f.n[a][grid.site_index(xp, y)] - f.n[a][grid.site_index(xm, y)]);
        f.dn_dy[a][i] = 0.5 * (f.n[a][grid.site_index(x, yp)] - f.n[a][grid.site_index(x, ym)]);
      }
    }
  }
  return f;
}

RefractiveField read_raster_medium(const std::filesystem::path& path, double delta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open raster medium " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t header = 4 + 4 * 4;
  if (buf.size() < header || std::memcmp(buf.data(), "QLAN", 4) != 0) {
    throw Error("raster medium " + path.string() + ": bad header");
  }
  const auto version = detail::get_le<std::uint32_t>(buf.data() + 4);
  if (version != 1) throw Error("raster medium: unsupported version " + std::to_string(version));
  LatticeGrid grid{static_cast<int>(detail::get_le<std::uint32_t>(buf.data() + 8)),
                   static_cast<int>(detail::get_le<std::uint32_t>(buf.data() + 12)), delta};
  const auto components = static_cast<int>(detail::get_le<std::uint32_t>(buf.data() + 16));
  grid.validate();
  const std::size_t count = grid.sites() * static_cast<std::size_t>(components);
  if (buf.size() != header + count * sizeof(double)) {
    throw Error("raster medium " + path.string() + ": payload size mismatch");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = detail::get_le<double>(buf.data() + header + i * sizeof(double));
  }
  return raster_medium(grid, components, values);
}

void write_raster_medium(const std::filesystem::path& path, const LatticeGrid& grid, int components,
                         std::span<const double> values) {
  if (values.size() != grid.sites() * static_cast<std::size_t>(components)) {
    throw Error("raster medium size does not match the lattice");
  }
  std::vector<unsigned char> buf{'Q', 'L', 'A', 'N'};
  detail::put_le<std::uint32_t>(buf, 1);
  detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(grid.nx));
  detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(grid.ny));
  detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(components));
  for (double v : values) detail::put_le<double>(buf, v);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("cannot write raster medium " + path.string());
}

QubitField dyson_map(const Vec3Field& e, const Vec3Field& h, const RefractiveField& media) {
  const LatticeGrid& g = media.grid;
  if (e.size() != g.sites() || h.size() != g.sites()) {
    throw Error("dyson_map: field arrays do not match the lattice");
  }
  QubitField q(g);
  std::span<double> a = q.data();
  for (std::size_t i = 0; i < g.sites(); ++i) {
    double* s = a.data() + i * kComponents;
    for (int c = 0; c < 3; ++c) {
      s[c] = media.n[c][i] * e[i][c];
      s[c + 3] = h[i][c];
    }
  }
  return q;
}

PhysicalFields inverse_dyson(const QubitField& field, const RefractiveField& media) {
  const LatticeGrid& g = media.grid;
  if (!(field.grid() == g)) throw Error("inverse_dyson: field and media grids differ");
  PhysicalFields out{Vec3Field(g.sites()), Vec3Field(g.sites())};
  std::span<const double> a = field.data();
  for (std::size_t i = 0; i < g.sites(); ++i) {
    const double* s = a.data() + i * kComponents;
    for (int c = 0; c < 3; ++c) {
      out.e[i][c] = s[c] / media.n[c][i];
      out.h[i][c] = s[c + 3];
    }
  }
  return out;
}

}  // namespace qla
