// media.hpp: refractive-index fields and the Dyson map between (E, H) and
// the qubit field.
//
// Built-in profiles are sampled analytically (values and derivatives); raster
// media read from disk get periodic central-difference derivatives.
// Derivatives are stored per lattice unit.

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qla/lattice.hpp"

namespace qla {

struct Homogeneous {
  double n = 1.0;
};

/// n(r) = 1 + (n_max - 1) (1 - tanh((r - R) / w)) / 2 with R = diameter / 2.
struct Cylinder {
  double center_x = 0.0;
  double center_y = 0.0;
  double diameter = 0.0;
  double n_max = 1.0;
  double boundary_width = 1.0;
};

/// Radially linear from 1 at the base edge to n_max at the apex. A positive
/// edge_rounding replaces the kink at the base edge by a softplus of that
/// width, whose slope follows a tanh step.
struct Cone {
  double center_x = 0.0;
  double center_y = 0.0;
  double base_diameter = 0.0;
  double n_max = 1.0;
  double edge_rounding = 0.0;
};

using Profile = std::variant<Homogeneous, Cylinder, Cone>;

struct MediumSpec {
  Profile profile = Homogeneous{};
  /// Optional replacement profile for n_x, n_y, n_z respectively.
  std::array<std::optional<Profile>, 3> per_axis{};

  const Profile& profile_for(int axis) const {
    return per_axis[static_cast<std::size_t>(axis)] ? *per_axis[static_cast<std::size_t>(axis)]
                                                    : profile;
  }
};

struct RefractiveField {
  LatticeGrid grid{};
  /// Index 0, 1, 2 -> n_x, n_y, n_z; one value per site, row-major.
  std::array<std::vector<double>, 3> n;
  std::array<std::vector<double>, 3> dn_dx;
  std::array<std::vector<double>, 3> dn_dy;

  double index(int axis, int x, int y) const {
    return n[static_cast<std::size_t>(axis)][grid.site_index(x, y)];
  }
  bool is_vacuum_at(int x, int y, double tol) const;
};

/// Samples a built-in profile. Throws qla::Error when the scatterer does not
/// fit inside the grid with at least one boundary width of padding.
RefractiveField sample_medium(const MediumSpec& spec, const LatticeGrid& grid);

/// Raster medium: per-site indices (one shared or three per-axis values),
/// derivatives by periodic central differences.
RefractiveField raster_medium(const LatticeGrid& grid, int components, std::span<const double> values);

/// Raster file layout (little-endian): "QLAN", u32 version = 1, u32 nx,
/// u32 ny, u32 components (1 or 3), then nx*ny*components float64 values,
/// row-major with the component index fastest.
RefractiveField read_raster_medium(const std::filesystem::path& path, double delta);
void write_raster_medium(const std::filesystem::path& path, const LatticeGrid& grid, int components,
                         std::span<const double> values);

using Vec3Field = std::vector<std::array<double, 3>>;

struct PhysicalFields {
  Vec3Field e;
  Vec3Field h;
};

/// q_i = n_i E_i for i < 3, (q3, q4, q5) = H (mu0 = 1).
QubitField dyson_map(const Vec3Field& e, const Vec3Field& h, const RefractiveField& media);
PhysicalFields inverse_dyson(const QubitField& field, const RefractiveField& media);

}  // namespace qla
