// lattice.hpp: periodic 2D lattice carrying the six-component qubit field.
//
// Component order per site is (n_x E_x, n_y E_y, n_z E_z, H_x, H_y, H_z) with
// mu0 = 1. Storage is row-major over sites with the component index varying
// fastest, so a site is six contiguous doubles and a lattice row is
// 6 * nx contiguous doubles.

#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qla {

inline constexpr int kComponents = 6;

using SiteVector = std::array<double, kComponents>;
using SiteMatrix = std::array<std::array<double, kComponents>, kComponents>;

enum class Axis { x, y };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subset of the six qubit components, e.g. ComponentSet{1, 4}.
class ComponentSet {
 public:
  ComponentSet() = default;
  ComponentSet(std::initializer_list<int> components);

  bool contains(int c) const { return bits_.test(static_cast<std::size_t>(c)); }
  bool empty() const { return bits_.none(); }
  std::vector<int> members() const;

 private:
  std::bitset<kComponents> bits_;
};

struct LatticeGrid {
  int nx = 0;
  int ny = 0;
  double delta = 0.0;

  /// Throws qla::Error unless nx, ny >= 4 and delta > 0.
  void validate() const;

  std::size_t sites() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t site_index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(x);
  }

  friend bool operator==(const LatticeGrid&, const LatticeGrid&) = default;
};

class QubitField {
 public:
  QubitField() = default;
  /// Zero field on a validated grid.
  explicit QubitField(const LatticeGrid& grid);

  const LatticeGrid& grid() const { return grid_; }

  double& at(int x, int y, int c) { return amp_[offset(x, y, c)]; }
  double at(int x, int y, int c) const { return amp_[offset(x, y, c)]; }

  SiteVector site(int x, int y) const;
  void set_site(int x, int y, const SiteVector& v);

  std::span<double> data() { return amp_; }
  std::span<const double> data() const { return amp_; }

  /// Sum of squares over all amplitudes. Rows are reduced in a fixed order
  /// so the result does not depend on the thread count.
  double norm_squared() const;
  bool all_finite() const;

  friend bool operator==(const QubitField&, const QubitField&) = default;

 private:
  std::size_t offset(int x, int y, int c) const {
    return grid_.site_index(x, y) * kComponents + static_cast<std::size_t>(c);
  }

  LatticeGrid grid_{};
  std::vector<double> amp_;
};

/// amplitudes[y][x][c] = fill(x, y)[c]. Rejects non-finite fill values.
QubitField new_field(const LatticeGrid& grid, const std::function<SiteVector(int, int)>& fill);

/// Cyclic displacement of the listed components by one lattice unit.
/// direction +1 moves the content at x to x + 1 (mod nx); -1 the reverse.
QubitField shift(const QubitField& field, const ComponentSet& components, Axis axis, int direction);
void shift_in_place(QubitField& field, const ComponentSet& components, Axis axis, int direction);

/// Replaces the 6-vector at every site by site_matrix(x, y) * vector.
QubitField pointwise_apply(const QubitField& field,
                           const std::function<SiteMatrix(int, int)>& site_matrix);

SiteMatrix identity_matrix();
SiteMatrix transpose(const SiteMatrix& m);

}  // namespace qla
