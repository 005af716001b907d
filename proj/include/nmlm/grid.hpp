#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nmlm/moment_state.hpp"

namespace nmlm {

/// Nodes x_0 < x_1 < ... < x_N of a 1-D mesh; cell i is [x_i, x_{i+1}].
class Grid1D {
 public:
  explicit Grid1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw std::invalid_argument("Grid1D: need at least one cell");
    widths_.resize(nodes_.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      widths_[i] = nodes_[i + 1] - nodes_[i];
      if (!(widths_[i] > 0.0)) throw std::invalid_argument("Grid1D: nodes must be strictly increasing");
    }
  }

  static Grid1D uniform(double length, int cells) {
    if (cells < 1 || !(length > 0.0)) throw std::invalid_argument("Grid1D::uniform: bad length or cell count");
    std::vector<double> nodes(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) nodes[static_cast<std::size_t>(i)] = length * i / cells;
    return Grid1D(std::move(nodes));
  }

  int cells() const { return static_cast<int>(widths_.size()); }
  double width(int i) const { return widths_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& widths() const { return widths_; }
  double length() const { return nodes_.back() - nodes_.front(); }
  double center(int i) const {
    return 0.5 * (nodes_[static_cast<std::size_t>(i)] + nodes_[static_cast<std::size_t>(i) + 1]);
  }
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> widths_;
};

/// All cells of one level, sharing the same order.
struct Field {
  int order = 2;
  std::vector<MomentState> cells;

  int size() const { return static_cast<int>(cells.size()); }
  MomentState& operator[](int i) { return cells[static_cast<std::size_t>(i)]; }
  const MomentState& operator[](int i) const { return cells[static_cast<std::size_t>(i)]; }

  static Field uniform(int order, int n, double rho, const Vec3& u, double theta) {
    Field f;
    f.order = order;
    f.cells.assign(static_cast<std::size_t>(n), MomentState::maxwellian(order, rho, u, theta));
    return f;
  }
};

inline double total_mass(const Field& field, const Grid1D& grid) {
  double m = 0.0;
  for (int i = 0; i < field.size(); ++i) m += field[i].rho() * grid.width(i);
  return m;
}

/// Rescales every cell so the total mass equals target_mass; velocities and
/// temperatures are left alone.
inline void mass_correction(Field& field, const Grid1D& grid, double target_mass) {
  const double current = total_mass(field, grid);
  if (!(current > 0.0)) throw PositivityError("mass_correction: non-positive total mass");
  const double scale = target_mass / current;
  if (scale == 1.0) return;
  for (auto& cell : field.cells)
    for (auto& c : cell.coeffs) c *= scale;
}

}  // namespace nmlm
