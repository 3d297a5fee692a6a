#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "bqs/types.hpp"

namespace bqs {

// Uniform periodic lattice on the box [-W_a, W_a) per axis.  Physical
// samples sit at x_m = -W + m * (2W/N); the dual lattice carries the
// frequencies xi_j = pi j / W for j = -N/2 .. N/2-1, stored ascending so
// index 0 is the (unpaired) Nyquist mode and index N/2 is xi = 0.
class SpectralGrid {
 public:
  SpectralGrid(std::vector<int> points, std::vector<Real> half_widths);

  int n_dims() const { return static_cast<int>(points_.size()); }
  const std::vector<int>& points() const { return points_; }
  const std::vector<Real>& half_widths() const { return half_widths_; }

  std::int64_t total_points() const { return total_; }
  Real cell_volume() const { return cell_volume_; }
  /// Box measure prod_a (2 W_a).
  Real measure() const { return measure_; }

  Real spacing(int axis) const { return 2.0 * half_widths_[axis] / points_[axis]; }
  Real coord(int axis, int index) const {
    return -half_widths_[axis] + spacing(axis) * index;
  }
  /// Ascending frequencies of one axis.
  const Eigen::VectorXd& freqs(int axis) const { return freqs_[axis]; }
  /// Signed integer mode number of a storage index: j = index - N/2.
  int mode_number(int axis, int index) const { return index - points_[axis] / 2; }

  /// Row-major stride of an axis (last axis fastest).
  std::int64_t stride(int axis) const { return strides_[axis]; }
  /// Decompose a flat index into per-axis indices.
  void unflatten(std::int64_t flat, int* idx) const;
  /// Frequency vector of a flat mode index.
  void mode_freq(std::int64_t flat, Eigen::VectorXd& xi) const;

  bool same_lattice(const SpectralGrid& other) const;

 private:
  std::vector<int> points_;
  std::vector<Real> half_widths_;
  std::vector<Eigen::VectorXd> freqs_;
  std::vector<std::int64_t> strides_;
  std::int64_t total_ = 0;
  Real measure_ = 0.0;
  Real cell_volume_ = 0.0;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Cubic lattice: same point count and half width on every axis.
GridPtr make_grid(int n_dims, int points, Real half_width);
/// General per-axis lattice.
GridPtr make_grid(std::vector<int> points, std::vector<Real> half_widths);

}  // namespace bqs
