#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bqs/grid.hpp"
#include "bqs/types.hpp"

namespace bqs {

enum class Side { Physical, Spectral };

// A multi-component complex field on a SpectralGrid.  Samples are stored
// component-major: component c occupies values[c*P .. (c+1)*P) in row-major
// lattice order, where P = grid->total_points().  On the spectral side the
// lattice order is ascending frequency per axis (Nyquist first).
struct Field {
  GridPtr grid;
  int components = 1;
  Side side = Side::Physical;
  Eigen::ArrayXcd values;

  std::int64_t points() const { return grid->total_points(); }

  Complex* component(int c) { return values.data() + c * points(); }
  const Complex* component(int c) const { return values.data() + c * points(); }

  Complex& at(int c, std::int64_t flat) { return values[c * points() + flat]; }
  Complex at(int c, std::int64_t flat) const { return values[c * points() + flat]; }

  /// values viewed as a (components x points) row-major matrix.
  Eigen::Map<SpecMat> matrix() {
    return {values.data(), components, static_cast<Eigen::Index>(points())};
  }
  Eigen::Map<const SpecMat> matrix() const {
    return {values.data(), components, static_cast<Eigen::Index>(points())};
  }
};

Field make_field(GridPtr grid, int components = 1, Side side = Side::Physical);

/// Throwing checks for the common preconditions.
void require_side(const Field& f, Side side, const char* who);
void require_same_lattice(const Field& a, const Field& b, const char* who);

/// Pointwise linear combinations (sides, lattices and component counts must
/// match).
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(Real scale, const Field& f);

/// True when every sample is finite.
bool all_finite(const Field& f);

// --- Initial-data factories (physical side) -------------------------------

/// amplitude * exp(-|x - center|^2 / (2 width^2)) in every component.
Field gaussian_field(GridPtr grid, int components, Real amplitude, Real width,
                     const std::vector<Real>& center = {});

/// amplitude * cos(xi_k . x), a single real lattice mode; k holds one signed
/// integer mode number per axis (k = 0 gives the constant field).
Field mode_field(GridPtr grid, int components, const std::vector<int>& k,
                 Real amplitude);

/// Evaluate fn(x) on the lattice; fn fills one value per component.
Field sampled_field(GridPtr grid, int components,
                    const std::function<void(const Eigen::VectorXd&, Complex*)>& fn);

}  // namespace bqs
