#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace bqs {

using Real = double;
using Complex = std::complex<Real>;

// Spectral coefficients of a multi-component field: one row per component,
// one column per lattice mode (modes in flat ascending-frequency order).
// Row-major so that a component's coefficients are contiguous, matching the
// component-major storage of Field::values.
using SpecMat =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace bqs
