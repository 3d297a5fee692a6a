#pragma once

#include "bqs/field.hpp"

namespace bqs {

// Discrete Fourier transform between the physical lattice and the dual
// frequency lattice, unitary per axis up to the cell-volume weight:
//
//   forward:  u_hat(xi_j) = prod_a (dx_a / sqrt(2 W_a)) * sum_m u(x_m) e^{-i xi_j . x_m}
//   inverse:  u(x_m)      = prod_a (1 / sqrt(2 W_a))    * sum_j u_hat(xi_j) e^{+i xi_j . x_m}
//
// With these factors Parseval reads  sum_j |u_hat|^2 = cell_volume * sum_m |u|^2
// and a pure mode e^{i xi_k . x} transforms to sqrt(measure) at xi_k.
// Spectral storage is ascending frequency per axis (Nyquist at index 0).

/// Physical -> spectral.  Throws SideMismatch if already spectral.
Field forward_transform(const Field& f);

/// Spectral -> physical.  Throws SideMismatch if already physical.
Field inverse_transform(const Field& f);

/// In-place components x modes form used by the solvers: transform each row
/// of `coeffs` (one component, flat lattice order) along every grid axis.
void forward_transform_rows(const SpectralGrid& grid, SpecMat& coeffs);
void inverse_transform_rows(const SpectralGrid& grid, SpecMat& coeffs);

}  // namespace bqs
