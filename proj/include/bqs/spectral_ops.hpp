#pragma once

#include <functional>

#include "bqs/field.hpp"

namespace bqs {

/// Multiply every component of a spectral field by mul(xi), mode by mode.
Field apply_mode_multiplier(const Field& f,
                            const std::function<Complex(const Eigen::VectorXd&)>& mul);

/// Bessel-potential scaling: multiply by (1 + |xi|^2)^(s/2).  Spectral side.
Field bessel_apply(const Field& f, Real s);

/// Spectral derivative along one axis: multiply by (i xi_a)^order.  The
/// Nyquist mode has no conjugate partner, so odd orders zero it to keep
/// real fields real.
Field axis_derivative(const Field& f, int axis, int order);

/// 2/3-rule dealiasing: zero every mode with |j_a| > floor(N_a/3) on any
/// axis (the Nyquist mode always goes).  Spectral side, idempotent.
Field dealias_two_thirds(const Field& f);
void dealias_two_thirds_rows(const SpectralGrid& grid, Eigen::Ref<SpecMat> coeffs);

/// In-place Bessel scaling of a components x modes matrix.
void bessel_apply_rows(const SpectralGrid& grid, Eigen::Ref<SpecMat> coeffs, Real s);

}  // namespace bqs
