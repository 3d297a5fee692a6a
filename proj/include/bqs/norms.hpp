#pragma once

#include "bqs/field.hpp"

namespace bqs {

/// Exponents shared by every norm evaluation of a run: the outer Lebesgue
/// exponent p, the inner component exponent q (l_q over the components at
/// each point), and the smoothness order s of the Sobolev norm.
struct NormParams {
  Real p = 2.0;
  Real q_inner = 2.0;
  Real s = 2.0;
};

/// l_q norm of the component vector at one point.
Real component_norm(const Complex* v, int components, Real q);

/// ( sum_x ||u(x)||_q^p * cell_volume )^(1/p).  Physical side, p >= 1.
Real lp_norm(const Field& f, Real p, Real q_inner = 2.0);

/// max_x ||u(x)||_q.  Physical side.
Real linf_norm(const Field& f, Real q_inner = 2.0);

/// Bessel-potential Sobolev norm: lp_norm of the inverse transform of
/// (1 + |xi|^2)^(s/2) u_hat.  Physical side in; transforms internally.
Real sobolev_norm(const Field& f, Real s, Real p, Real q_inner = 2.0);

/// Same, starting from already-transformed coefficients.
Real sobolev_norm_spectral(const Field& spectral, Real s, Real p, Real q_inner = 2.0);

}  // namespace bqs
