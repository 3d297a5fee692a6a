#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bqs/field.hpp"
#include "bqs/nonlinearity.hpp"

namespace bqs {

// Empirical probes of the inequalities the solver's window calibration
// relies on.  Each probe returns the ratio  left side / right side  of the
// inequality for one concrete field, so a harness can report the worst
// ratio over an ensemble as an empirical constant.

/// Interpolation inequality ratio
///   ||D^i u||_r  /  ( ||u||_p^(1-mu) * sum_a ||d_a^m u||_q^mu ),  mu = i/m,
/// with 1/r = i/n + mu (1/q - m/n) + (1 - mu)/p.  1/r = 0 reads as the sup
/// norm; 1/r < 0 is rejected.  Derivatives are spectral, applied per axis.
Real interpolation_ratio(const Field& u, int i, int m, Real p, Real q,
                         Real q_inner = 2.0);

/// Chain-rule composition ratio of order k in {0, 1, 2}:
///   k = 0:  ||f(u)||_p / ( sup||f'|| * ||u||_p )
///   k >= 1: sum_a ||d_a^k f(u)||_p over the matching sum of derivative
///           bounds  sum_{j<=k} sup||f^(j)|| * ||u||_inf^(j-1) * sum_a ||d_a^k u||_p.
Real composition_ratio(const NonlinearitySpec& f, const Field& u, int k, Real p,
                       Real q_inner = 2.0);

/// Largest |C(t+s) + C(t-s) - 2 C(t) C(s)| entry over the given (t, s)
/// pairs, for the cosine kernel of M.
Real cosine_identity_residual(const Eigen::MatrixXcd& M,
                              std::span<const std::pair<Real, Real>> pairs);

/// Ensemble report of one inequality family.
struct InequalityReport {
  std::string name;
  int samples = 0;
  Real worst_ratio = 0.0;      // max over the ensemble
  Real empirical_constant = 0.0;  // alias of worst_ratio, the constant it certifies
  std::vector<std::pair<Real, Real>> trend;  // (parameter, ratio) pairs
  bool bounded = true;
};

/// Dilation sweep of the interpolation inequality on Gaussian bumps of
/// width w/lambda for the given lambdas.
InequalityReport interpolation_sweep(GridPtr grid, int i, int m, Real p, Real q,
                                     std::span<const Real> lambdas);

/// Amplitude sweep of the composition inequality for f and order k.
InequalityReport composition_sweep(GridPtr grid, const NonlinearitySpec& f, int k, Real p,
                                   std::span<const Real> amplitudes);

}  // namespace bqs
