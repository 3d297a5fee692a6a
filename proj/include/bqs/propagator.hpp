#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "bqs/field.hpp"
#include "bqs/kernel_table.hpp"
#include "bqs/norms.hpp"

namespace bqs {

/// The norms recorded for one field at one stored time.
struct NormRecord {
  Real x1 = 0.0;    // L1
  Real xp = 0.0;    // Lp
  Real xinf = 0.0;  // sup
  Real ysp = 0.0;   // Bessel-Sobolev of order params.s
};

/// Time history of a solve: fields and their norms at uniformly spaced
/// stored times t_k = start + k*dt.
struct SolutionTrace {
  GridPtr grid;
  Real dt = 0.0;
  NormParams params;
  std::vector<Real> times;
  std::vector<Field> u, ut;
  std::vector<NormRecord> u_norms, ut_norms;

  int levels() const { return static_cast<int>(times.size()); }
};

/// Homogeneous part at the table's time offset:
///   u  = C phi + S psi
///   ut = -A_xi S phi + C psi        (per mode)
std::pair<Field, Field> apply_initial_propagators(const KernelTable& table,
                                                  const Field& phi, const Field& psi);

/// One-call homogeneous solution at an arbitrary time.
std::pair<Field, Field> homogeneous_solution(const OperatorSpec& A, const EllipticForm& L,
                                             const Field& phi, const Field& psi, Real t);

/// Forcing response at t = K*dt given samples g(j*dt), j = 0..K (at least):
///   u  += int_0^t S(t - tau) r g(tau) dtau
///   ut += int_0^t C(t - tau) r g(tau) dtau
/// Quadrature is composite Simpson, with a trapezoid closing cell when the
/// number of cells is odd.
std::pair<Field, Field> duhamel_term(const KernelLadder& ladder,
                                     std::span<const Field> g, Real t);

/// Full linear solve on [0, T] with stored step dt (T must be an integer
/// multiple of dt).  g may be empty (no forcing) or hold K+1 samples.
SolutionTrace solve_linear(const OperatorSpec& A, const EllipticForm& L,
                           const Field& phi, const Field& psi,
                           std::span<const Field> g, Real T, Real dt,
                           const NormParams& params);

// --- shared spectral machinery (also driving the nonlinear iteration) -----

struct LinearContext {
  GridPtr grid;
  KernelLadder ladder;
  SpecMat phi_hat, psi_hat;
  Eigen::MatrixXcd a_op;  // matrix path only
  bool scalar_path = true;
  int components = 1;
  int steps = 0;
  Real dt = 0.0;
  NormParams params;
};

LinearContext make_linear_context(const OperatorSpec& A, const EllipticForm& L,
                                  const Field& phi, const Field& psi, Real T, Real dt,
                                  const NormParams& params);

/// Solve with spectral forcing samples (empty = homogeneous).  Throws
/// NonFinite when a stored level stops being finite.
SolutionTrace solve_with_forcing(const LinearContext& ctx,
                                 const std::vector<SpecMat>& g_hat);

/// Simpson weights for integrating 0..k*dt over k cells (trapezoid closing
/// cell when k is odd); empty for k = 0.
std::vector<Real> quadrature_weights(int k, Real dt);

// --- a-priori estimate probes ---------------------------------------------

struct EstimateReport {
  Real sup_ratio = 0.0;      // max_t sup-norms over (Sobolev + L1) data size
  Real sobolev_ratio = 0.0;  // max_t Sobolev norms over Sobolev data size
  bool degenerate = false;   // nonzero response from zero-size data
};

EstimateReport verify_linear_estimates(const SolutionTrace& trace, const Field& phi,
                                       const Field& psi, std::span<const Field> g);

// --- multiplier decay probe ------------------------------------------------

/// Lattice estimate of sup_{xi != 0, t} |xi|^(|alpha| + n/p) ||D^alpha Psi||
/// for Psi(xi) = (1 + L(xi))^(-s/2) C(t, xi) and every alpha in {0,1}^n,
/// with D^alpha by centered differences on the frequency lattice.  The same
/// quantity on a twice-finer lattice flags unbounded growth.
struct SymbolDecayReport {
  Real sup_value = 0.0;
  Real sup_refined = 0.0;
  bool growth_flag = false;
  struct Term {
    std::array<int, 3> alpha{0, 0, 0};
    Real sup = 0.0;
  };
  std::vector<Term> terms;
};

SymbolDecayReport symbol_decay_check(const OperatorSpec& A, const EllipticForm& L,
                                     GridPtr grid, Real s, Real p,
                                     std::span<const Real> t_samples);

}  // namespace bqs
