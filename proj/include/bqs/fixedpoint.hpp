#pragma once

#include <string>
#include <vector>

#include "bqs/nonlinearity.hpp"
#include "bqs/propagator.hpp"

namespace bqs {

/// Data amplitude M: Sobolev (order 2) plus sup norm of each initial field.
Real amplitude_M(const Field& phi, const Field& psi, const NormParams& params);

/// Largest existence window the contraction argument certifies for data of
/// amplitude M and derivative majorant fbar_m1 = fbar(M+1):
///   T = min( 1 / ((M+1)(1 + 2 C0 (M+1) fbar)),  1/2 / (1 + C1 (M+1)^2 fbar) ).
Real window_length(Real m_amplitude, Real fbar_m1, Real c0, Real c1);

/// Y(T) norm of a trace: max-in-time Sobolev norm plus max-in-time sup norm
/// of u.
Real window_norm(const SolutionTrace& trace);

/// Y(T) norm of the u-difference of two traces on the same lattice/times.
Real trace_distance(const SolutionTrace& a, const SolutionTrace& b);

/// One application of the solution map G: linear evolution of (phi, psi)
/// plus the forcing response of f(u) evaluated on the candidate's stored
/// levels, with 2/3-rule dealiasing around the pointwise nonlinearity.
SolutionTrace apply_G(const SolutionTrace& candidate, const Field& phi, const Field& psi,
                      const NonlinearitySpec& f, const OperatorSpec& A,
                      const EllipticForm& L, Real T, Real dt, const NormParams& params);

/// Record of one contraction window.
struct SolveWindow {
  Real start_time = 0.0;
  Real length = 0.0;
  Real dt = 0.0;
  Real m_amplitude = 0.0;
  Real fbar_m1 = 0.0;
  bool fbar_sampled = false;
  Real c0 = 1.0, c1 = 1.0;
  int picard_iters = 0;
  Real contraction_estimate = 0.0;
  bool ball_violation = false;  // an iterate left ||u|| <= M+1
  std::vector<Real> ratio_history;
};

struct PicardResult {
  SolutionTrace trace;
  SolveWindow window;
};

/// Picard iteration u_{k+1} = G(u_k) from the homogeneous solution (or a
/// caller-supplied trace), until successive Y(T) distance <= tol.  T must
/// not exceed the certified window for the data.  Throws MaxItersExceeded
/// with the observed ratio history when the cap is hit.
PicardResult picard_solve(const OperatorSpec& A, const EllipticForm& L, const Field& phi,
                          const Field& psi, const NonlinearitySpec& f, Real T, Real dt,
                          Real tol, int max_iters, const NormParams& params, Real c0 = 1.0,
                          Real c1 = 1.0, const SolutionTrace* initial = nullptr);

/// Contraction ratio ||G(u1) - G(u2)|| / ||u1 - u2|| for two candidates
/// (0 when the candidates coincide).
Real contraction_probe(const SolutionTrace& u1, const SolutionTrace& u2, const Field& phi,
                       const Field& psi, const NonlinearitySpec& f, const OperatorSpec& A,
                       const EllipticForm& L, Real T, Real dt, const NormParams& params);

enum class RunStatus { Completed = 0, BlowUpSuspected = 2, IterationFailed = 3 };

struct ContinuationParams {
  Real horizon = 1.0;
  Real blowup_threshold = 0.0;  // <= 0: 1e6 * (1 + monitor(0))
  Real dt = 0.0;                // <= 0: window length / steps_per_window
  int steps_per_window = 64;
  Real tol = 1e-10;
  int max_iters = 50;
  Real c0 = 1.0, c1 = 1.0;
  NormParams norms;  // norms.s is forced to 2 by the window machinery
};

struct ContinuationReport {
  RunStatus status = RunStatus::Completed;
  Real t_end = 0.0;
  Real blowup_time = -1.0;
  Real threshold = 0.0;
  int failed_window = -1;
  std::string reason;
  std::vector<SolveWindow> windows;
  std::vector<int> window_of_time;  // parallel to trace.times
  SolutionTrace trace;              // glued trace with absolute stored times
};

/// Window-by-window continuation until the horizon, a suspected blow-up
/// (monitor above threshold) or an iteration failure.  The monitor is
/// Sobolev + sup norm of u plus the same of u_t at each stored time.
ContinuationReport continue_solve(const OperatorSpec& A, const EllipticForm& L,
                                  const Field& phi, const Field& psi,
                                  const NonlinearitySpec& f, const ContinuationParams& cp);

/// Monitor value at one stored level of a trace.
Real monitor_value(const SolutionTrace& trace, int level);

}  // namespace bqs
