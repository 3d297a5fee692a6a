#pragma once

#include <vector>

#include "bqs/grid.hpp"
#include "bqs/operator_model.hpp"
#include "bqs/types.hpp"

namespace bqs {

// Per-mode propagation kernels at one time offset t: for each lattice mode
// xi the frozen operator A_xi = A / (1 + L(xi)) and its cosine and sine
// kernels, plus the forcing weight r(xi) = 1 / (1 + L(xi)).  The scalar
// path stores plain arrays over modes; the matrix path one small matrix
// pair per mode.
struct KernelTable {
  GridPtr grid;
  Real t = 0.0;
  int components = 1;
  bool scalar_path = true;

  Eigen::ArrayXd r;         // 1/(1+L(xi)) per mode
  Eigen::ArrayXd a_frozen;  // scalar A_xi per mode (scalar path)
  Eigen::ArrayXd C, S;      // kernels per mode (scalar path)

  Eigen::MatrixXcd a_op;                 // the (unfrozen) operator (matrix path)
  std::vector<Eigen::MatrixXcd> Cm, Sm;  // kernels per mode (matrix path)
};

/// Kernels of every level t = k*dt for k = 0..steps (steps+1 tables).
struct KernelLadder {
  GridPtr grid;
  Real dt = 0.0;
  std::vector<KernelTable> level;

  int steps() const { return static_cast<int>(level.size()) - 1; }
};

/// Tabulate the kernels of one time offset over all lattice modes.
KernelTable build_kernel_table(const OperatorSpec& A, const EllipticForm& L,
                               GridPtr grid, Real t);

KernelLadder build_kernel_ladder(const OperatorSpec& A, const EllipticForm& L,
                                 GridPtr grid, Real dt, int steps);

/// Empirical check of the resolvent bound ||(A - lambda^2)^{-1}|| <= C0 / |Re lambda - omega|
/// over a log-spaced grid in the half plane Re lambda > omega.  The operator
/// norm is the spectral norm.  A singular sample reports an infinite
/// violation with the witness attached.
struct ResolventReport {
  Real max_violation = 0.0;  // max over samples of ||R|| * |Re lambda - omega| / C0
  Complex witness{0.0, 0.0};
  int samples_used = 0;
  bool singular_hit = false;
  bool pass = false;  // max_violation <= 1
};

ResolventReport resolvent_bound_check(const OperatorSpec& A, Real c0, Real omega,
                                      int samples);

}  // namespace bqs
