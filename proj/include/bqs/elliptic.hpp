#pragma once

#include "bqs/types.hpp"

namespace bqs {

// Positive quadratic symbol L(xi) = xi^T C xi with C symmetric positive
// definite.  Its ellipticity bounds m1 |xi|^2 <= L(xi) <= m2 |xi|^2 are the
// extreme eigenvalues of C.
class EllipticForm {
 public:
  /// Accepts any square matrix; only the symmetric part enters the symbol.
  /// Throws NotElliptic when the symmetric part is not positive definite.
  explicit EllipticForm(const Eigen::MatrixXd& coeffs);

  /// Symbol value L(xi) (always >= 0, and > 0 for xi != 0).
  Real operator()(const Eigen::VectorXd& xi) const;

  Real m1() const { return m1_; }
  Real m2() const { return m2_; }
  int dims() const { return static_cast<int>(coeffs_.rows()); }
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }

  static EllipticForm identity(int n);

 private:
  Eigen::MatrixXd coeffs_;  // symmetrized
  Real m1_ = 0.0, m2_ = 0.0;
};

/// Extreme eigenvalues (m1, m2) of the symmetrized coefficient matrix;
/// throws NotElliptic when m1 <= 0.
std::pair<Real, Real> check_ellipticity(const Eigen::MatrixXd& coeffs);

}  // namespace bqs
