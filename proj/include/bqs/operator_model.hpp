#pragma once

#include <functional>
#include <string>

#include "bqs/elliptic.hpp"
#include "bqs/types.hpp"

namespace bqs {

using SymbolFn = std::function<Real(const Eigen::VectorXd&)>;

// The leading operator A of  u_tt - L u_tt + A u = f(u).  Two variants:
// a scalar Fourier multiplier a(xi) acting on each component, or one
// constant N x N matrix coupling the components (the matrix does not
// depend on xi; all xi-dependence of the evolution enters through L).
class OperatorSpec {
 public:
  static OperatorSpec scalar_symbol(SymbolFn a, std::string name = "custom");
  static OperatorSpec matrix(Eigen::MatrixXcd A);
  /// Rank-one weighted coupling a_mj = g_m * 2^{s_weight * j}, j = 1..N.
  static OperatorSpec weighted_matrix(const Eigen::VectorXd& g, Real s_weight);

  /// a(xi) = |xi|^2 (the negative Laplacian).
  static OperatorSpec minus_laplacian();
  /// a(xi) = c.
  static OperatorSpec constant(Real c);

  bool is_scalar() const { return is_scalar_; }
  int components() const { return components_; }
  const std::string& name() const { return name_; }

  /// Scalar variant only: symbol value; validated finite and >= 0.
  Real symbol(const Eigen::VectorXd& xi) const;
  /// Matrix variant only.
  const Eigen::MatrixXcd& matrix_op() const;

 private:
  OperatorSpec() = default;
  bool is_scalar_ = true;
  int components_ = 1;
  SymbolFn sym_;
  Eigen::MatrixXcd mat_;
  std::string name_;
};

/// Frozen-coefficient operator of one mode: A scaled by 1/(1 + L(xi)).
Real frozen_scalar(const OperatorSpec& A, const EllipticForm& L, const Eigen::VectorXd& xi);
Eigen::MatrixXcd frozen_matrix(const OperatorSpec& A, const EllipticForm& L,
                               const Eigen::VectorXd& xi);

}  // namespace bqs
