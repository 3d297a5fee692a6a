#include "bqs/operator_model.hpp"

#include <cmath>
#include <sstream>

#include "bqs/errors.hpp"

namespace bqs {

OperatorSpec OperatorSpec::scalar_symbol(SymbolFn a, std::string name) {
  if (!a) throw Error("operator: null symbol");
  OperatorSpec s;
  s.is_scalar_ = true;
  s.components_ = 1;
  s.sym_ = std::move(a);
  s.name_ = std::move(name);
  return s;
}

OperatorSpec OperatorSpec::matrix(Eigen::MatrixXcd A) {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw Error("operator: matrix must be square and non-empty");
  OperatorSpec s;
  s.is_scalar_ = false;
  s.components_ = static_cast<int>(A.rows());
  s.mat_ = std::move(A);
  s.name_ = "matrix";
  return s;
}

OperatorSpec OperatorSpec::weighted_matrix(const Eigen::VectorXd& g, Real s_weight) {
  const int N = static_cast<int>(g.size());
  if (N < 1) throw Error("operator: weight vector g must be non-empty");
  Eigen::MatrixXcd A(N, N);
  for (int m = 0; m < N; ++m)
    for (int j = 0; j < N; ++j)
      A(m, j) = g[m] * std::pow(2.0, s_weight * (j + 1));
  OperatorSpec s = matrix(std::move(A));
  s.name_ = "weighted_matrix";
  return s;
}

OperatorSpec OperatorSpec::minus_laplacian() {
  return scalar_symbol([](const Eigen::VectorXd& xi) { return xi.squaredNorm(); },
                       "minus_laplacian");
}

OperatorSpec OperatorSpec::constant(Real c) {
  if (!(c >= 0.0)) throw Error("operator: constant symbol must be >= 0");
  return scalar_symbol([c](const Eigen::VectorXd&) { return c; }, "constant");
}

Real OperatorSpec::symbol(const Eigen::VectorXd& xi) const {
  if (!is_scalar_) throw Error("operator: matrix variant has no scalar symbol");
  const Real v = sym_(xi);
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << "operator: symbol value " << v << " at xi = (";
    for (int a = 0; a < xi.size(); ++a) os << (a ? ", " : "") << xi[a];
    os << ") must be finite and >= 0";
    throw Error(os.str());
  }
  return v;
}

const Eigen::MatrixXcd& OperatorSpec::matrix_op() const {
  if (is_scalar_) throw Error("operator: scalar variant has no matrix");
  return mat_;
}

Real frozen_scalar(const OperatorSpec& A, const EllipticForm& L, const Eigen::VectorXd& xi) {
  return A.symbol(xi) / (1.0 + L(xi));
}

Eigen::MatrixXcd frozen_matrix(const OperatorSpec& A, const EllipticForm& L,
                               const Eigen::VectorXd& xi) {
  return A.matrix_op() / (1.0 + L(xi));
}

}  // namespace bqs
