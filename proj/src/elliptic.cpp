#include "bqs/elliptic.hpp"

#include <utility>

#include "bqs/errors.hpp"

namespace bqs {

std::pair<Real, Real> check_ellipticity(const Eigen::MatrixXd& coeffs) {
  if (coeffs.rows() != coeffs.cols() || coeffs.rows() < 1 || coeffs.rows() > 3)
    throw NotElliptic("elliptic form: coefficient matrix must be square, 1x1 to 3x3");
  const Eigen::MatrixXd sym = 0.5 * (coeffs + coeffs.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  const Real m1 = es.eigenvalues().minCoeff();
  const Real m2 = es.eigenvalues().maxCoeff();
  if (!(m1 > 0.0))
    throw NotElliptic("elliptic form: smallest eigenvalue " + std::to_string(m1) +
                      " is not positive");
  return {m1, m2};
}

EllipticForm::EllipticForm(const Eigen::MatrixXd& coeffs) {
  auto [m1, m2] = check_ellipticity(coeffs);
  coeffs_ = 0.5 * (coeffs + coeffs.transpose());
  m1_ = m1;
  m2_ = m2;
}

Real EllipticForm::operator()(const Eigen::VectorXd& xi) const {
  return xi.dot(coeffs_ * xi);
}

EllipticForm EllipticForm::identity(int n) {
  return EllipticForm(Eigen::MatrixXd::Identity(n, n));
}

}  // namespace bqs
