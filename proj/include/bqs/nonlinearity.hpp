#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bqs/field.hpp"
#include "bqs/types.hpp"

namespace bqs {

/// One term of a coupled quadratic system: f_m += c * u_j * u_k
/// (component indices 0-based).
struct QuadraticTerm {
  int m = 0, j = 0, k = 0;
  Real c = 0.0;
};

// Pointwise nonlinearity f acting on the component vector at each lattice
// point, together with its first three derivatives and a radial majorant of
// the first two.  Derivatives are supplied in applied form: d1 as the
// Jacobian, d2 and d3 as symmetric multilinear maps on given directions.
class NonlinearitySpec {
 public:
  using EvalFn = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;
  using JacobianFn = std::function<void(const Eigen::VectorXcd&, Eigen::MatrixXcd&)>;
  using BilinearFn = std::function<void(const Eigen::VectorXcd&, const Eigen::VectorXcd&,
                                        const Eigen::VectorXcd&, Eigen::VectorXcd&)>;
  using TrilinearFn =
      std::function<void(const Eigen::VectorXcd&, const Eigen::VectorXcd&,
                         const Eigen::VectorXcd&, const Eigen::VectorXcd&,
                         Eigen::VectorXcd&)>;

  static NonlinearitySpec zero(int components = 1);
  /// f(u) = coeff * u^k on one component, k >= 2.
  static NonlinearitySpec power(int k, Real coeff = 1.0);
  /// f(u) = c2 u^2 + c3 u^3 on one component.
  static NonlinearitySpec scalar_poly(Real c2, Real c3);
  /// Coupled quadratic system on `components` components; the majorant is
  /// measured in the l_q component norm.
  static NonlinearitySpec coupled_quadratic(int components,
                                            const std::vector<QuadraticTerm>& terms,
                                            Real q_inner = 2.0);
  /// Fully custom; the majorant falls back to ball sampling.
  static NonlinearitySpec custom(int components, EvalFn eval, JacobianFn d1, BilinearFn d2,
                                 TrilinearFn d3, std::string name = "custom");

  int components() const { return components_; }
  bool zero_at_zero() const { return zero_at_zero_; }
  const std::string& name() const { return name_; }
  bool has_closed_majorant() const { return static_cast<bool>(sup_d1_); }

  void eval(const Eigen::VectorXcd& u, Eigen::VectorXcd& out) const { eval_(u, out); }
  void d1(const Eigen::VectorXcd& u, Eigen::MatrixXcd& jac) const { d1_(u, jac); }
  void d2(const Eigen::VectorXcd& u, const Eigen::VectorXcd& h1, const Eigen::VectorXcd& h2,
          Eigen::VectorXcd& out) const {
    d2_(u, h1, h2, out);
  }
  void d3(const Eigen::VectorXcd& u, const Eigen::VectorXcd& h1, const Eigen::VectorXcd& h2,
          const Eigen::VectorXcd& h3, Eigen::VectorXcd& out) const {
    d3_(u, h1, h2, h3, out);
  }

  Real sup_d1(Real r) const { return sup_d1_(r); }
  Real sup_d2(Real r) const { return sup_d2_(r); }

 private:
  friend struct MajorantAccess;
  int components_ = 1;
  bool zero_at_zero_ = true;
  std::string name_;
  Real q_inner_ = 2.0;
  EvalFn eval_;
  JacobianFn d1_;
  BilinearFn d2_;
  TrilinearFn d3_;
  std::function<Real(Real)> sup_d1_, sup_d2_;  // null for custom
};

/// Apply f pointwise to a physical field (component vector in, vector out).
Field apply_pointwise(const NonlinearitySpec& f, const Field& u);

/// max over the ball ||x||_q <= r of max(||f'||, ||f''||).  Closed form for
/// the built-in polynomials; otherwise the max over quasi-random ball
/// samples, reported with sampled_lower_bound set.
struct MajorantResult {
  Real value = 0.0;
  bool sampled_lower_bound = false;
};
MajorantResult derivative_majorant(const NonlinearitySpec& f, Real r,
                                   std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Largest relative mismatch between the supplied derivatives and central
/// finite differences of eval at `trials` random points (used by tests).
Real derivative_consistency(const NonlinearitySpec& f, int trials, std::uint64_t seed);

/// Operator norm of a matrix acting on (C^N, l_q): exact for q in {1, 2, inf},
/// the Riesz-Thorin interpolation bound otherwise.
Real operator_norm_lq(const Eigen::MatrixXcd& J, Real q);

}  // namespace bqs
