#include "bqs/analysis_checks.hpp"

#include <cmath>
#include <limits>

#include "bqs/errors.hpp"
#include "bqs/norms.hpp"
#include "bqs/spectral_ops.hpp"
#include "bqs/transform.hpp"
#include "bqs/trig_kernels.hpp"

namespace bqs {

namespace {

/// sum over axes of the Lp norm of the pure order-k spectral derivative.
Real derivative_sum_norm(const Field& u, int k, Real p, Real q_inner) {
  if (k == 0) return lp_norm(u, p, q_inner);
  const Field hat = forward_transform(u);
  Real acc = 0.0;
  for (int a = 0; a < u.grid->n_dims(); ++a)
    acc += lp_norm(inverse_transform(axis_derivative(hat, a, k)), p, q_inner);
  return acc;
}

Real derivative_sum_norm_inf(const Field& u, int k, Real q_inner) {
  if (k == 0) return linf_norm(u, q_inner);
  const Field hat = forward_transform(u);
  Real acc = 0.0;
  for (int a = 0; a < u.grid->n_dims(); ++a)
    acc += linf_norm(inverse_transform(axis_derivative(hat, a, k)), q_inner);
  return acc;
}

}  // namespace

Real interpolation_ratio(const Field& u, int i, int m, Real p, Real q, Real q_inner) {
  require_side(u, Side::Physical, "interpolation_ratio");
  if (i < 0 || m < 1 || i > m) throw Error("interpolation_ratio: need 0 <= i <= m, m >= 1");
  if (!(p >= 1.0) || !(q >= 1.0)) throw Error("interpolation_ratio: p, q must be >= 1");

  const int n = u.grid->n_dims();
  const Real mu = static_cast<Real>(i) / m;
  // the exponent relation that makes the ratio dilation invariant:
  //   1/r = i/n + mu (1/q - m/n) + (1 - mu)/p
  const Real r_inv = static_cast<Real>(i) / n +
                     mu * (1.0 / q - static_cast<Real>(m) / n) + (1.0 - mu) / p;
  if (r_inv < 0.0)
    throw Error("interpolation_ratio: exponent combination gives 1/r < 0");
  if (r_inv > 0.0 && 1.0 / r_inv < 1.0)
    throw Error("interpolation_ratio: exponent combination gives r < 1");

  // numerator ||D^i u||_r (sup norm when 1/r = 0)
  Real num;
  if (i == 0) {
    num = (r_inv == 0.0) ? linf_norm(u, q_inner) : lp_norm(u, 1.0 / r_inv, q_inner);
  } else if (r_inv == 0.0) {
    num = derivative_sum_norm_inf(u, i, q_inner);
  } else {
    num = derivative_sum_norm(u, i, 1.0 / r_inv, q_inner);
  }

  const Real base = lp_norm(u, p, q_inner);
  const Field hat = forward_transform(u);
  Real dsum = 0.0;
  for (int a = 0; a < n; ++a) {
    const Real da = lp_norm(inverse_transform(axis_derivative(hat, a, m)), q, q_inner);
    dsum += std::pow(da, mu);
  }
  const Real den = std::pow(base, 1.0 - mu) * dsum;
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<Real>::infinity();
  return num / den;
}

Real composition_ratio(const NonlinearitySpec& f, const Field& u, int k, Real p,
                       Real q_inner) {
  require_side(u, Side::Physical, "composition_ratio");
  if (k < 0 || k > 2) throw Error("composition_ratio: order must be 0, 1 or 2");
  if (u.components != f.components())
    throw Error("composition_ratio: component count does not match nonlinearity");

  const Field fu = apply_pointwise(f, u);

  // pointwise sup of ||f^(j)(u(x))|| over the lattice
  const std::int64_t P = u.points();
  const int nc = u.components;
  Eigen::VectorXcd uv(nc), w(nc);
  Eigen::MatrixXcd jac(nc, nc);
  Real sup_d1 = 0.0, sup_d2 = 0.0;
  for (std::int64_t x = 0; x < P; ++x) {
    for (int c = 0; c < nc; ++c) uv[c] = u.at(c, x);
    f.d1(uv, jac);
    sup_d1 = std::max(sup_d1, operator_norm_lq(jac, q_inner));
    if (k >= 2) {
      // bilinear norm probed on the coordinate directions
      for (int c1 = 0; c1 < nc; ++c1)
        for (int c2 = 0; c2 < nc; ++c2) {
          Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(nc);
          Eigen::VectorXcd e2 = Eigen::VectorXcd::Zero(nc);
          e1[c1] = 1.0;
          e2[c2] = 1.0;
          f.d2(uv, e1, e2, w);
          sup_d2 = std::max(sup_d2, component_norm(w.data(), nc, q_inner));
        }
    }
  }

  Real num, den;
  if (k == 0) {
    num = lp_norm(fu, p, q_inner);
    den = sup_d1 * lp_norm(u, p, q_inner);
  } else {
    num = derivative_sum_norm(fu, k, p, q_inner);
    const Real uinf = linf_norm(u, q_inner);
    const Real du_k = derivative_sum_norm(u, k, p, q_inner);
    den = sup_d1 * du_k;
    if (k == 2) den += sup_d2 * uinf * du_k;
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<Real>::infinity();
  return num / den;
}

Real cosine_identity_residual(const Eigen::MatrixXcd& M,
                              std::span<const std::pair<Real, Real>> pairs) {
  Real worst = 0.0;
  for (const auto& [t, s] : pairs) {
    const Eigen::MatrixXcd a = cosine_kernel(M, t + s);
    const Eigen::MatrixXcd b = cosine_kernel(M, t - s);
    const Eigen::MatrixXcd ct = cosine_kernel(M, t);
    const Eigen::MatrixXcd cs = cosine_kernel(M, s);
    const Eigen::MatrixXcd res = a + b - 2.0 * ct * cs;
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

InequalityReport interpolation_sweep(GridPtr grid, int i, int m, Real p, Real q,
                                     std::span<const Real> lambdas) {
  InequalityReport rep;
  rep.name = "interpolation i=" + std::to_string(i) + " m=" + std::to_string(m);
  // base width keeps every dilation well contained in the box and well
  // resolved on the lattice for lambda within [1/2, 4]
  const Real w0 = grid->half_widths()[0] / 12.0;
  for (Real lam : lambdas) {
    const Field u = gaussian_field(grid, 1, 1.0, w0 / lam);
    const Real ratio = interpolation_ratio(u, i, m, p, q);
    rep.trend.emplace_back(lam, ratio);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    ++rep.samples;
  }
  rep.empirical_constant = rep.worst_ratio;
  rep.bounded = std::isfinite(rep.worst_ratio);
  // the ratio is dilation invariant, so a steady climb flags a problem
  if (rep.trend.size() >= 3) {
    const Real a = rep.trend[rep.trend.size() - 3].second;
    const Real b = rep.trend[rep.trend.size() - 2].second;
    const Real c = rep.trend.back().second;
    if (c > 1.2 * b && b > 1.2 * a) rep.bounded = false;
  }
  return rep;
}

InequalityReport composition_sweep(GridPtr grid, const NonlinearitySpec& f, int k, Real p,
                                   std::span<const Real> amplitudes) {
  InequalityReport rep;
  rep.name = "composition order " + std::to_string(k);
  const Real w0 = grid->half_widths()[0] / 6.0;
  for (Real amp : amplitudes) {
    Field u = gaussian_field(grid, 1, amp, w0);
    if (f.components() > 1) {
      Field uv = make_field(grid, f.components(), Side::Physical);
      for (int c = 0; c < f.components(); ++c)
        for (std::int64_t x = 0; x < u.points(); ++x)
          uv.at(c, x) = u.at(0, x) / static_cast<Real>(c + 1);
      u = std::move(uv);
    }
    const Real ratio = composition_ratio(f, u, k, p);
    rep.trend.emplace_back(amp, ratio);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    ++rep.samples;
  }
  rep.empirical_constant = rep.worst_ratio;
  if (rep.trend.size() >= 3) {
    const Real a = rep.trend[rep.trend.size() - 3].second;
    const Real b = rep.trend[rep.trend.size() - 2].second;
    const Real c = rep.trend.back().second;
    rep.bounded = !(c > 1.2 * b && b > 1.2 * a);
  }
  return rep;
}

}  // namespace bqs
