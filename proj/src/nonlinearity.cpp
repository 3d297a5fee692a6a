#include "bqs/nonlinearity.hpp"

#include <cmath>
#include <random>

#include "bqs/errors.hpp"
#include "bqs/norms.hpp"

namespace bqs {

namespace {

Real vec_lq(const Eigen::VectorXcd& v, Real q) {
  return component_norm(v.data(), static_cast<int>(v.size()), q);
}

}  // namespace

NonlinearitySpec NonlinearitySpec::zero(int components) {
  NonlinearitySpec f;
  f.components_ = components;
  f.name_ = "zero";
  f.eval_ = [](const Eigen::VectorXcd& u, Eigen::VectorXcd& out) {
    out.setZero(u.size());
  };
  f.d1_ = [](const Eigen::VectorXcd& u, Eigen::MatrixXcd& j) {
    j.setZero(u.size(), u.size());
  };
  f.d2_ = [](const Eigen::VectorXcd& u, const Eigen::VectorXcd&, const Eigen::VectorXcd&,
             Eigen::VectorXcd& out) { out.setZero(u.size()); };
  f.d3_ = [](const Eigen::VectorXcd& u, const Eigen::VectorXcd&, const Eigen::VectorXcd&,
             const Eigen::VectorXcd&, Eigen::VectorXcd& out) { out.setZero(u.size()); };
  f.sup_d1_ = [](Real) { return 0.0; };
  f.sup_d2_ = [](Real) { return 0.0; };
  return f;
}

NonlinearitySpec NonlinearitySpec::power(int k, Real coeff) {
  if (k < 2) throw Error("nonlinearity: power must be >= 2");
  NonlinearitySpec f;
  f.components_ = 1;
  f.name_ = "u^" + std::to_string(k);
  f.eval_ = [k, coeff](const Eigen::VectorXcd& u, Eigen::VectorXcd& out) {
    out.resize(1);
    out[0] = coeff * std::pow(u[0], k);
  };
  f.d1_ = [k, coeff](const Eigen::VectorXcd& u, Eigen::MatrixXcd& j) {
    j.resize(1, 1);
    j(0, 0) = coeff * static_cast<Real>(k) * std::pow(u[0], k - 1);
  };
  f.d2_ = [k, coeff](const Eigen::VectorXcd& u, const Eigen::VectorXcd& h1,
                     const Eigen::VectorXcd& h2, Eigen::VectorXcd& out) {
    out.resize(1);
    out[0] = coeff * static_cast<Real>(k * (k - 1)) * std::pow(u[0], k - 2) * h1[0] * h2[0];
  };
  f.d3_ = [k, coeff](const Eigen::VectorXcd& u, const Eigen::VectorXcd& h1,
                     const Eigen::VectorXcd& h2, const Eigen::VectorXcd& h3,
                     Eigen::VectorXcd& out) {
    out.resize(1);
    out[0] = (k >= 3) ? Complex(coeff * static_cast<Real>(k * (k - 1) * (k - 2))) *
                            std::pow(u[0], k - 3) * h1[0] * h2[0] * h3[0]
                      : Complex(0.0);
  };
  // |c| k r^(k-1) and |c| k(k-1) r^(k-2), attained on the real slice.
  f.sup_d1_ = [k, coeff](Real r) {
    return std::abs(coeff) * k * std::pow(r, k - 1);
  };
  f.sup_d2_ = [k, coeff](Real r) {
    return std::abs(coeff) * k * (k - 1) * std::pow(r, k - 2);
  };
  return f;
}

NonlinearitySpec NonlinearitySpec::scalar_poly(Real c2, Real c3) {
  NonlinearitySpec f;
  f.components_ = 1;
  f.name_ = "c2*u^2+c3*u^3";
  f.eval_ = [c2, c3](const Eigen::VectorXcd& u, Eigen::VectorXcd& out) {
    out.resize(1);
    out[0] = c2 * u[0] * u[0] + c3 * u[0] * u[0] * u[0];
  };
  f.d1_ = [c2, c3](const Eigen::VectorXcd& u, Eigen::MatrixXcd& j) {
    j.resize(1, 1);
    j(0, 0) = 2.0 * c2 * u[0] + 3.0 * c3 * u[0] * u[0];
  };
  f.d2_ = [c2, c3](const Eigen::VectorXcd& u, const Eigen::VectorXcd& h1,
                   const Eigen::VectorXcd& h2, Eigen::VectorXcd& out) {
    out.resize(1);
    out[0] = (2.0 * c2 + 6.0 * c3 * u[0]) * h1[0] * h2[0];
  };
  f.d3_ = [c3](const Eigen::VectorXcd&, const Eigen::VectorXcd& h1,
               const Eigen::VectorXcd& h2, const Eigen::VectorXcd& h3,
               Eigen::VectorXcd& out) {
    out.resize(1);
    out[0] = 6.0 * c3 * h1[0] * h2[0] * h3[0];
  };
  f.sup_d1_ = [c2, c3](Real r) { return 2.0 * std::abs(c2) * r + 3.0 * std::abs(c3) * r * r; };
  f.sup_d2_ = [c2, c3](Real r) { return 2.0 * std::abs(c2) + 6.0 * std::abs(c3) * r; };
  return f;
}

NonlinearitySpec NonlinearitySpec::coupled_quadratic(int components,
                                                     const std::vector<QuadraticTerm>& terms,
                                                     Real q_inner) {
  if (components < 1) throw Error("nonlinearity: components must be >= 1");
  for (const auto& t : terms)
    if (t.m < 0 || t.m >= components || t.j < 0 || t.j >= components || t.k < 0 ||
        t.k >= components)
      throw Error("nonlinearity: coupling index out of range");

  NonlinearitySpec f;
  f.components_ = components;
  f.q_inner_ = q_inner;
  f.name_ = "coupled_quadratic";
  auto tms = terms;
  f.eval_ = [tms, components](const Eigen::VectorXcd& u, Eigen::VectorXcd& out) {
    out.setZero(components);
    for (const auto& t : tms) out[t.m] += t.c * u[t.j] * u[t.k];
  };
  f.d1_ = [tms, components](const Eigen::VectorXcd& u, Eigen::MatrixXcd& j) {
    j.setZero(components, components);
    for (const auto& t : tms) {
      j(t.m, t.j) += t.c * u[t.k];
      j(t.m, t.k) += t.c * u[t.j];
    }
  };
  f.d2_ = [tms, components](const Eigen::VectorXcd&, const Eigen::VectorXcd& h1,
                            const Eigen::VectorXcd& h2, Eigen::VectorXcd& out) {
    out.setZero(components);
    for (const auto& t : tms) out[t.m] += t.c * (h1[t.j] * h2[t.k] + h2[t.j] * h1[t.k]);
  };
  f.d3_ = [components](const Eigen::VectorXcd&, const Eigen::VectorXcd&,
                       const Eigen::VectorXcd&, const Eigen::VectorXcd&,
                       Eigen::VectorXcd& out) { out.setZero(components); };

  // |J(x)_{mj}| <= r * G_{mj} with G_{mj} = sum_k |c_mjk| + |c_mkj|; the l_q
  // operator norm of G is bounded by interpolation between q = 1 and q = inf.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(components, components);
  for (const auto& t : tms) {
    G(t.m, t.j) += std::abs(t.c);
    G(t.m, t.k) += std::abs(t.c);
  }
  const Real g1 = G.cwiseAbs().colwise().sum().maxCoeff();
  const Real ginf = G.cwiseAbs().rowwise().sum().maxCoeff();
  // ||f''(h,g)||_q <= 2 || (S_m) ||_{l_q} ||h|| ||g||, S_m = sum_{jk} |c_mjk|.
  Eigen::VectorXd S = Eigen::VectorXd::Zero(components);
  for (const auto& t : tms) S(t.m) += std::abs(t.c);
  Real s_lq;
  if (q_inner == 2.0) {
    s_lq = S.norm();
  } else {
    Real acc = 0.0;
    for (int m = 0; m < components; ++m) acc += std::pow(S[m], q_inner);
    s_lq = std::pow(acc, 1.0 / q_inner);
  }
  const Real q = q_inner;
  f.sup_d1_ = [g1, ginf, q](Real r) {
    return r * std::pow(g1, 1.0 / q) * std::pow(ginf, 1.0 - 1.0 / q);
  };
  f.sup_d2_ = [s_lq](Real) { return 2.0 * s_lq; };
  return f;
}

NonlinearitySpec NonlinearitySpec::custom(int components, EvalFn eval, JacobianFn d1,
                                          BilinearFn d2, TrilinearFn d3, std::string name) {
  if (!eval || !d1 || !d2 || !d3) throw Error("nonlinearity: all four callables required");
  NonlinearitySpec f;
  f.components_ = components;
  f.name_ = std::move(name);
  f.eval_ = std::move(eval);
  f.d1_ = std::move(d1);
  f.d2_ = std::move(d2);
  f.d3_ = std::move(d3);
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(components), fz;
  f.eval_(z, fz);
  f.zero_at_zero_ = vec_lq(fz, 2.0) == 0.0;
  return f;
}

Field apply_pointwise(const NonlinearitySpec& f, const Field& u) {
  require_side(u, Side::Physical, "apply_pointwise");
  if (u.components != f.components())
    throw Error("apply_pointwise: component count does not match nonlinearity");
  Field out = make_field(u.grid, u.components, Side::Physical);
  const std::int64_t P = u.points();
  const int nc = u.components;
  Eigen::VectorXcd uv(nc), fv(nc);
  for (std::int64_t x = 0; x < P; ++x) {
    for (int c = 0; c < nc; ++c) uv[c] = u.at(c, x);
    f.eval(uv, fv);
    for (int c = 0; c < nc; ++c) out.at(c, x) = fv[c];
  }
  return out;
}

Real operator_norm_lq(const Eigen::MatrixXcd& J, Real q) {
  if (q == 1.0) return J.cwiseAbs().colwise().sum().maxCoeff();
  if (std::isinf(q)) return J.cwiseAbs().rowwise().sum().maxCoeff();
  if (q == 2.0) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
    return svd.singularValues().maxCoeff();
  }
  const Real n1 = J.cwiseAbs().colwise().sum().maxCoeff();
  const Real ninf = J.cwiseAbs().rowwise().sum().maxCoeff();
  return std::pow(n1, 1.0 / q) * std::pow(ninf, 1.0 - 1.0 / q);
}

MajorantResult derivative_majorant(const NonlinearitySpec& f, Real r, std::uint64_t seed) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw Error("derivative_majorant: radius must be finite and >= 0");
  MajorantResult res;
  if (f.has_closed_majorant()) {
    res.value = std::max(f.sup_d1(r), f.sup_d2(r));
    return res;
  }

  // Quasi-random sweep of the ball plus random unit directions for the
  // bilinear term; a finite sample can only under-estimate the sup.
  res.sampled_lower_bound = true;
  const int nc = f.components();
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  std::uniform_real_distribution<Real> unif(0.0, 1.0);
  Eigen::VectorXcd x(nc), h1(nc), h2(nc), out(nc);
  Eigen::MatrixXcd jac(nc, nc);
  const int samples = 10000;
  Real best = 0.0;
  for (int i = 0; i < samples; ++i) {
    for (int c = 0; c < nc; ++c) x[c] = Complex(gauss(rng), gauss(rng));
    const Real xn = vec_lq(x, 2.0);
    if (xn > 0.0) x *= (r * std::pow(unif(rng), 1.0 / (2.0 * nc)) / xn);
    f.d1(x, jac);
    best = std::max(best, operator_norm_lq(jac, 2.0));
    for (int c = 0; c < nc; ++c) {
      h1[c] = Complex(gauss(rng), gauss(rng));
      h2[c] = Complex(gauss(rng), gauss(rng));
    }
    const Real n1 = vec_lq(h1, 2.0), n2 = vec_lq(h2, 2.0);
    if (n1 > 0.0 && n2 > 0.0) {
      f.d2(x, h1, h2, out);
      best = std::max(best, vec_lq(out, 2.0) / (n1 * n2));
    }
  }
  res.value = best;
  return res;
}

Real derivative_consistency(const NonlinearitySpec& f, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unif(-1.0, 1.0);
  const int nc = f.components();
  // Step sizes chosen per difference order to balance truncation against
  // cancellation in the higher stencils.
  const Real h1 = 1e-6, h2 = 1e-4, h3 = 1e-3;
  Real worst = 0.0;
  Eigen::VectorXcd x(nc), e(nc), fp(nc), fm(nc), f0(nc), fd(nc), an(nc);
  Eigen::VectorXcd fpp(nc), fmm(nc);
  Eigen::MatrixXcd jac(nc, nc);
  for (int t = 0; t < trials; ++t) {
    for (int c = 0; c < nc; ++c) x[c] = unif(rng);
    for (int c = 0; c < nc; ++c) e[c] = unif(rng);
    const Real en = vec_lq(e, 2.0);
    if (en == 0.0) continue;
    e /= en;

    // first derivative along e
    f.eval(x + h1 * e, fp);
    f.eval(x - h1 * e, fm);
    fd = (fp - fm) / (2.0 * h1);
    f.d1(x, jac);
    an = jac * e;
    Real scale = std::max(vec_lq(an, 2.0), 1.0);
    worst = std::max(worst, vec_lq(Eigen::VectorXcd(fd - an), 2.0) / scale);

    // second derivative along (e, e)
    f.eval(x + h2 * e, fp);
    f.eval(x - h2 * e, fm);
    f.eval(x, f0);
    fd = (fp - 2.0 * f0 + fm) / (h2 * h2);
    f.d2(x, e, e, an);
    scale = std::max(vec_lq(an, 2.0), 1.0);
    worst = std::max(worst, vec_lq(Eigen::VectorXcd(fd - an), 2.0) / scale);

    // third derivative along (e, e, e)
    f.eval(x + h3 * e, fp);
    f.eval(x - h3 * e, fm);
    f.eval(x + 2.0 * h3 * e, fpp);
    f.eval(x - 2.0 * h3 * e, fmm);
    fd = (fpp - 2.0 * fp + 2.0 * fm - fmm) / (2.0 * h3 * h3 * h3);
    f.d3(x, e, e, e, an);
    scale = std::max(vec_lq(an, 2.0), 1.0);
    worst = std::max(worst, vec_lq(Eigen::VectorXcd(fd - an), 2.0) / scale);
  }
  return worst;
}

}  // namespace bqs
