#include "bqs/kernel_table.hpp"

#include <cmath>
#include <limits>

#include "bqs/errors.hpp"
#include "bqs/trig_kernels.hpp"

namespace bqs {

namespace {

void fill_mode_data(const OperatorSpec& A, const EllipticForm& L, const SpectralGrid& g,
                    Eigen::ArrayXd& r, Eigen::ArrayXd& a_frozen) {
  if (L.dims() != g.n_dims())
    throw Error("kernel table: elliptic form dimension does not match grid");
  const std::int64_t P = g.total_points();
  r.resize(P);
  if (A.is_scalar()) a_frozen.resize(P);
  Eigen::VectorXd xi;
  for (std::int64_t p = 0; p < P; ++p) {
    g.mode_freq(p, xi);
    const Real denom = 1.0 + L(xi);
    r[p] = 1.0 / denom;
    if (A.is_scalar()) a_frozen[p] = A.symbol(xi) / denom;
  }
}

}  // namespace

KernelTable build_kernel_table(const OperatorSpec& A, const EllipticForm& L,
                               GridPtr grid, Real t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error("kernel table: time offset must be finite and >= 0");
  KernelTable tab;
  tab.grid = std::move(grid);
  tab.t = t;
  tab.components = A.components();
  tab.scalar_path = A.is_scalar();
  fill_mode_data(A, L, *tab.grid, tab.r, tab.a_frozen);

  const std::int64_t P = tab.grid->total_points();
  if (tab.scalar_path) {
    tab.C.resize(P);
    tab.S.resize(P);
    for (std::int64_t p = 0; p < P; ++p) {
      tab.C[p] = cosine_kernel(tab.a_frozen[p], t);
      tab.S[p] = sine_kernel(tab.a_frozen[p], t);
    }
  } else {
    const Eigen::MatrixXcd& M = A.matrix_op();
    tab.a_op = M;
    tab.Cm.resize(static_cast<std::size_t>(P));
    tab.Sm.resize(static_cast<std::size_t>(P));
    for (std::int64_t p = 0; p < P; ++p) {
      const Eigen::MatrixXcd Axi = M * tab.r[p];
      cosine_sine_pair(Axi, t, tab.Cm[static_cast<std::size_t>(p)],
                       tab.Sm[static_cast<std::size_t>(p)]);
    }
  }
  return tab;
}

KernelLadder build_kernel_ladder(const OperatorSpec& A, const EllipticForm& L,
                                 GridPtr grid, Real dt, int steps) {
  if (!(dt > 0.0)) throw Error("kernel ladder: dt must be positive");
  if (steps < 0) throw Error("kernel ladder: steps must be >= 0");
  KernelLadder lad;
  lad.grid = grid;
  lad.dt = dt;
  lad.level.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k)
    lad.level.push_back(build_kernel_table(A, L, grid, dt * k));
  return lad;
}

ResolventReport resolvent_bound_check(const OperatorSpec& A, Real c0, Real omega,
                                      int samples) {
  if (A.is_scalar()) throw Error("resolvent check: matrix operator required");
  if (!(c0 > 0.0)) throw Error("resolvent check: C0 must be positive");
  if (samples < 1) throw Error("resolvent check: need at least one sample");

  const Eigen::MatrixXcd& M = A.matrix_op();
  const int n = static_cast<int>(M.rows());
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);

  // Decade-spaced sample grid, odd counts so Re-omega includes 10^0 exactly
  // and Im includes 0.
  int nre = static_cast<int>(std::ceil(std::sqrt(static_cast<Real>(samples))));
  if (nre < 3) nre = 3;
  if (nre % 2 == 0) ++nre;
  int nim = nre;

  std::vector<Real> re_off(static_cast<std::size_t>(nre));
  for (int i = 0; i < nre; ++i)
    re_off[static_cast<std::size_t>(i)] =
        std::pow(10.0, -3.0 + 6.0 * i / static_cast<Real>(nre - 1));
  std::vector<Real> im(static_cast<std::size_t>(nim));
  {
    const int half = (nim - 1) / 2;
    im[static_cast<std::size_t>(half)] = 0.0;
    for (int i = 1; i <= half; ++i) {
      const Real v = std::pow(10.0, -3.0 + 6.0 * (i - 1) / static_cast<Real>(std::max(1, half - 1)));
      im[static_cast<std::size_t>(half - i)] = -v;
      im[static_cast<std::size_t>(half + i)] = v;
    }
  }

  ResolventReport rep;
  for (Real dre : re_off) {
    for (Real b : im) {
      const Complex lambda(omega + dre, b);
      const Eigen::MatrixXcd shifted = M - lambda * lambda * I;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
      const Real smin = svd.singularValues().minCoeff();
      const Real smax = svd.singularValues().maxCoeff();
      ++rep.samples_used;
      Real violation;
      if (smin <= smax * 1e-14 || smin == 0.0) {
        violation = std::numeric_limits<Real>::infinity();
        rep.singular_hit = true;
      } else {
        violation = (1.0 / smin) * dre / c0;
      }
      if (violation > rep.max_violation) {
        rep.max_violation = violation;
        rep.witness = lambda;
      }
    }
  }
  rep.pass = rep.max_violation <= 1.0;
  return rep;
}

}  // namespace bqs
