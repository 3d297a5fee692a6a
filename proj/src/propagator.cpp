#include "bqs/propagator.hpp"

#include <cmath>
#include <limits>

#include "bqs/errors.hpp"
#include "bqs/spectral_ops.hpp"
#include "bqs/transform.hpp"
#include "bqs/trig_kernels.hpp"

namespace bqs {

namespace {

SpecMat to_spectral(const Field& physical) {
  Field hat = forward_transform(physical);
  return hat.matrix();
}

Field from_spectral(GridPtr grid, int components, const SpecMat& hat) {
  Field f = make_field(std::move(grid), components, Side::Spectral);
  f.matrix() = hat;
  return inverse_transform(f);
}

Field spectral_field(GridPtr grid, int components, const SpecMat& hat) {
  Field f = make_field(std::move(grid), components, Side::Spectral);
  f.matrix() = hat;
  return f;
}

int checked_steps(Real T, Real dt, const char* who) {
  if (!(dt > 0.0)) throw Error(std::string(who) + ": dt must be positive");
  const auto k = static_cast<long long>(std::llround(T / dt));
  if (k < 0 || std::abs(T - k * dt) > 1e-9 * std::max(1.0, std::abs(T)))
    throw Error(std::string(who) + ": T must be a nonnegative integer multiple of dt");
  return static_cast<int>(k);
}

Eigen::Map<const Eigen::ArrayXcd> row_of(const SpecMat& m, Eigen::Index c) {
  return {m.data() + c * m.cols(), m.cols()};
}
Eigen::Map<Eigen::ArrayXcd> row_of(SpecMat& m, Eigen::Index c) {
  return {m.data() + c * m.cols(), m.cols()};
}

// u_hat / ut_hat of one stored level from the homogeneous data.
void homogeneous_level(const LinearContext& ctx, const KernelTable& tab, SpecMat& u_hat,
                       SpecMat& ut_hat) {
  const Eigen::Index P = ctx.phi_hat.cols();
  if (ctx.scalar_path) {
    const Eigen::ArrayXd SA = tab.S * tab.a_frozen;
    for (Eigen::Index c = 0; c < ctx.phi_hat.rows(); ++c) {
      row_of(u_hat, c) = row_of(ctx.phi_hat, c) * tab.C.cast<Complex>() +
                         row_of(ctx.psi_hat, c) * tab.S.cast<Complex>();
      row_of(ut_hat, c) = row_of(ctx.psi_hat, c) * tab.C.cast<Complex>() -
                          row_of(ctx.phi_hat, c) * SA.cast<Complex>();
    }
  } else {
    for (Eigen::Index p = 0; p < P; ++p) {
      const auto& Cp = tab.Cm[static_cast<std::size_t>(p)];
      const auto& Sp = tab.Sm[static_cast<std::size_t>(p)];
      const Eigen::MatrixXcd Axi = ctx.a_op * tab.r[p];
      u_hat.col(p) = Cp * ctx.phi_hat.col(p) + Sp * ctx.psi_hat.col(p);
      ut_hat.col(p) = Cp * ctx.psi_hat.col(p) - Axi * (Sp * ctx.phi_hat.col(p));
    }
  }
}

void add_forcing_level(const LinearContext& ctx, int k, const std::vector<SpecMat>& g_hat,
                       SpecMat& u_hat, SpecMat& ut_hat) {
  if (k == 0) return;
  const std::vector<Real> w = quadrature_weights(k, ctx.dt);
  const Eigen::Index P = ctx.phi_hat.cols();
  for (int j = 0; j <= k; ++j) {
    const KernelTable& tab = ctx.ladder.level[static_cast<std::size_t>(k - j)];
    const SpecMat& g = g_hat[static_cast<std::size_t>(j)];
    const Real wj = w[static_cast<std::size_t>(j)];
    if (ctx.scalar_path) {
      const Eigen::ArrayXd rS = tab.r * tab.S;
      const Eigen::ArrayXd rC = tab.r * tab.C;
      for (Eigen::Index c = 0; c < u_hat.rows(); ++c) {
        row_of(u_hat, c) += wj * row_of(g, c) * rS.cast<Complex>();
        row_of(ut_hat, c) += wj * row_of(g, c) * rC.cast<Complex>();
      }
    } else {
      for (Eigen::Index p = 0; p < P; ++p) {
        const Eigen::VectorXcd rg = tab.r[p] * g.col(p);
        u_hat.col(p) += wj * (tab.Sm[static_cast<std::size_t>(p)] * rg);
        ut_hat.col(p) += wj * (tab.Cm[static_cast<std::size_t>(p)] * rg);
      }
    }
  }
}

NormRecord record_norms(const Field& physical, const Field& spectral, const NormParams& np) {
  NormRecord r;
  r.x1 = lp_norm(physical, 1.0, np.q_inner);
  r.xp = lp_norm(physical, np.p, np.q_inner);
  r.xinf = linf_norm(physical, np.q_inner);
  r.ysp = sobolev_norm_spectral(spectral, np.s, np.p, np.q_inner);
  return r;
}

}  // namespace

std::vector<Real> quadrature_weights(int k, Real dt) {
  std::vector<Real> w;
  if (k <= 0) return w;
  if (k == 1) return {0.5 * dt, 0.5 * dt};
  const int simpson_cells = (k % 2 == 0) ? k : k - 1;
  w.assign(static_cast<std::size_t>(k) + 1, 0.0);
  w[0] = dt / 3.0;
  w[static_cast<std::size_t>(simpson_cells)] = dt / 3.0;
  for (int j = 1; j < simpson_cells; ++j)
    w[static_cast<std::size_t>(j)] = (j % 2 == 1) ? 4.0 * dt / 3.0 : 2.0 * dt / 3.0;
  if (k % 2 == 1) {
    w[static_cast<std::size_t>(k - 1)] += 0.5 * dt;
    w[static_cast<std::size_t>(k)] = 0.5 * dt;
  }
  return w;
}

std::pair<Field, Field> apply_initial_propagators(const KernelTable& table,
                                                  const Field& phi, const Field& psi) {
  require_side(phi, Side::Physical, "apply_initial_propagators");
  require_side(psi, Side::Physical, "apply_initial_propagators");
  require_same_lattice(phi, psi, "apply_initial_propagators");
  if (!phi.grid->same_lattice(*table.grid))
    throw GridMismatch("apply_initial_propagators: table built on another lattice");
  if (phi.components != psi.components)
    throw Error("apply_initial_propagators: phi and psi component counts differ");
  if (!table.scalar_path && phi.components != table.components)
    throw Error("apply_initial_propagators: field does not match operator size");

  LinearContext ctx;
  ctx.grid = phi.grid;
  ctx.scalar_path = table.scalar_path;
  ctx.components = phi.components;
  ctx.phi_hat = to_spectral(phi);
  ctx.psi_hat = to_spectral(psi);
  if (!table.scalar_path) ctx.a_op = table.a_op;
  SpecMat u_hat(ctx.phi_hat.rows(), ctx.phi_hat.cols());
  SpecMat ut_hat(ctx.phi_hat.rows(), ctx.phi_hat.cols());
  homogeneous_level(ctx, table, u_hat, ut_hat);
  return {from_spectral(phi.grid, phi.components, u_hat),
          from_spectral(phi.grid, phi.components, ut_hat)};
}

std::pair<Field, Field> homogeneous_solution(const OperatorSpec& A, const EllipticForm& L,
                                             const Field& phi, const Field& psi, Real t) {
  LinearContext ctx;
  ctx.grid = phi.grid;
  ctx.scalar_path = A.is_scalar();
  ctx.components = phi.components;
  if (!A.is_scalar()) {
    if (phi.components != A.components())
      throw Error("homogeneous_solution: field does not match operator size");
    ctx.a_op = A.matrix_op();
  }
  ctx.phi_hat = to_spectral(phi);
  ctx.psi_hat = to_spectral(psi);
  const KernelTable tab = build_kernel_table(A, L, phi.grid, t);
  SpecMat u_hat(ctx.phi_hat.rows(), ctx.phi_hat.cols());
  SpecMat ut_hat(ctx.phi_hat.rows(), ctx.phi_hat.cols());
  homogeneous_level(ctx, tab, u_hat, ut_hat);
  return {from_spectral(phi.grid, phi.components, u_hat),
          from_spectral(phi.grid, phi.components, ut_hat)};
}

std::pair<Field, Field> duhamel_term(const KernelLadder& ladder, std::span<const Field> g,
                                     Real t) {
  const int k = checked_steps(t, ladder.dt, "duhamel_term");
  if (k > ladder.steps()) throw Error("duhamel_term: t beyond the tabulated ladder");
  if (static_cast<int>(g.size()) < k + 1)
    throw Error("duhamel_term: need forcing samples through t (got " +
                std::to_string(g.size()) + ", need " + std::to_string(k + 1) + ")");

  const int nc = g.empty() ? 1 : g[0].components;
  LinearContext ctx;
  ctx.grid = ladder.grid;
  ctx.ladder = ladder;
  ctx.scalar_path = ladder.level.at(0).scalar_path;
  if (!ctx.scalar_path && nc != ladder.level[0].components)
    throw Error("duhamel_term: forcing does not match operator size");
  ctx.components = nc;
  ctx.dt = ladder.dt;
  ctx.steps = ladder.steps();
  const std::int64_t P = ladder.grid->total_points();
  ctx.phi_hat = SpecMat::Zero(nc, P);
  ctx.psi_hat = SpecMat::Zero(nc, P);

  std::vector<SpecMat> g_hat;
  g_hat.reserve(g.size());
  for (const Field& gj : g) {
    require_side(gj, Side::Physical, "duhamel_term");
    if (!gj.grid->same_lattice(*ladder.grid))
      throw GridMismatch("duhamel_term: forcing on another lattice");
    g_hat.push_back(to_spectral(gj));
  }

  SpecMat u_hat = SpecMat::Zero(nc, P);
  SpecMat ut_hat = SpecMat::Zero(nc, P);
  add_forcing_level(ctx, k, g_hat, u_hat, ut_hat);
  return {from_spectral(ladder.grid, nc, u_hat), from_spectral(ladder.grid, nc, ut_hat)};
}

LinearContext make_linear_context(const OperatorSpec& A, const EllipticForm& L,
                                  const Field& phi, const Field& psi, Real T, Real dt,
                                  const NormParams& params) {
  require_side(phi, Side::Physical, "solve_linear");
  require_side(psi, Side::Physical, "solve_linear");
  require_same_lattice(phi, psi, "solve_linear");
  if (phi.components != psi.components)
    throw Error("solve_linear: phi and psi component counts differ");
  if (!A.is_scalar() && phi.components != A.components())
    throw Error("solve_linear: field does not match operator size");

  LinearContext ctx;
  ctx.grid = phi.grid;
  ctx.scalar_path = A.is_scalar();
  ctx.components = phi.components;
  ctx.steps = checked_steps(T, dt, "solve_linear");
  ctx.dt = dt;
  ctx.params = params;
  if (!A.is_scalar()) ctx.a_op = A.matrix_op();
  ctx.phi_hat = to_spectral(phi);
  ctx.psi_hat = to_spectral(psi);
  ctx.ladder = build_kernel_ladder(A, L, phi.grid, dt, ctx.steps);
  return ctx;
}

SolutionTrace solve_with_forcing(const LinearContext& ctx, const std::vector<SpecMat>& g_hat) {
  const int K = ctx.steps;
  if (!g_hat.empty() && static_cast<int>(g_hat.size()) < K + 1)
    throw Error("solve_with_forcing: need K+1 forcing samples");

  SolutionTrace tr;
  tr.grid = ctx.grid;
  tr.dt = ctx.dt;
  tr.params = ctx.params;
  tr.times.reserve(static_cast<std::size_t>(K) + 1);
  tr.u.reserve(static_cast<std::size_t>(K) + 1);
  tr.ut.reserve(static_cast<std::size_t>(K) + 1);

  SpecMat u_hat(ctx.phi_hat.rows(), ctx.phi_hat.cols());
  SpecMat ut_hat(ctx.phi_hat.rows(), ctx.phi_hat.cols());
  for (int k = 0; k <= K; ++k) {
    const KernelTable& tab = ctx.ladder.level[static_cast<std::size_t>(k)];
    homogeneous_level(ctx, tab, u_hat, ut_hat);
    if (!g_hat.empty()) add_forcing_level(ctx, k, g_hat, u_hat, ut_hat);

    Field u_spec = spectral_field(ctx.grid, ctx.components, u_hat);
    Field ut_spec = spectral_field(ctx.grid, ctx.components, ut_hat);
    Field u = inverse_transform(u_spec);
    Field ut = inverse_transform(ut_spec);
    if (!all_finite(u) || !all_finite(ut))
      throw NonFinite("solve_with_forcing: non-finite sample at time level " +
                          std::to_string(k),
                      k);
    tr.times.push_back(ctx.dt * k);
    tr.u_norms.push_back(record_norms(u, u_spec, ctx.params));
    tr.ut_norms.push_back(record_norms(ut, ut_spec, ctx.params));
    tr.u.push_back(std::move(u));
    tr.ut.push_back(std::move(ut));
  }
  return tr;
}

SolutionTrace solve_linear(const OperatorSpec& A, const EllipticForm& L, const Field& phi,
                           const Field& psi, std::span<const Field> g, Real T, Real dt,
                           const NormParams& params) {
  LinearContext ctx = make_linear_context(A, L, phi, psi, T, dt, params);
  std::vector<SpecMat> g_hat;
  if (!g.empty()) {
    if (static_cast<int>(g.size()) < ctx.steps + 1)
      throw Error("solve_linear: need K+1 forcing samples");
    g_hat.reserve(g.size());
    for (const Field& gj : g) {
      require_side(gj, Side::Physical, "solve_linear");
      if (!gj.grid->same_lattice(*ctx.grid))
        throw GridMismatch("solve_linear: forcing on another lattice");
      g_hat.push_back(to_spectral(gj));
    }
  }
  return solve_with_forcing(ctx, g_hat);
}

EstimateReport verify_linear_estimates(const SolutionTrace& trace, const Field& phi,
                                       const Field& psi, std::span<const Field> g) {
  const NormParams& np = trace.params;
  Real num_sup = 0.0, num_sob = 0.0;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    num_sup = std::max(num_sup, trace.u_norms[k].xinf + trace.ut_norms[k].xinf);
    num_sob = std::max(num_sob, trace.u_norms[k].ysp + trace.ut_norms[k].ysp);
  }

  const Real phi_ysp = sobolev_norm(phi, np.s, np.p, np.q_inner);
  const Real psi_ysp = sobolev_norm(psi, np.s, np.p, np.q_inner);
  const Real phi_x1 = lp_norm(phi, 1.0, np.q_inner);
  const Real psi_x1 = lp_norm(psi, 1.0, np.q_inner);

  Real g_int_sup = 0.0, g_int_sob = 0.0;
  if (!g.empty()) {
    std::vector<Real> f_sup(g.size()), f_sob(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      f_sob[j] = sobolev_norm(g[j], np.s, np.p, np.q_inner);
      f_sup[j] = f_sob[j] + lp_norm(g[j], 1.0, np.q_inner);
    }
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
      g_int_sup += 0.5 * trace.dt * (f_sup[j] + f_sup[j + 1]);
      g_int_sob += 0.5 * trace.dt * (f_sob[j] + f_sob[j + 1]);
    }
  }

  const Real den_sup = phi_ysp + phi_x1 + psi_ysp + psi_x1 + g_int_sup;
  const Real den_sob = phi_ysp + psi_ysp + g_int_sob;

  EstimateReport rep;
  auto ratio = [&](Real num, Real den) {
    if (den > 0.0) return num / den;
    if (num > 0.0) {
      rep.degenerate = true;
      return std::numeric_limits<Real>::infinity();
    }
    return 0.0;
  };
  rep.sup_ratio = ratio(num_sup, den_sup);
  rep.sobolev_ratio = ratio(num_sob, den_sob);
  return rep;
}

SymbolDecayReport symbol_decay_check(const OperatorSpec& A, const EllipticForm& L,
                                     GridPtr grid, Real s, Real p,
                                     std::span<const Real> t_samples) {
  if (t_samples.empty()) throw Error("symbol_decay_check: need at least one time sample");

  const int n = grid->n_dims();
  const int n_alpha = 1 << n;

  auto sup_on = [&](const SpectralGrid& g, std::vector<SymbolDecayReport::Term>* terms) {
    const std::int64_t P = g.total_points();
    std::vector<Real> psi_scalar;
    std::vector<Eigen::MatrixXcd> psi_mat;
    Eigen::VectorXd xi;
    std::vector<Real> alpha_sup(static_cast<std::size_t>(n_alpha), 0.0);

    for (Real t : t_samples) {
      // tabulate Psi over the lattice
      if (A.is_scalar()) {
        psi_scalar.resize(static_cast<std::size_t>(P));
        for (std::int64_t q = 0; q < P; ++q) {
          g.mode_freq(q, xi);
          const Real lv = L(xi);
          psi_scalar[static_cast<std::size_t>(q)] =
              std::pow(1.0 + lv, -0.5 * s) * cosine_kernel(A.symbol(xi) / (1.0 + lv), t);
        }
      } else {
        psi_mat.resize(static_cast<std::size_t>(P));
        for (std::int64_t q = 0; q < P; ++q) {
          g.mode_freq(q, xi);
          const Real lv = L(xi);
          psi_mat[static_cast<std::size_t>(q)] =
              std::pow(1.0 + lv, -0.5 * s) *
              cosine_kernel(Eigen::MatrixXcd(A.matrix_op() / (1.0 + lv)), t);
        }
      }

      auto value_norm = [&](std::int64_t q) -> Real {
        if (A.is_scalar()) return std::abs(psi_scalar[static_cast<std::size_t>(q)]);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(psi_mat[static_cast<std::size_t>(q)]);
        return svd.singularValues().maxCoeff();
      };

      int idx[3];
      for (int am = 0; am < n_alpha; ++am) {
        int order = 0;
        for (int a = 0; a < n; ++a)
          if (am & (1 << a)) ++order;

        for (std::int64_t q = 0; q < P; ++q) {
          g.unflatten(q, idx);
          bool interior = true;
          for (int a = 0; a < n && interior; ++a)
            if ((am & (1 << a)) && (idx[a] == 0 || idx[a] == g.points()[a] - 1))
              interior = false;
          if (!interior) continue;
          g.mode_freq(q, xi);
          const Real xin = xi.norm();
          if (xin == 0.0) continue;

          // centered product stencil over the differentiated axes
          Real fd;
          if (A.is_scalar()) {
            Real acc = 0.0;
            for (int corner = 0; corner < (1 << order); ++corner) {
              std::int64_t off = q;
              Real sgn = 1.0;
              int bit = 0;
              for (int a = 0; a < n; ++a) {
                if (!(am & (1 << a))) continue;
                const bool plus = corner & (1 << bit);
                off += (plus ? 1 : -1) * g.stride(a);
                if (!plus) sgn = -sgn;
                ++bit;
              }
              acc += sgn * psi_scalar[static_cast<std::size_t>(off)];
            }
            Real h = 1.0;
            for (int a = 0; a < n; ++a)
              if (am & (1 << a)) h *= 2.0 * (g.freqs(a)[1] - g.freqs(a)[0]);
            fd = std::abs(acc) / h;
          } else {
            Eigen::MatrixXcd acc =
                Eigen::MatrixXcd::Zero(A.components(), A.components());
            for (int corner = 0; corner < (1 << order); ++corner) {
              std::int64_t off = q;
              Real sgn = 1.0;
              int bit = 0;
              for (int a = 0; a < n; ++a) {
                if (!(am & (1 << a))) continue;
                const bool plus = corner & (1 << bit);
                off += (plus ? 1 : -1) * g.stride(a);
                if (!plus) sgn = -sgn;
                ++bit;
              }
              acc += sgn * psi_mat[static_cast<std::size_t>(off)];
            }
            Real h = 1.0;
            for (int a = 0; a < n; ++a)
              if (am & (1 << a)) h *= 2.0 * (g.freqs(a)[1] - g.freqs(a)[0]);
            if (order == 0) {
              fd = value_norm(q);
            } else {
              Eigen::JacobiSVD<Eigen::MatrixXcd> svd(acc / h);
              fd = svd.singularValues().maxCoeff();
            }
          }
          const Real weight = std::pow(xin, order + n / p);
          alpha_sup[static_cast<std::size_t>(am)] =
              std::max(alpha_sup[static_cast<std::size_t>(am)], weight * fd);
        }
      }
    }

    Real overall = 0.0;
    for (int am = 0; am < n_alpha; ++am) {
      overall = std::max(overall, alpha_sup[static_cast<std::size_t>(am)]);
      if (terms) {
        SymbolDecayReport::Term trm;
        for (int a = 0; a < n; ++a) trm.alpha[static_cast<std::size_t>(a)] = (am >> a) & 1;
        trm.sup = alpha_sup[static_cast<std::size_t>(am)];
        terms->push_back(trm);
      }
    }
    return overall;
  };

  SymbolDecayReport rep;
  rep.sup_value = sup_on(*grid, &rep.terms);

  std::vector<int> fine_points = grid->points();
  for (int& np : fine_points) np *= 2;
  const GridPtr fine = make_grid(fine_points, grid->half_widths());
  rep.sup_refined = sup_on(*fine, nullptr);
  rep.growth_flag = rep.sup_refined > 1.05 * rep.sup_value;
  return rep;
}

}  // namespace bqs
