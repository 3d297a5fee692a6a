#include "bqs/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bqs/errors.hpp"
#include "bqs/spectral_ops.hpp"
#include "bqs/transform.hpp"

namespace bqs {

namespace {

NormParams window_params(NormParams p) {
  p.s = 2.0;  // the window machinery works in the order-2 Sobolev norm
  return p;
}

std::vector<SpecMat> forcing_of(const LinearContext& ctx, const NonlinearitySpec& f,
                                const SolutionTrace& candidate) {
  if (candidate.levels() != ctx.steps + 1)
    throw Error("apply_G: candidate trace does not match the window step count");
  std::vector<SpecMat> g_hat;
  g_hat.reserve(candidate.u.size());
  for (const Field& u : candidate.u) {
    if (!u.grid->same_lattice(*ctx.grid))
      throw GridMismatch("apply_G: candidate on another lattice");
    // dealias the state, apply f pointwise, dealias the product
    Field u_hat = forward_transform(u);
    auto m = u_hat.matrix();
    dealias_two_thirds_rows(*ctx.grid, m);
    const Field w = apply_pointwise(f, inverse_transform(u_hat));
    Field w_hat = forward_transform(w);
    auto wm = w_hat.matrix();
    dealias_two_thirds_rows(*ctx.grid, wm);
    g_hat.push_back(w_hat.matrix());
  }
  return g_hat;
}

Real certified_window(const Field& phi, const Field& psi, const NonlinearitySpec& f,
                      const NormParams& params, Real c0, Real c1, Real* m_out,
                      Real* fbar_out, bool* sampled_out) {
  const Real m = amplitude_M(phi, psi, params);
  const MajorantResult fb = derivative_majorant(f, m + 1.0);
  if (m_out) *m_out = m;
  if (fbar_out) *fbar_out = fb.value;
  if (sampled_out) *sampled_out = fb.sampled_lower_bound;
  Real t = window_length(m, fb.value, c0, c1);
  if (fb.sampled_lower_bound) t *= 0.5;  // sampled majorant is a lower bound
  return t;
}

}  // namespace

Real amplitude_M(const Field& phi, const Field& psi, const NormParams& params) {
  const NormParams wp = window_params(params);
  return sobolev_norm(phi, wp.s, wp.p, wp.q_inner) + linf_norm(phi, wp.q_inner) +
         sobolev_norm(psi, wp.s, wp.p, wp.q_inner) + linf_norm(psi, wp.q_inner);
}

Real window_length(Real m_amplitude, Real fbar_m1, Real c0, Real c1) {
  if (!(m_amplitude >= 0.0) || !std::isfinite(m_amplitude))
    throw Error("window_length: amplitude must be finite and >= 0");
  if (!(fbar_m1 >= 0.0)) throw Error("window_length: majorant must be >= 0");
  if (!(c0 > 0.0) || !(c1 > 0.0)) throw Error("window_length: constants must be positive");
  const Real m1 = m_amplitude + 1.0;
  const Real bound1 = 1.0 / (m1 * (1.0 + 2.0 * c0 * m1 * fbar_m1));
  const Real bound2 = 0.5 / (1.0 + c1 * m1 * m1 * fbar_m1);
  return std::min(bound1, bound2);
}

Real window_norm(const SolutionTrace& trace) {
  Real max_ysp = 0.0, max_inf = 0.0;
  for (const NormRecord& r : trace.u_norms) {
    max_ysp = std::max(max_ysp, r.ysp);
    max_inf = std::max(max_inf, r.xinf);
  }
  return max_ysp + max_inf;
}

Real trace_distance(const SolutionTrace& a, const SolutionTrace& b) {
  if (a.levels() != b.levels())
    throw Error("trace_distance: traces store different level counts");
  const NormParams wp = window_params(a.params);
  Real max_ysp = 0.0, max_inf = 0.0;
  for (int k = 0; k < a.levels(); ++k) {
    const Field d = a.u[static_cast<std::size_t>(k)] - b.u[static_cast<std::size_t>(k)];
    max_ysp = std::max(max_ysp, sobolev_norm(d, wp.s, wp.p, wp.q_inner));
    max_inf = std::max(max_inf, linf_norm(d, wp.q_inner));
  }
  return max_ysp + max_inf;
}

Real monitor_value(const SolutionTrace& trace, int level) {
  const auto k = static_cast<std::size_t>(level);
  return trace.u_norms[k].ysp + trace.u_norms[k].xinf + trace.ut_norms[k].ysp +
         trace.ut_norms[k].xinf;
}

SolutionTrace apply_G(const SolutionTrace& candidate, const Field& phi, const Field& psi,
                      const NonlinearitySpec& f, const OperatorSpec& A,
                      const EllipticForm& L, Real T, Real dt, const NormParams& params) {
  const LinearContext ctx =
      make_linear_context(A, L, phi, psi, T, dt, window_params(params));
  return solve_with_forcing(ctx, forcing_of(ctx, f, candidate));
}

PicardResult picard_solve(const OperatorSpec& A, const EllipticForm& L, const Field& phi,
                          const Field& psi, const NonlinearitySpec& f, Real T, Real dt,
                          Real tol, int max_iters, const NormParams& params, Real c0,
                          Real c1, const SolutionTrace* initial) {
  if (!(tol > 0.0)) throw Error("picard_solve: tol must be positive");
  if (max_iters < 1) throw Error("picard_solve: max_iters must be >= 1");

  SolveWindow win;
  win.length = T;
  win.dt = dt;
  win.c0 = c0;
  win.c1 = c1;
  const Real t_cert = certified_window(phi, psi, f, params, c0, c1, &win.m_amplitude,
                                       &win.fbar_m1, &win.fbar_sampled);
  if (T > t_cert * (1.0 + 1e-9))
    throw Error("picard_solve: T exceeds the certified window length " +
                std::to_string(t_cert));

  const LinearContext ctx =
      make_linear_context(A, L, phi, psi, T, dt, window_params(params));
  SolutionTrace u_prev =
      initial ? *initial : solve_with_forcing(ctx, std::vector<SpecMat>{});
  const Real ball = win.m_amplitude + 1.0;

  Real d_prev = -1.0;
  for (int it = 1; it <= max_iters; ++it) {
    SolutionTrace u_next = solve_with_forcing(ctx, forcing_of(ctx, f, u_prev));
    const Real d = trace_distance(u_next, u_prev);
    if (d_prev > 0.0) win.ratio_history.push_back(d / d_prev);
    if (window_norm(u_next) > ball * (1.0 + 1e-9)) win.ball_violation = true;
    if (d <= tol) {
      win.picard_iters = it;
      win.contraction_estimate =
          win.ratio_history.empty()
              ? 0.0
              : *std::max_element(win.ratio_history.begin(), win.ratio_history.end());
      return {std::move(u_next), std::move(win)};
    }
    u_prev = std::move(u_next);
    d_prev = d;
  }
  throw MaxItersExceeded("picard_solve: no convergence after " +
                             std::to_string(max_iters) + " iterations",
                         win.ratio_history);
}

Real contraction_probe(const SolutionTrace& u1, const SolutionTrace& u2, const Field& phi,
                       const Field& psi, const NonlinearitySpec& f, const OperatorSpec& A,
                       const EllipticForm& L, Real T, Real dt, const NormParams& params) {
  const Real d = trace_distance(u1, u2);
  if (d == 0.0) return 0.0;
  const LinearContext ctx =
      make_linear_context(A, L, phi, psi, T, dt, window_params(params));
  const SolutionTrace g1 = solve_with_forcing(ctx, forcing_of(ctx, f, u1));
  const SolutionTrace g2 = solve_with_forcing(ctx, forcing_of(ctx, f, u2));
  return trace_distance(g1, g2) / d;
}

ContinuationReport continue_solve(const OperatorSpec& A, const EllipticForm& L,
                                  const Field& phi, const Field& psi,
                                  const NonlinearitySpec& f, const ContinuationParams& cp) {
  if (!(cp.horizon > 0.0)) throw Error("continue_solve: horizon must be positive");
  if (!f.zero_at_zero())
    throw Error("continue_solve: nonlinearity must vanish at zero state");

  ContinuationReport rep;
  const NormParams wp = window_params(cp.norms);

  // monitor at t = 0 fixes the automatic threshold
  const Real phi0 = sobolev_norm(phi, wp.s, wp.p, wp.q_inner) + linf_norm(phi, wp.q_inner) +
                    sobolev_norm(psi, wp.s, wp.p, wp.q_inner) + linf_norm(psi, wp.q_inner);
  rep.threshold = cp.blowup_threshold > 0.0 ? cp.blowup_threshold : 1e6 * (1.0 + phi0);

  Field phi_c = phi;
  Field psi_c = psi;
  Real t_cur = 0.0;
  const Real t_eps = 1e-12 * cp.horizon;
  const int max_windows = 100000;

  while (t_cur < cp.horizon - t_eps) {
    if (static_cast<int>(rep.windows.size()) >= max_windows) {
      rep.status = RunStatus::IterationFailed;
      rep.failed_window = static_cast<int>(rep.windows.size());
      rep.reason = "window budget exhausted (lengths collapsed)";
      rep.t_end = t_cur;
      return rep;
    }

    Real t_win = certified_window(phi_c, psi_c, f, wp, cp.c0, cp.c1, nullptr, nullptr,
                                  nullptr);
    t_win = std::min(t_win, cp.horizon - t_cur);

    PicardResult pr;
    bool solved = false;
    std::vector<Real> last_ratios;
    for (int attempt = 0; attempt < 8 && !solved; ++attempt) {
      if (t_win < 1e-13 * cp.horizon) break;
      int steps;
      if (cp.dt > 0.0) {
        steps = static_cast<int>(std::ceil(t_win / cp.dt));
        steps += steps % 2;
        steps = std::max(steps, 2);
      } else {
        steps = std::max(2, cp.steps_per_window);
      }
      const Real dt_w = t_win / steps;
      try {
        pr = picard_solve(A, L, phi_c, psi_c, f, t_win, dt_w, cp.tol, cp.max_iters, wp,
                          cp.c0, cp.c1);
        solved = true;
      } catch (const MaxItersExceeded& e) {
        last_ratios = {e.ratio_history.begin(), e.ratio_history.end()};
        t_win *= 0.5;  // observed ratio too large: recalibrate the window
      } catch (const NonFinite&) {
        t_win *= 0.5;
      }
    }
    if (!solved) {
      rep.status = RunStatus::IterationFailed;
      rep.failed_window = static_cast<int>(rep.windows.size());
      rep.t_end = t_cur;
      std::ostringstream os;
      os << "picard iteration failed near t = " << t_cur;
      if (!last_ratios.empty()) os << " (last ratio " << last_ratios.back() << ")";
      rep.reason = os.str();
      return rep;
    }

    pr.window.start_time = t_cur;
    const int w_idx = static_cast<int>(rep.windows.size());
    rep.windows.push_back(pr.window);

    // glue, skipping the seam level after the first window
    const int k0 = rep.trace.times.empty() ? 0 : 1;
    if (rep.trace.times.empty()) {
      rep.trace.grid = pr.trace.grid;
      rep.trace.params = pr.trace.params;
      rep.trace.dt = pr.trace.dt;
    }
    for (int k = k0; k < pr.trace.levels(); ++k) {
      const auto ks = static_cast<std::size_t>(k);
      rep.trace.times.push_back(t_cur + pr.trace.times[ks]);
      rep.trace.u.push_back(pr.trace.u[ks]);
      rep.trace.ut.push_back(pr.trace.ut[ks]);
      rep.trace.u_norms.push_back(pr.trace.u_norms[ks]);
      rep.trace.ut_norms.push_back(pr.trace.ut_norms[ks]);
      rep.window_of_time.push_back(w_idx);
    }
    // blow-up monitor over the freshly stored levels
    for (int k = 0; k < pr.trace.levels(); ++k) {
      if (monitor_value(pr.trace, k) > rep.threshold) {
        rep.status = RunStatus::BlowUpSuspected;
        rep.blowup_time = t_cur + pr.trace.times[static_cast<std::size_t>(k)];
        rep.t_end = rep.blowup_time;
        return rep;
      }
    }

    phi_c = pr.trace.u.back();
    psi_c = pr.trace.ut.back();
    t_cur += pr.window.length;
  }

  rep.status = RunStatus::Completed;
  rep.t_end = cp.horizon;
  return rep;
}

}  // namespace bqs
