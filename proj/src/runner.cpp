#include "bqs/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bqs/analysis_checks.hpp"
#include "bqs/errors.hpp"
#include "bqs/field_io.hpp"
#include "bqs/fixedpoint.hpp"
#include "bqs/kernel_table.hpp"
#include "bqs/norms.hpp"
#include "bqs/transform.hpp"

namespace bqs {
namespace {

using nlohmann::json;

OperatorSpec build_operator(const ScenarioConfig& cfg) {
  if (cfg.operator_kind == "scalar_symbol") {
    if (cfg.operator_symbol == "minus_laplacian") return OperatorSpec::minus_laplacian();
    if (cfg.operator_symbol == "constant")
      return OperatorSpec::constant(cfg.operator_constant);
    throw ConfigError("key 'operator.symbol': unknown symbol '" + cfg.operator_symbol + "'",
                      -1, "operator.symbol");
  }
  const int nsz = cfg.operator_size;
  if (!cfg.operator_matrix.empty()) {
    Eigen::MatrixXcd A(nsz, nsz);
    for (int i = 0; i < nsz; ++i)
      for (int j = 0; j < nsz; ++j)
        A(i, j) = cfg.operator_matrix[static_cast<std::size_t>(i * nsz + j)];
    return OperatorSpec::matrix(A);
  }
  Eigen::VectorXd g = Eigen::VectorXd::Ones(nsz);
  for (std::size_t i = 0; i < cfg.operator_g.size(); ++i)
    g[static_cast<Eigen::Index>(i)] = cfg.operator_g[i];
  return OperatorSpec::weighted_matrix(g, cfg.operator_s_weight);
}

std::vector<QuadraticTerm> parse_coupling(const std::string& text, int components) {
  std::vector<QuadraticTerm> terms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    int m = 0, j = 0, k = 0;
    double c = 0.0;
    if (std::sscanf(item.c_str(), " %d : %d : %d : %lf", &m, &j, &k, &c) != 4)
      throw ConfigError("key 'nonlinearity.coupling': expected 'm:j:k:c' entries, got '" +
                            item + "'",
                        -1, "nonlinearity.coupling");
    if (m < 1 || m > components || j < 1 || j > components || k < 1 || k > components)
      throw ConfigError("key 'nonlinearity.coupling': component index out of range in '" +
                            item + "'",
                        -1, "nonlinearity.coupling");
    terms.push_back({m - 1, j - 1, k - 1, c});
  }
  if (terms.empty())
    throw ConfigError("key 'nonlinearity.coupling': no terms", -1, "nonlinearity.coupling");
  return terms;
}

NonlinearitySpec build_nonlinearity(const ScenarioConfig& cfg, int components) {
  if (cfg.nonlinearity == "zero") return NonlinearitySpec::zero(components);
  if (cfg.nonlinearity == "coupled_poly")
    return NonlinearitySpec::coupled_quadratic(
        components, parse_coupling(cfg.nl_coupling, components), cfg.q_inner);
  if (components != 1)
    throw ConfigError("key 'nonlinearity.name': '" + cfg.nonlinearity +
                          "' acts on one component; a system needs coupled_poly",
                      -1, "nonlinearity.name");
  if (cfg.nonlinearity == "quadratic") return NonlinearitySpec::power(2, cfg.nl_sign);
  if (cfg.nonlinearity == "cubic") return NonlinearitySpec::power(3, cfg.nl_sign);
  return NonlinearitySpec::scalar_poly(cfg.nl_c2, cfg.nl_c3);  // quadratic_cubic
}

Field build_initial(const InitialDataConfig& d, GridPtr grid, int components,
                    const char* which) {
  const auto key = [&](const char* leaf) { return std::string(which) + "." + leaf; };
  if (d.kind == "zero") return make_field(grid, components);
  if (d.kind == "gaussian")
    return gaussian_field(grid, components, d.amplitude, d.width, d.center);
  if (d.kind == "mode") {
    std::vector<int> k = d.mode;
    if (k.empty()) k.assign(static_cast<std::size_t>(grid->n_dims()), 0);
    if (static_cast<int>(k.size()) == 1 && grid->n_dims() > 1)
      k.assign(static_cast<std::size_t>(grid->n_dims()), k[0]);
    return mode_field(grid, components, k, d.amplitude);
  }
  auto [f, time] = read_snapshot(d.path);
  (void)time;
  if (!f.grid->same_lattice(*grid))
    throw ConfigError("key '" + key("path") + "': snapshot lattice does not match the grid",
                      -1, key("path"));
  if (f.components != components)
    throw ConfigError("key '" + key("path") + "': snapshot has " +
                          std::to_string(f.components) + " components, scenario needs " +
                          std::to_string(components),
                      -1, key("path"));
  if (f.side == Side::Spectral) f = inverse_transform(f);
  f.grid = grid;
  return f;
}

// --- emission --------------------------------------------------------------

json window_json(const SolveWindow& w) {
  json j;
  j["start_time"] = w.start_time;
  j["length"] = w.length;
  j["dt"] = w.dt;
  j["m_amplitude"] = w.m_amplitude;
  j["fbar_m1"] = w.fbar_m1;
  j["fbar_sampled"] = w.fbar_sampled;
  j["picard_iters"] = w.picard_iters;
  j["contraction_estimate"] = w.contraction_estimate;
  j["ratio_history"] = w.ratio_history;
  return j;
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::BlowUpSuspected: return "blowup_suspected";
    default: return "iteration_failed";
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

void emit_snapshots(const ScenarioConfig& cfg, const SolutionTrace& trace) {
  if (cfg.snapshot_stride <= 0) return;
  char name[64];
  for (int k = 0; k < trace.levels(); k += cfg.snapshot_stride) {
    std::snprintf(name, sizeof(name), "_u_%06d.bqs", k);
    write_snapshot(cfg.snapshot_prefix + name, trace.u[static_cast<std::size_t>(k)],
                   trace.times[static_cast<std::size_t>(k)]);
    std::snprintf(name, sizeof(name), "_ut_%06d.bqs", k);
    write_snapshot(cfg.snapshot_prefix + name, trace.ut[static_cast<std::size_t>(k)],
                   trace.times[static_cast<std::size_t>(k)]);
  }
}

void emit_run_outputs(const ScenarioConfig& cfg, const ContinuationReport& rep, bool quiet,
                      std::ostream& out) {
  const bool windowed = !rep.windows.empty();
  if (!cfg.csv_path.empty())
    write_trace_csv(cfg.csv_path, rep.trace, windowed ? &rep.window_of_time : nullptr,
                    windowed ? &rep.windows : nullptr);
  emit_snapshots(cfg, rep.trace);

  if (!cfg.report_path.empty()) {
    json j;
    j["status"] = status_name(rep.status);
    j["exit_code"] = static_cast<int>(rep.status);
    j["t_end"] = rep.t_end;
    j["threshold"] = rep.threshold;
    j["stored_times"] = rep.trace.levels();
    if (rep.blowup_time >= 0.0) j["blowup_time"] = rep.blowup_time;
    if (rep.failed_window >= 0) j["failed_window"] = rep.failed_window;
    if (!rep.reason.empty()) j["reason"] = rep.reason;
    j["windows"] = json::array();
    for (const SolveWindow& w : rep.windows) j["windows"].push_back(window_json(w));
    j["warnings"] = cfg.warnings;
    write_text_file(cfg.report_path, j.dump(2) + "\n");
  }

  if (quiet) return;
  out << "status: " << status_name(rep.status) << "\n";
  out << "t_end: " << rep.t_end << "\n";
  out << "windows: " << rep.windows.size() << "\n";
  if (rep.blowup_time >= 0.0) out << "blowup_time: " << rep.blowup_time << "\n";
  if (!rep.reason.empty()) out << "reason: " << rep.reason << "\n";
  if (rep.trace.levels() > 0) {
    const NormRecord& last = rep.trace.u_norms.back();
    out << "final |u|_inf: " << last.xinf << "  |u|_Ysp: " << last.ysp << "\n";
  }
}

// --- run / linear ----------------------------------------------------------

int run_solve(const ScenarioConfig& cfg, const BuiltScenario& sc, bool force_linear,
              bool quiet, std::ostream& out) {
  NormParams params;
  params.p = cfg.p;
  params.q_inner = cfg.q_inner;
  params.s = cfg.s_norm;

  const bool linear = force_linear || sc.f.name() == "zero";
  if (linear) {
    int steps;
    if (cfg.dt > 0.0) {
      steps = std::max(1, static_cast<int>(std::lround(cfg.horizon / cfg.dt)));
    } else {
      steps = 128;
    }
    const Real dt = cfg.horizon / steps;
    ContinuationReport rep;
    rep.status = RunStatus::Completed;
    rep.trace = solve_linear(sc.op, sc.form, sc.phi, sc.psi, {}, cfg.horizon, dt, params);
    rep.t_end = cfg.horizon;
    emit_run_outputs(cfg, rep, quiet, out);
    return 0;
  }

  ContinuationParams cp;
  cp.horizon = cfg.horizon;
  cp.blowup_threshold = cfg.blowup_threshold;
  cp.dt = cfg.dt;
  cp.steps_per_window = cfg.steps_per_window;
  cp.tol = cfg.tol;
  cp.max_iters = cfg.max_iters;
  cp.c0 = cfg.c0;
  cp.c1 = cfg.c1;
  cp.norms = params;
  const ContinuationReport rep = continue_solve(sc.op, sc.form, sc.phi, sc.psi, sc.f, cp);
  emit_run_outputs(cfg, rep, quiet, out);
  return static_cast<int>(rep.status);
}

// --- check -----------------------------------------------------------------

json inequality_json(const InequalityReport& r) {
  json j;
  j["name"] = r.name;
  j["samples"] = r.samples;
  j["worst_ratio"] = r.worst_ratio;
  j["empirical_constant"] = r.empirical_constant;
  j["pass"] = r.bounded;
  j["refinement_trend"] = json::array();
  for (const auto& [param, ratio] : r.trend)
    j["refinement_trend"].push_back({{"parameter", param}, {"ratio", ratio}});
  return j;
}

void print_report_line(std::ostream& out, const InequalityReport& r) {
  out << (r.bounded ? "pass" : "FAIL") << "  " << r.name << ": worst ratio "
      << r.worst_ratio << " over " << r.samples << " samples\n";
}

InequalityReport cosine_identity_report(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  std::uniform_real_distribution<Real> uni(0.0, 3.0);
  InequalityReport rep;
  rep.name = "cosine_addition_identity";
  const int matrices = 10, pair_count = 100;
  for (int trial = 0; trial < matrices; ++trial) {
    Eigen::MatrixXd b(3, 3);
    for (int i = 0; i < 9; ++i) b(i / 3, i % 3) = gauss(rng);
    const Eigen::MatrixXcd m = (b.transpose() * b).cast<Complex>();
    std::vector<std::pair<Real, Real>> pairs(pair_count);
    for (auto& ts : pairs) ts = {uni(rng), uni(rng)};
    const Real res = cosine_identity_residual(m, pairs);
    rep.worst_ratio = std::max(rep.worst_ratio, res);
    rep.trend.push_back({static_cast<Real>(trial), res});
    rep.samples += pair_count;
  }
  rep.empirical_constant = rep.worst_ratio;
  rep.bounded = rep.worst_ratio < 1e-9;
  return rep;
}

int run_checks(const ScenarioConfig& cfg, const BuiltScenario& sc, std::uint64_t seed,
               bool quiet, std::ostream& out) {
  std::vector<InequalityReport> reports;

  reports.push_back(cosine_identity_report(seed));

  const Real lambdas[] = {0.5, 1.0, 2.0, 4.0};
  reports.push_back(interpolation_sweep(sc.grid, 1, 2, cfg.p, cfg.p, lambdas));

  // Composition probes need a nonlinearity with derivatives; substitute a
  // quadratic when the scenario is linear.
  const NonlinearitySpec probe_f =
      sc.f.name() == "zero" ? NonlinearitySpec::power(2) : sc.f;
  const Real amplitudes[] = {0.25, 0.5, 1.0, 2.0};
  for (int k = 0; k <= 2; ++k) {
    InequalityReport r = composition_sweep(sc.grid, probe_f, k, cfg.p, amplitudes);
    reports.push_back(std::move(r));
  }

  const Real t_samples[] = {0.25, 0.75, 1.5};
  const SymbolDecayReport decay =
      symbol_decay_check(sc.op, sc.form, sc.grid, cfg.s_norm, cfg.p, t_samples);
  InequalityReport decay_rep;
  decay_rep.name = "multiplier_decay";
  decay_rep.samples = static_cast<int>(decay.terms.size());
  decay_rep.worst_ratio = decay.sup_value;
  decay_rep.empirical_constant = decay.sup_refined;
  decay_rep.trend.push_back({1.0, decay.sup_value});
  decay_rep.trend.push_back({2.0, decay.sup_refined});
  decay_rep.bounded = !decay.growth_flag;
  reports.push_back(decay_rep);

  json j;
  j["reports"] = json::array();
  for (const InequalityReport& r : reports) {
    j["reports"].push_back(inequality_json(r));
    if (!quiet) print_report_line(out, r);
  }

  if (!sc.op.is_scalar()) {
    const ResolventReport res =
        resolvent_bound_check(sc.op, cfg.check_c0, cfg.check_omega, cfg.check_samples);
    json rj;
    rj["name"] = "resolvent_bound";
    rj["max_violation"] = res.max_violation;
    rj["witness_re"] = res.witness.real();
    rj["witness_im"] = res.witness.imag();
    rj["samples"] = res.samples_used;
    rj["singular_hit"] = res.singular_hit;
    rj["pass"] = res.pass;
    j["resolvent"] = rj;
    if (!quiet)
      out << (res.pass ? "pass" : "FAIL") << "  resolvent_bound: max violation "
          << res.max_violation << "\n";
  }

  j["warnings"] = cfg.warnings;
  if (!cfg.report_path.empty()) write_text_file(cfg.report_path, j.dump(2) + "\n");
  return 0;
}

// --- convergence -----------------------------------------------------------

Real final_gap_xinf(const SolutionTrace& coarse, const SolutionTrace& ref) {
  // compare at the final time: an even step count there keeps the forcing
  // quadrature on the pure-Simpson path at every swept dt
  const Field diff = coarse.u.back() - ref.u.back();
  return linf_norm(diff, coarse.params.q_inner);
}

int run_convergence(const ScenarioConfig& cfg, const BuiltScenario& sc, bool quiet,
                    std::ostream& out) {
  NormParams params;
  params.p = cfg.p;
  params.q_inner = cfg.q_inner;
  params.s = cfg.s_norm;
  const Real T = cfg.horizon;

  std::ostringstream csv;
  csv << "sweep,parameter,error,order\n";

  // Forcing-quadrature sweep: g(x, t) = profile(x) cos t against a fine
  // reference solve.
  Field profile = sc.phi;
  if (linf_norm(profile, params.q_inner) == 0.0)
    profile = gaussian_field(sc.grid, sc.components, 1.0, sc.grid->half_widths()[0] / 6.0);
  const auto forced = [&](int steps) {
    const Real dt = T / steps;
    std::vector<Field> g;
    g.reserve(static_cast<std::size_t>(steps) + 1);
    for (int j = 0; j <= steps; ++j) g.push_back(std::cos(j * dt) * profile);
    return solve_linear(sc.op, sc.form, sc.phi, sc.psi, g, T, dt, params);
  };
  const int ref_steps = 1024;
  const SolutionTrace ref = forced(ref_steps);
  if (!quiet) out << "forcing quadrature (dt refinement, horizon " << T << ")\n";
  Real prev_err = 0.0;
  for (int steps = 32; steps <= 256; steps *= 2) {
    const Real err = final_gap_xinf(forced(steps), ref);
    const Real order = prev_err > 0.0 && err > 0.0 ? std::log2(prev_err / err) : 0.0;
    if (!quiet) {
      out << "  dt = " << T / steps << "  error = " << err;
      if (order != 0.0) out << "  observed order = " << order;
      out << "\n";
    }
    csv << "dt," << T / steps << ',' << err << ',' << order << '\n';
    prev_err = err;
  }

  // Grid sweep: homogeneous solve against the same data on a refined
  // lattice, compared at shared physical points at the final time.
  if (cfg.phi.kind == "file" || cfg.psi.kind == "file") {
    if (!quiet) out << "grid refinement skipped: file data is tied to its lattice\n";
    if (!cfg.csv_path.empty()) write_text_file(cfg.csv_path, csv.str());
    return 0;
  }
  const int n = sc.grid->n_dims();
  const int base = std::max(16, cfg.points[0] / 4);
  const auto solve_at = [&](int pts) {
    GridPtr g = make_grid(n, pts, cfg.half_widths[0]);
    const InitialDataConfig* src[] = {&cfg.phi, &cfg.psi};
    Field data[2] = {make_field(g, sc.components), make_field(g, sc.components)};
    for (int i = 0; i < 2; ++i)
      data[i] = build_initial(*src[i], g, sc.components, i == 0 ? "phi" : "psi");
    return solve_linear(sc.op, sc.form, data[0], data[1], {}, T, T / 16.0, params);
  };
  const int fine_pts = base * 8;
  const SolutionTrace fine = solve_at(fine_pts);
  if (!quiet) out << "grid refinement (shared-point error at t = " << T << ")\n";
  prev_err = 0.0;
  for (int pts = base; pts <= base * 4; pts *= 2) {
    const SolutionTrace coarse = solve_at(pts);
    const Field& uc = coarse.u.back();
    const Field& uf = fine.u.back();
    const int stride = fine_pts / pts;
    Real err = 0.0;
    for (int c = 0; c < uc.components; ++c)
      for (std::int64_t m = 0; m < uc.points(); ++m) {
        // shared points require matching multi-indices axis by axis
        std::int64_t rem = m, fm = 0;
        for (int ax = 0; ax < n; ++ax) {
          const std::int64_t idx = rem / uc.grid->stride(ax);
          rem %= uc.grid->stride(ax);
          fm += idx * stride * uf.grid->stride(ax);
        }
        err = std::max(err, std::abs(uc.at(c, m) - uf.at(c, fm)));
      }
    const Real ratio = prev_err > 0.0 && err > 0.0 ? prev_err / err : 0.0;
    if (!quiet) {
      out << "  points = " << pts << "  error = " << err;
      if (ratio != 0.0) out << "  reduction = " << ratio;
      out << "\n";
    }
    csv << "grid," << pts << ',' << err << ',' << ratio << '\n';
    prev_err = err;
  }

  if (!cfg.csv_path.empty()) write_text_file(cfg.csv_path, csv.str());
  return 0;
}

}  // namespace

BuiltScenario build_scenario(const ScenarioConfig& cfg) {
  GridPtr grid = make_grid(cfg.points, cfg.half_widths);

  Eigen::MatrixXd coeffs;
  const int n = cfg.n_dims;
  if (cfg.elliptic_coeffs.empty()) {
    coeffs = Eigen::MatrixXd::Identity(n, n);
  } else {
    coeffs.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        coeffs(i, j) = cfg.elliptic_coeffs[static_cast<std::size_t>(i * n + j)];
  }
  EllipticForm form(coeffs);

  OperatorSpec op = build_operator(cfg);
  const int components = op.is_scalar() ? 1 : op.components();
  NonlinearitySpec f = build_nonlinearity(cfg, components);
  Field phi = build_initial(cfg.phi, grid, components, "phi");
  Field psi = build_initial(cfg.psi, grid, components, "psi");
  return {grid, std::move(form), std::move(op), std::move(f), std::move(phi),
          std::move(psi), components};
}

int run_scenario(const ScenarioConfig& cfg, RunMode mode, std::uint64_t seed, bool quiet,
                 std::ostream& out) {
  const BuiltScenario sc = build_scenario(cfg);
  if (!quiet)
    for (const std::string& w : cfg.warnings) out << "warning: " << w << "\n";
  switch (mode) {
    case RunMode::Check: return run_checks(cfg, sc, seed, quiet, out);
    case RunMode::Convergence: return run_convergence(cfg, sc, quiet, out);
    case RunMode::Linear: return run_solve(cfg, sc, true, quiet, out);
    default: return run_solve(cfg, sc, false, quiet, out);
  }
}

}  // namespace bqs
