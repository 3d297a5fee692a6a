#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bqs/errors.hpp"
#include "bqs/fixedpoint.hpp"
#include "bqs/norms.hpp"
#include "bqs/transform.hpp"

#include "test_helpers.hpp"

using namespace bqs;
using bqs::testing::max_abs_diff;

namespace {
constexpr Real kPi = std::numbers::pi_v<Real>;

struct Model {
  GridPtr grid = make_grid(1, 64, kPi);
  OperatorSpec a = OperatorSpec::minus_laplacian();
  EllipticForm l = EllipticForm::identity(1);
  NormParams params;
};

SolutionTrace zero_trace(const Model& m, Real T, Real dt) {
  SolutionTrace t;
  t.grid = m.grid;
  t.dt = dt;
  t.params = m.params;
  const int steps = static_cast<int>(std::lround(T / dt));
  for (int k = 0; k <= steps; ++k) {
    t.times.push_back(k * dt);
    t.u.push_back(make_field(m.grid, 1));
    t.ut.push_back(make_field(m.grid, 1));
    t.u_norms.push_back({});
    t.ut_norms.push_back({});
  }
  return t;
}
}  // namespace

TEST_CASE("amplitude of zero data is zero") {
  Model m;
  Field z = make_field(m.grid, 1);
  CHECK(amplitude_M(z, z, m.params) == 0.0);
}

TEST_CASE("amplitude of constant data is |c| sqrt(2 pi) + |c| per field") {
  Model m;
  Field c = sampled_field(m.grid, 1, [](const Eigen::VectorXd&, Complex* out) {
    out[0] = Complex(2.0, 0.0);
  });
  Field z = make_field(m.grid, 1);
  const Real expect = 2.0 * std::sqrt(2.0 * kPi) + 2.0;
  CHECK(amplitude_M(c, z, m.params) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(amplitude_M(z, c, m.params) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(amplitude_M(c, c, m.params) == doctest::Approx(2.0 * expect).epsilon(1e-12));
}

TEST_CASE("amplitude is homogeneous of degree one") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 0.7, 0.5, {0.2});
  Field psi = gaussian_field(m.grid, 1, 0.3, 0.8);
  const Real base = amplitude_M(phi, psi, m.params);
  const Real twice = amplitude_M(2.0 * phi, 2.0 * psi, m.params);
  CHECK(twice == doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("window length: free evolution gets the cap 1/2 at M = 0") {
  CHECK(window_length(0.0, 0.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("window length: both bounds meet at 1/34 for M = 1, fbar = 4") {
  CHECK(window_length(1.0, 4.0, 1.0, 1.0) == doctest::Approx(1.0 / 34.0).epsilon(1e-15));
}

TEST_CASE("window length shrinks when the data or the majorant grow") {
  Real prev = window_length(0.0, 1.0, 1.0, 1.0);
  for (Real mamp : {0.5, 1.0, 2.0, 4.0}) {
    const Real t = window_length(mamp, 1.0, 1.0, 1.0);
    CHECK(t <= prev * (1.0 + 1e-15));
    prev = t;
  }
  prev = window_length(1.0, 0.0, 1.0, 1.0);
  for (Real fb : {0.5, 1.0, 2.0, 8.0}) {
    const Real t = window_length(1.0, fb, 1.0, 1.0);
    CHECK(t <= prev * (1.0 + 1e-15));
    prev = t;
  }
  CHECK_THROWS_AS(window_length(-1.0, 0.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(window_length(1.0, 0.0, 0.0, 1.0), Error);
}

TEST_CASE("window norm adds the worst Sobolev and sup levels") {
  Model m;
  SolutionTrace t = zero_trace(m, 0.5, 0.25);
  CHECK(window_norm(t) == 0.0);
  t.u_norms[1].ysp = 2.0;
  t.u_norms[2].xinf = 0.5;
  CHECK(window_norm(t) == doctest::Approx(2.5));
  t.u_norms[0].ysp = 1.0;  // not the max, must not change anything
  CHECK(window_norm(t) == doctest::Approx(2.5));
}

TEST_CASE("window norm never decreases when a trace is extended") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 1.0, 0.5);
  Field psi = make_field(m.grid, 1);
  SolutionTrace longer = solve_linear(m.a, m.l, phi, psi, {}, 1.0, 0.125, m.params);
  SolutionTrace shorter = solve_linear(m.a, m.l, phi, psi, {}, 0.5, 0.125, m.params);
  CHECK(window_norm(shorter) <= window_norm(longer) * (1.0 + 1e-14));
}

TEST_CASE("apply_G with zero nonlinearity reproduces the linear solve") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 1.0, 0.5);
  Field psi = gaussian_field(m.grid, 1, 0.2, 0.7);
  const Real T = 0.25, dt = T / 8;
  SolutionTrace linear = solve_linear(m.a, m.l, phi, psi, {}, T, dt, m.params);
  NonlinearitySpec f = NonlinearitySpec::zero(1);
  SolutionTrace g = apply_G(linear, phi, psi, f, m.a, m.l, T, dt, m.params);
  CHECK(trace_distance(g, linear) < 1e-14);
}

TEST_CASE("apply_G of the zero candidate is the linear solve when f(0) = 0") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 0.1, 0.5);
  Field psi = make_field(m.grid, 1);
  const Real T = 0.25, dt = T / 8;
  SolutionTrace zero = zero_trace(m, T, dt);
  NonlinearitySpec f = NonlinearitySpec::power(2, 1.0);
  SolutionTrace g = apply_G(zero, phi, psi, f, m.a, m.l, T, dt, m.params);
  SolutionTrace linear = solve_linear(m.a, m.l, phi, psi, {}, T, dt, m.params);
  CHECK(trace_distance(g, linear) < 1e-13);
}

TEST_CASE("picard with zero nonlinearity converges in one application") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 0.1, 0.5);
  Field psi = make_field(m.grid, 1);
  NonlinearitySpec f = NonlinearitySpec::zero(1);
  const Real T = 0.25, dt = T / 8;
  PicardResult r =
      picard_solve(m.a, m.l, phi, psi, f, T, dt, 1e-10, 10, m.params);
  CHECK(r.window.picard_iters == 1);
  CHECK(r.window.contraction_estimate == 0.0);
  CHECK(r.window.ratio_history.empty());
  SolutionTrace linear = solve_linear(m.a, m.l, phi, psi, {}, T, dt, m.params);
  CHECK(trace_distance(r.trace, linear) < 1e-14);
}

TEST_CASE("picard on a small quadratic problem contracts geometrically") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 0.05, 0.5);
  Field psi = make_field(m.grid, 1);
  NonlinearitySpec f = NonlinearitySpec::power(2, 1.0);
  const Real mamp = amplitude_M(phi, psi, m.params);
  const Real fbar = derivative_majorant(f, mamp + 1.0).value;
  const Real T = window_length(mamp, fbar, 1.0, 1.0);
  const Real dt = T / 32;
  PicardResult r =
      picard_solve(m.a, m.l, phi, psi, f, T, dt, 1e-10, 25, m.params);
  CHECK(r.window.picard_iters <= 25);
  CHECK(!r.window.ball_violation);
  for (Real ratio : r.window.ratio_history) CHECK(ratio < 1.0);
  CHECK(r.window.contraction_estimate < 1.0);

  // the fixed point is a fixed point: one more application moves it by
  // no more than an order above the tolerance
  SolutionTrace again = apply_G(r.trace, phi, psi, f, m.a, m.l, T, dt, m.params);
  CHECK(trace_distance(again, r.trace) <= 1e-9);
}

TEST_CASE("picard hitting the iteration cap throws with the ratio history") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 0.05, 0.5);
  Field psi = make_field(m.grid, 1);
  NonlinearitySpec f = NonlinearitySpec::power(2, 1.0);
  const Real T = 0.05, dt = T / 8;
  CHECK_THROWS_AS(
      picard_solve(m.a, m.l, phi, psi, f, T, dt, 1e-16, 2, m.params),
      MaxItersExceeded);
}

TEST_CASE("two different starting candidates land on the same fixed point") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 0.05, 0.5);
  Field psi = make_field(m.grid, 1);
  NonlinearitySpec f = NonlinearitySpec::power(2, 1.0);
  const Real mamp = amplitude_M(phi, psi, m.params);
  const Real fbar = derivative_majorant(f, mamp + 1.0).value;
  const Real T = window_length(mamp, fbar, 1.0, 1.0);
  const Real dt = T / 32;
  const Real tol = 1e-10;
  PicardResult from_linear =
      picard_solve(m.a, m.l, phi, psi, f, T, dt, tol, 25, m.params);
  SolutionTrace zero = zero_trace(m, T, dt);
  PicardResult from_zero = picard_solve(m.a, m.l, phi, psi, f, T, dt, tol, 25,
                                        m.params, 1.0, 1.0, &zero);
  CHECK(trace_distance(from_linear.trace, from_zero.trace) <= 10.0 * tol);
}

TEST_CASE("contraction probe vanishes for equal candidates and for zero f") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 0.05, 0.5);
  Field psi = make_field(m.grid, 1);
  NonlinearitySpec f = NonlinearitySpec::power(2, 1.0);
  const Real T = 0.1, dt = T / 8;
  SolutionTrace base = solve_linear(m.a, m.l, phi, psi, {}, T, dt, m.params);
  CHECK(contraction_probe(base, base, phi, psi, f, m.a, m.l, T, dt, m.params) == 0.0);

  Field phi2 = gaussian_field(m.grid, 1, 0.03, 0.7, {0.3});
  SolutionTrace other = solve_linear(m.a, m.l, phi2, psi, {}, T, dt, m.params);
  NonlinearitySpec z = NonlinearitySpec::zero(1);
  CHECK(contraction_probe(base, other, phi, psi, z, m.a, m.l, T, dt, m.params) == 0.0);
}

TEST_CASE("continuation with zero nonlinearity glues into the single-shot solution") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 1.0, 0.5);
  Field psi = gaussian_field(m.grid, 1, 0.3, 0.7);
  NonlinearitySpec f = NonlinearitySpec::zero(1);
  ContinuationParams cp;
  cp.horizon = 1.0;
  cp.steps_per_window = 16;
  ContinuationReport rep = continue_solve(m.a, m.l, phi, psi, f, cp);
  REQUIRE(rep.status == RunStatus::Completed);
  CHECK(rep.t_end == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.windows.size() >= 2);
  REQUIRE(rep.window_of_time.size() == rep.trace.times.size());
  for (std::size_t k = 0; k < rep.trace.times.size(); ++k) {
    auto [u, ut] = homogeneous_solution(m.a, m.l, phi, psi, rep.trace.times[k]);
    CHECK(max_abs_diff(rep.trace.u[k], u) < 1e-10);
    CHECK(max_abs_diff(rep.trace.ut[k], ut) < 1e-10);
  }
}

TEST_CASE("continuation of zero data produces an all-zero trace") {
  Model m;
  Field z = make_field(m.grid, 1);
  NonlinearitySpec f = NonlinearitySpec::power(2, 1.0);
  ContinuationParams cp;
  cp.horizon = 1.0;
  cp.steps_per_window = 8;
  ContinuationReport rep = continue_solve(m.a, m.l, z, z, f, cp);
  REQUIRE(rep.status == RunStatus::Completed);
  for (std::size_t k = 0; k < rep.trace.times.size(); ++k) {
    CHECK(bqs::testing::max_abs(rep.trace.u[k]) == 0.0);
    CHECK(rep.trace.u_norms[k].ysp == 0.0);
  }
}

TEST_CASE("continuation reports IterationFailed when the cap is too tight") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 0.05, 0.5);
  Field psi = make_field(m.grid, 1);
  NonlinearitySpec f = NonlinearitySpec::power(2, 1.0);
  ContinuationParams cp;
  cp.horizon = 0.5;
  cp.steps_per_window = 8;
  cp.tol = 1e-15;
  cp.max_iters = 1;
  ContinuationReport rep = continue_solve(m.a, m.l, phi, psi, f, cp);
  CHECK(rep.status == RunStatus::IterationFailed);
  CHECK(rep.failed_window == 0);
  CHECK(!rep.reason.empty());
}

TEST_CASE("a tiny blow-up threshold trips the monitor immediately") {
  Model m;
  Field phi = gaussian_field(m.grid, 1, 1.0, 0.5);
  Field psi = make_field(m.grid, 1);
  NonlinearitySpec f = NonlinearitySpec::power(2, -1.0);
  ContinuationParams cp;
  cp.horizon = 1.0;
  cp.steps_per_window = 8;
  cp.blowup_threshold = 1e-3;
  ContinuationReport rep = continue_solve(m.a, m.l, phi, psi, f, cp);
  CHECK(rep.status == RunStatus::BlowUpSuspected);
  CHECK(rep.blowup_time >= 0.0);
  CHECK(rep.threshold == doctest::Approx(1e-3));
}

TEST_CASE("monitor value sums the four norm channels") {
  Model m;
  SolutionTrace t = zero_trace(m, 0.25, 0.25);
  t.u_norms[0] = {0.0, 0.0, 1.0, 2.0};
  t.ut_norms[0] = {0.0, 0.0, 0.25, 0.5};
  CHECK(monitor_value(t, 0) == doctest::Approx(3.75));
}

TEST_CASE("trace distance demands matching level counts") {
  Model m;
  SolutionTrace a = zero_trace(m, 0.5, 0.25);
  SolutionTrace b = zero_trace(m, 0.25, 0.25);
  CHECK_THROWS_AS(trace_distance(a, b), Error);
}
