#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bqs/elliptic.hpp"
#include "bqs/errors.hpp"
#include "bqs/kernel_table.hpp"
#include "bqs/operator_model.hpp"
#include "bqs/trig_kernels.hpp"

using namespace bqs;

namespace {
constexpr Real kPi = std::numbers::pi_v<Real>;

Eigen::MatrixXcd random_sym_psd(std::mt19937_64& rng, int n) {
  std::normal_distribution<Real> gauss;
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = gauss(rng);
  Eigen::MatrixXd m = b.transpose() * b;
  return m.cast<Complex>();
}
}  // namespace

TEST_CASE("scalar kernels at the landmark arguments") {
  CHECK(cosine_kernel(0.0, 1.3) == 1.0);
  CHECK(sine_kernel(0.0, 0.7) == 0.7);
  CHECK(cosine_kernel(1.0, kPi) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(sine_kernel(1.0, kPi)) < 1e-15);
  const Real w = 1.0 / std::sqrt(2.0);
  CHECK(sine_kernel(0.5, 1.0) == doctest::Approx(std::sin(w) / w).epsilon(1e-15));
}

TEST_CASE("matrix kernels of M = 0 are the straight lines I and tI") {
  const Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(3, 3);
  const Eigen::MatrixXcd c = cosine_kernel(z, 2.1);
  const Eigen::MatrixXcd s = sine_kernel(z, 0.7);
  CHECK((c - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((s - 0.7 * Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("nilpotent Jordan block terminates the series exactly") {
  Eigen::MatrixXcd m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  for (Real t : {0.3, 1.0, 1.7, 2.6}) {
    const Eigen::MatrixXcd c = cosine_kernel(m, t);
    const Eigen::MatrixXcd s = sine_kernel(m, t);
    Eigen::MatrixXcd cx(2, 2), sx(2, 2);
    cx << 1.0, -t * t / 2.0, 0.0, 1.0;
    sx << t, -t * t * t / 6.0, 0.0, t;
    CHECK((c - cx).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((s - sx).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("1x1 matrix kernels agree with the scalar closed forms") {
  for (Real m : {0.0, 0.3, 2.0, 17.0}) {
    for (Real t : {0.1, 1.0, 2.9}) {
      Eigen::MatrixXcd mm(1, 1);
      mm(0, 0) = m;
      CHECK(std::abs(cosine_kernel(mm, t)(0, 0) - cosine_kernel(m, t)) < 1e-13);
      CHECK(std::abs(sine_kernel(mm, t)(0, 0) - sine_kernel(m, t)) < 1e-13);
    }
  }
}

TEST_CASE("d'Alembert functional equation holds for random PSD matrices") {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<Real> uni(0.0, 3.0);
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::MatrixXcd m = random_sym_psd(rng, 3);
    for (int k = 0; k < 25; ++k) {
      const Real t = uni(rng), s = uni(rng);
      const Eigen::MatrixXcd lhs = cosine_kernel(m, t + s) + cosine_kernel(m, t - s);
      const Eigen::MatrixXcd rhs = 2.0 * cosine_kernel(m, t) * cosine_kernel(m, s);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("t-derivative of the sine kernel is the cosine kernel") {
  // central difference of S in t reproduces C
  std::mt19937_64 rng(42);
  const Eigen::MatrixXcd m = random_sym_psd(rng, 3);
  const Real h = 1e-5;
  for (Real t : {0.4, 1.3, 2.2}) {
    const Eigen::MatrixXcd dS =
        (sine_kernel(m, t + h) - sine_kernel(m, t - h)) / (2.0 * h);
    CHECK((dS - cosine_kernel(m, t)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("kernels satisfy the oscillator equation with O(h^2) residual") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXcd m = random_sym_psd(rng, 2);
  auto residual = [&](Real h) {
    const Real t = 1.1;
    const Eigen::MatrixXcd second =
        (cosine_kernel(m, t + h) - 2.0 * cosine_kernel(m, t) + cosine_kernel(m, t - h)) /
        (h * h);
    return (second + m * cosine_kernel(m, t)).cwiseAbs().maxCoeff();
  };
  const Real r1 = residual(1e-3);
  const Real r2 = residual(5e-4);
  CHECK(r2 < 0.35 * r1);  // second-order decay, allowing rounding slack
}

TEST_CASE("frozen operator divides by 1 + L(xi)") {
  OperatorSpec a = OperatorSpec::minus_laplacian();
  EllipticForm l = EllipticForm::identity(1);
  Eigen::VectorXd xi(1);
  xi << 1.0;
  CHECK(frozen_scalar(a, l, xi) == doctest::Approx(0.5));
  xi << 0.0;
  CHECK(frozen_scalar(a, l, xi) == 0.0);

  Eigen::MatrixXcd diag = Eigen::Vector2cd(1.0, 4.0).asDiagonal();
  OperatorSpec am = OperatorSpec::matrix(diag);
  Eigen::VectorXd xi3(1);
  xi3 << std::sqrt(3.0);  // L = 3
  const Eigen::MatrixXcd frozen = frozen_matrix(am, l, xi3);
  CHECK(std::abs(frozen(0, 0) - Complex(0.25, 0.0)) < 1e-13);
  CHECK(std::abs(frozen(1, 1) - Complex(1.0, 0.0)) < 1e-13);
}

TEST_CASE("weighted matrix realizes a_mj = g_m 2^{s j}") {
  OperatorSpec a = OperatorSpec::weighted_matrix(Eigen::Vector2d(1.0, 1.0), 1.0);
  const Eigen::MatrixXcd& m = a.matrix_op();
  REQUIRE(m.rows() == 2);
  CHECK(std::abs(m(0, 0) - Complex(2.0, 0.0)) < 1e-15);
  CHECK(std::abs(m(0, 1) - Complex(4.0, 0.0)) < 1e-15);
  CHECK(std::abs(m(1, 0) - Complex(2.0, 0.0)) < 1e-15);
  CHECK(std::abs(m(1, 1) - Complex(4.0, 0.0)) < 1e-15);

  OperatorSpec b = OperatorSpec::weighted_matrix(Eigen::Vector2d(3.0, 0.5), 2.0);
  CHECK(std::abs(b.matrix_op()(0, 1) - Complex(3.0 * 16.0, 0.0)) < 1e-13);
  CHECK(std::abs(b.matrix_op()(1, 0) - Complex(0.5 * 4.0, 0.0)) < 1e-13);
}

TEST_CASE("kernel table of the scalar model: zero mode and Nyquist mode") {
  auto g = make_grid(1, 64, kPi);
  OperatorSpec a = OperatorSpec::minus_laplacian();
  EllipticForm l = EllipticForm::identity(1);
  const Real dt = 0.01;
  KernelTable table = build_kernel_table(a, l, g, dt);
  REQUIRE(table.scalar_path);
  const std::int64_t zero_idx = 32;
  CHECK(table.C[zero_idx] == 1.0);
  CHECK(table.S[zero_idx] == dt);
  CHECK(table.r[zero_idx] == 1.0);

  // the frozen frequency tends to 1 from below; at Nyquist it is close
  const Real xi = g->freqs(0)[0];
  const Real omega = std::abs(xi) / std::sqrt(1.0 + xi * xi);
  CHECK(std::abs(table.C[0] - std::cos(dt * 1.0)) <= std::abs(omega - 1.0) * dt + 1e-15);
}

TEST_CASE("matrix kernel table at the zero mode: diag(1, 4) at t = pi/2") {
  auto g = make_grid(1, 8, kPi);
  Eigen::MatrixXcd diag = Eigen::Vector2cd(1.0, 4.0).asDiagonal();
  OperatorSpec a = OperatorSpec::matrix(diag);
  EllipticForm l = EllipticForm::identity(1);
  KernelTable table = build_kernel_table(a, l, g, kPi / 2.0);
  REQUIRE(!table.scalar_path);
  REQUIRE(table.components == 2);
  const std::size_t zero_idx = 4;
  const Eigen::MatrixXcd& c = table.Cm[zero_idx];
  const Eigen::MatrixXcd& s = table.Sm[zero_idx];
  CHECK(std::abs(c(0, 0)) < 1e-14);
  CHECK(std::abs(c(1, 1) - Complex(-1.0, 0.0)) < 1e-14);
  CHECK(std::abs(c(0, 1)) < 1e-15);
  CHECK(std::abs(s(0, 0) - Complex(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(s(1, 1)) < 1e-14);
}

TEST_CASE("scalar tables satisfy C^2 + A_xi S^2 = 1 on every mode") {
  auto g = make_grid(1, 128, 2.5);
  OperatorSpec a = OperatorSpec::minus_laplacian();
  Eigen::MatrixXd c(1, 1);
  c << 1.7;
  EllipticForm l(c);
  for (Real t : {0.05, 0.8, 2.0}) {
    KernelTable table = build_kernel_table(a, l, g, t);
    const Eigen::ArrayXd invariant =
        table.C.square() + table.a_frozen * table.S.square();
    CHECK((invariant - 1.0).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("kernel ladder stores steps + 1 levels on the uniform time lattice") {
  auto g = make_grid(1, 16, kPi);
  OperatorSpec a = OperatorSpec::minus_laplacian();
  EllipticForm l = EllipticForm::identity(1);
  KernelLadder ladder = build_kernel_ladder(a, l, g, 0.125, 8);
  REQUIRE(ladder.steps() == 8);
  for (int k = 0; k <= 8; ++k)
    CHECK(ladder.level[static_cast<std::size_t>(k)].t ==
          doctest::Approx(0.125 * k).epsilon(1e-15));
  CHECK(ladder.level[0].C.maxCoeff() == 1.0);
  CHECK(ladder.level[0].S.maxCoeff() == 0.0);
}

TEST_CASE("resolvent check flags the spectrum sitting on the sample ray") {
  // identity operator, omega = 0: lambda = 1 is sampled and is singular
  OperatorSpec a = OperatorSpec::matrix(Eigen::MatrixXcd::Identity(2, 2));
  ResolventReport rep = resolvent_bound_check(a, 1.0, 0.0, 49);
  CHECK(!rep.pass);
  CHECK(rep.singular_hit);
  CHECK(std::isinf(rep.max_violation));
}

TEST_CASE("resolvent check passes for the zero operator at omega = 1") {
  OperatorSpec a = OperatorSpec::matrix(Eigen::MatrixXcd::Zero(2, 2));
  ResolventReport rep = resolvent_bound_check(a, 1.0, 1.0, 49);
  CHECK(rep.pass);
  CHECK(!rep.singular_hit);
  // worst sample is real lambda = 2: |Re - omega| / |lambda|^2 = 1/4
  CHECK(rep.max_violation == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("resolvent check reports a singular sample for eigenvalue 4 at omega = 1") {
  Eigen::MatrixXcd m = Eigen::Vector2cd(4.0, 9.0).asDiagonal();
  OperatorSpec a = OperatorSpec::matrix(m);
  ResolventReport rep = resolvent_bound_check(a, 1.0, 1.0, 49);
  CHECK(rep.singular_hit);
  CHECK(std::isinf(rep.max_violation));
  CHECK(std::abs(rep.witness - Complex(2.0, 0.0)) < 1e-12);
}

TEST_CASE("resolvent check rejects scalar operators and bad inputs") {
  OperatorSpec a = OperatorSpec::minus_laplacian();
  CHECK_THROWS_AS(resolvent_bound_check(a, 1.0, 0.0, 9), Error);
  OperatorSpec m = OperatorSpec::matrix(Eigen::MatrixXcd::Identity(2, 2));
  CHECK_THROWS_AS(resolvent_bound_check(m, 0.0, 0.0, 9), Error);
  CHECK_THROWS_AS(resolvent_bound_check(m, 1.0, 0.0, 0), Error);
}

TEST_CASE("scalar symbols must be nonnegative and finite") {
  OperatorSpec bad = OperatorSpec::scalar_symbol(
      [](const Eigen::VectorXd& xi) { return xi[0]; }, "signed");
  Eigen::VectorXd xi(1);
  xi << -2.0;
  CHECK_THROWS_AS(bad.symbol(xi), Error);
  xi << 2.0;
  CHECK(bad.symbol(xi) == doctest::Approx(2.0));
  OperatorSpec c = OperatorSpec::constant(3.0);
  CHECK(c.symbol(xi) == doctest::Approx(3.0));
  CHECK_THROWS_AS(c.matrix_op(), Error);
}
