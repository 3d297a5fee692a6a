#include "bqs/spectral_ops.hpp"

#include <cmath>

#include "bqs/errors.hpp"

namespace bqs {

namespace {

// Evaluate mul(xi) once per mode into a vector, so multi-component fields
// pay for the multiplier only once.
Eigen::VectorXcd tabulate(const SpectralGrid& g,
                          const std::function<Complex(const Eigen::VectorXd&)>& mul) {
  const std::int64_t P = g.total_points();
  Eigen::VectorXcd m(P);
  Eigen::VectorXd xi;
  for (std::int64_t p = 0; p < P; ++p) {
    g.mode_freq(p, xi);
    m[p] = mul(xi);
  }
  return m;
}

}  // namespace

Field apply_mode_multiplier(const Field& f,
                            const std::function<Complex(const Eigen::VectorXd&)>& mul) {
  require_side(f, Side::Spectral, "apply_mode_multiplier");
  const Eigen::VectorXcd m = tabulate(*f.grid, mul);
  Field out = f;
  for (int c = 0; c < out.components; ++c) {
    Complex* v = out.component(c);
    for (std::int64_t p = 0; p < f.points(); ++p) v[p] *= m[p];
  }
  return out;
}

Field bessel_apply(const Field& f, Real s) {
  return apply_mode_multiplier(f, [s](const Eigen::VectorXd& xi) -> Complex {
    return std::pow(1.0 + xi.squaredNorm(), 0.5 * s);
  });
}

void bessel_apply_rows(const SpectralGrid& grid, Eigen::Ref<SpecMat> coeffs, Real s) {
  const std::int64_t P = grid.total_points();
  Eigen::VectorXd xi;
  for (std::int64_t p = 0; p < P; ++p) {
    grid.mode_freq(p, xi);
    const Real w = std::pow(1.0 + xi.squaredNorm(), 0.5 * s);
    coeffs.col(p) *= w;
  }
}

Field axis_derivative(const Field& f, int axis, int order) {
  require_side(f, Side::Spectral, "axis_derivative");
  if (axis < 0 || axis >= f.grid->n_dims())
    throw Error("axis_derivative: axis out of range");
  if (order < 0) throw Error("axis_derivative: order must be >= 0");
  if (order == 0) return f;
  const auto& g = *f.grid;
  Field out = f;
  for (int c = 0; c < out.components; ++c) {
    Complex* v = out.component(c);
    int idx[3];
    for (std::int64_t p = 0; p < f.points(); ++p) {
      g.unflatten(p, idx);
      const int i = idx[axis];
      if ((order & 1) && i == 0) {
        v[p] = 0.0;  // Nyquist
        continue;
      }
      v[p] *= std::pow(Complex(0.0, g.freqs(axis)[i]), order);
    }
  }
  return out;
}

namespace {

bool keep_mode(const SpectralGrid& g, const int* idx) {
  for (int a = 0; a < g.n_dims(); ++a) {
    const int N = g.points()[a];
    const int j = idx[a] - N / 2;
    if (std::abs(j) > N / 3) return false;
  }
  return true;
}

}  // namespace

Field dealias_two_thirds(const Field& f) {
  require_side(f, Side::Spectral, "dealias_two_thirds");
  Field out = f;
  auto m = out.matrix();
  dealias_two_thirds_rows(*f.grid, m);
  return out;
}

void dealias_two_thirds_rows(const SpectralGrid& grid, Eigen::Ref<SpecMat> coeffs) {
  int idx[3];
  for (std::int64_t p = 0; p < grid.total_points(); ++p) {
    grid.unflatten(p, idx);
    if (!keep_mode(grid, idx)) coeffs.col(p).setZero();
  }
}

}  // namespace bqs
