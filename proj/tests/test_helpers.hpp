#pragma once

#include <complex>
#include <random>
#include <vector>

#include "bqs/field.hpp"
#include "bqs/grid.hpp"

namespace bqs::testing {

inline Field random_field(GridPtr grid, int components, std::uint64_t seed,
                          Side side = Side::Physical, bool real_valued = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  Field f = make_field(grid, components, side);
  for (Eigen::Index i = 0; i < f.values.size(); ++i)
    f.values[i] = Complex(gauss(rng), real_valued ? 0.0 : gauss(rng));
  return f;
}

/// Direct O(P^2) DFT with the same normalization as forward_transform:
///   u_hat(xi_j) = prod_a (dx_a / sqrt(2 W_a)) * sum_x u(x) e^{-i xi_j . x}.
inline Field direct_dft(const Field& f) {
  const auto& g = *f.grid;
  const int n = g.n_dims();
  Real scale = 1.0;
  for (int a = 0; a < n; ++a)
    scale *= g.spacing(a) / std::sqrt(2.0 * g.half_widths()[a]);
  Field out = make_field(f.grid, f.components, Side::Spectral);
  Eigen::VectorXd xi(n), x(n);
  int idx[3], jdx[3];
  for (std::int64_t j = 0; j < g.total_points(); ++j) {
    g.unflatten(j, jdx);
    for (int a = 0; a < n; ++a) xi[a] = g.freqs(a)[jdx[a]];
    for (int c = 0; c < f.components; ++c) {
      Complex acc(0.0, 0.0);
      for (std::int64_t m = 0; m < g.total_points(); ++m) {
        g.unflatten(m, idx);
        Real phase = 0.0;
        for (int a = 0; a < n; ++a) phase += xi[a] * g.coord(a, idx[a]);
        acc += f.at(c, m) * std::exp(Complex(0.0, -phase));
      }
      out.at(c, j) = scale * acc;
    }
  }
  return out;
}

inline Real max_abs_diff(const Field& a, const Field& b) {
  return (a.values - b.values).abs().maxCoeff();
}

inline Real max_abs(const Field& a) { return a.values.abs().maxCoeff(); }

}  // namespace bqs::testing
