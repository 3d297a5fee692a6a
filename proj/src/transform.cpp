#include "bqs/transform.hpp"

#include <cmath>
#include <map>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "bqs/errors.hpp"

namespace bqs {

namespace {

Eigen::FFT<Real>& fft_for(int n) {
  // Eigen's FFT object caches its twiddle tables per length.
  thread_local std::map<int, Eigen::FFT<Real>> cache;
  return cache[n];
}

// One axis of the shifted-lattice DFT.  The raw FFT works with unshifted
// indices m = 0..N-1 and k = 0..N-1; our lattice starts at -W and our
// spectrum is stored ascending in the signed mode number j = k - N/2 (mod N).
// Because x_m = -W + m dx, the plane wave picks up e^{-i xi_j (-W)} = (-1)^j,
// which appears below as the per-mode sign flip.
void axis_forward(Complex* data, int N, std::int64_t stride, std::int64_t lines, Real half_width) {
  auto& fft = fft_for(N);
  const Real scale = std::sqrt(2.0 * half_width) / static_cast<Real>(N);
  std::vector<Complex> in(static_cast<std::size_t>(N)), out(static_cast<std::size_t>(N));
  for (std::int64_t line = 0; line < lines; ++line) {
    const std::int64_t base = (line / stride) * (stride * N) + (line % stride);
    for (int m = 0; m < N; ++m) in[static_cast<std::size_t>(m)] = data[base + m * stride];
    fft.fwd(out, in);
    for (int idx = 0; idx < N; ++idx) {
      const int j = idx - N / 2;
      const int k = (idx + N / 2) % N;
      const Real sign = (j & 1) ? -1.0 : 1.0;
      data[base + idx * stride] = scale * sign * out[static_cast<std::size_t>(k)];
    }
  }
}

void axis_inverse(Complex* data, int N, std::int64_t stride, std::int64_t lines, Real half_width) {
  auto& fft = fft_for(N);
  const Real scale = static_cast<Real>(N) / std::sqrt(2.0 * half_width);
  std::vector<Complex> in(static_cast<std::size_t>(N)), out(static_cast<std::size_t>(N));
  for (std::int64_t line = 0; line < lines; ++line) {
    const std::int64_t base = (line / stride) * (stride * N) + (line % stride);
    for (int idx = 0; idx < N; ++idx) {
      const int j = idx - N / 2;
      const int k = (idx + N / 2) % N;
      const Real sign = (j & 1) ? -1.0 : 1.0;
      in[static_cast<std::size_t>(k)] = sign * data[base + idx * stride];
    }
    fft.inv(out, in);
    for (int m = 0; m < N; ++m) data[base + m * stride] = scale * out[static_cast<std::size_t>(m)];
  }
}

void transform_component(const SpectralGrid& g, Complex* data, bool forward) {
  for (int a = 0; a < g.n_dims(); ++a) {
    const int N = g.points()[a];
    const std::int64_t stride = g.stride(a);
    const std::int64_t lines = g.total_points() / N;
    if (forward)
      axis_forward(data, N, stride, lines, g.half_widths()[a]);
    else
      axis_inverse(data, N, stride, lines, g.half_widths()[a]);
  }
}

}  // namespace

Field forward_transform(const Field& f) {
  require_side(f, Side::Physical, "forward_transform");
  Field out = f;
  out.side = Side::Spectral;
  for (int c = 0; c < out.components; ++c)
    transform_component(*out.grid, out.component(c), true);
  return out;
}

Field inverse_transform(const Field& f) {
  require_side(f, Side::Spectral, "inverse_transform");
  Field out = f;
  out.side = Side::Physical;
  for (int c = 0; c < out.components; ++c)
    transform_component(*out.grid, out.component(c), false);
  return out;
}

void forward_transform_rows(const SpectralGrid& grid, SpecMat& coeffs) {
  for (Eigen::Index r = 0; r < coeffs.rows(); ++r)
    transform_component(grid, coeffs.data() + r * coeffs.cols(), true);
}

void inverse_transform_rows(const SpectralGrid& grid, SpecMat& coeffs) {
  for (Eigen::Index r = 0; r < coeffs.rows(); ++r)
    transform_component(grid, coeffs.data() + r * coeffs.cols(), false);
}

}  // namespace bqs
