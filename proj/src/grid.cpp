#include "bqs/grid.hpp"

#include <cmath>
#include <numbers>

#include "bqs/errors.hpp"

namespace bqs {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

SpectralGrid::SpectralGrid(std::vector<int> points, std::vector<Real> half_widths)
    : points_(std::move(points)), half_widths_(std::move(half_widths)) {
  const int n = static_cast<int>(points_.size());
  if (n < 1 || n > 3) throw Error("grid: dimension must be 1, 2 or 3");
  if (half_widths_.size() != points_.size())
    throw Error("grid: one half width per axis required");
  for (int a = 0; a < n; ++a) {
    if (!power_of_two(points_[a]) || points_[a] < 4)
      throw Error("grid: points per axis must be a power of two >= 4, got " +
                  std::to_string(points_[a]));
    if (!(half_widths_[a] > 0.0) || !std::isfinite(half_widths_[a]))
      throw Error("grid: half width must be positive and finite");
  }

  total_ = 1;
  measure_ = 1.0;
  for (int a = 0; a < n; ++a) {
    total_ *= points_[a];
    measure_ *= 2.0 * half_widths_[a];
  }
  // total_ is a power of two, so this division is exact and
  // cell_volume_ * total_ reproduces measure_ bit for bit.
  cell_volume_ = measure_ / static_cast<Real>(total_);

  freqs_.resize(n);
  for (int a = 0; a < n; ++a) {
    const int N = points_[a];
    freqs_[a].resize(N);
    const Real base = std::numbers::pi_v<Real> / half_widths_[a];
    for (int i = 0; i < N; ++i) freqs_[a][i] = base * (i - N / 2);
  }

  strides_.assign(n, 1);
  for (int a = n - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * points_[a + 1];
}

void SpectralGrid::unflatten(std::int64_t flat, int* idx) const {
  for (int a = 0; a < n_dims(); ++a) {
    idx[a] = static_cast<int>(flat / strides_[a]);
    flat %= strides_[a];
  }
}

void SpectralGrid::mode_freq(std::int64_t flat, Eigen::VectorXd& xi) const {
  const int n = n_dims();
  xi.resize(n);
  for (int a = 0; a < n; ++a) {
    const int i = static_cast<int>(flat / strides_[a]);
    flat %= strides_[a];
    xi[a] = freqs_[a][i];
  }
}

bool SpectralGrid::same_lattice(const SpectralGrid& other) const {
  return points_ == other.points_ && half_widths_ == other.half_widths_;
}

GridPtr make_grid(int n_dims, int points, Real half_width) {
  return make_grid(std::vector<int>(static_cast<std::size_t>(n_dims < 0 ? 0 : n_dims), points),
                   std::vector<Real>(static_cast<std::size_t>(n_dims < 0 ? 0 : n_dims), half_width));
}

GridPtr make_grid(std::vector<int> points, std::vector<Real> half_widths) {
  return std::make_shared<const SpectralGrid>(std::move(points), std::move(half_widths));
}

}  // namespace bqs
