#include "bqs/field.hpp"

#include <cmath>
#include <functional>

#include "bqs/errors.hpp"

namespace bqs {

Field make_field(GridPtr grid, int components, Side side) {
  if (!grid) throw Error("field: null grid");
  if (components < 1) throw Error("field: components must be >= 1");
  Field f;
  f.grid = std::move(grid);
  f.components = components;
  f.side = side;
  f.values = Eigen::ArrayXcd::Zero(components * f.grid->total_points());
  return f;
}

void require_side(const Field& f, Side side, const char* who) {
  if (f.side != side)
    throw SideMismatch(std::string(who) + ": field is on the " +
                       (f.side == Side::Physical ? "physical" : "spectral") +
                       " side");
}

void require_same_lattice(const Field& a, const Field& b, const char* who) {
  if (!a.grid->same_lattice(*b.grid))
    throw GridMismatch(std::string(who) + ": fields live on different lattices");
}

namespace {
void require_compatible(const Field& a, const Field& b, const char* who) {
  require_same_lattice(a, b, who);
  if (a.side != b.side) throw SideMismatch(std::string(who) + ": sides differ");
  if (a.components != b.components)
    throw Error(std::string(who) + ": component counts differ");
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
  require_compatible(a, b, "field sum");
  Field out = a;
  out.values += b.values;
  return out;
}

Field operator-(const Field& a, const Field& b) {
  require_compatible(a, b, "field difference");
  Field out = a;
  out.values -= b.values;
  return out;
}

Field operator*(Real scale, const Field& f) {
  Field out = f;
  out.values *= scale;
  return out;
}

bool all_finite(const Field& f) {
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    const Complex v = f.values[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

Field sampled_field(GridPtr grid, int components,
                    const std::function<void(const Eigen::VectorXd&, Complex*)>& fn) {
  Field f = make_field(std::move(grid), components, Side::Physical);
  const auto& g = *f.grid;
  const int n = g.n_dims();
  const std::int64_t P = g.total_points();
  Eigen::VectorXd x(n);
  std::vector<Complex> out(static_cast<std::size_t>(components));
  int idx[3];
  for (std::int64_t p = 0; p < P; ++p) {
    g.unflatten(p, idx);
    for (int a = 0; a < n; ++a) x[a] = g.coord(a, idx[a]);
    fn(x, out.data());
    for (int c = 0; c < components; ++c) f.at(c, p) = out[static_cast<std::size_t>(c)];
  }
  return f;
}

Field gaussian_field(GridPtr grid, int components, Real amplitude, Real width,
                     const std::vector<Real>& center) {
  if (!(width > 0.0)) throw Error("gaussian_field: width must be positive");
  const int n = grid->n_dims();
  std::vector<Real> c = center;
  if (c.empty()) c.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(c.size()) != n)
    throw Error("gaussian_field: center dimension does not match grid");
  return sampled_field(std::move(grid), components,
                       [&, amplitude, width](const Eigen::VectorXd& x, Complex* out) {
                         Real r2 = 0.0;
                         for (int a = 0; a < x.size(); ++a) {
                           const Real d = x[a] - c[static_cast<std::size_t>(a)];
                           r2 += d * d;
                         }
                         const Real v = amplitude * std::exp(-r2 / (2.0 * width * width));
                         for (int cc = 0; cc < components; ++cc) out[cc] = v;
                       });
}

Field mode_field(GridPtr grid, int components, const std::vector<int>& k, Real amplitude) {
  const int n = grid->n_dims();
  if (static_cast<int>(k.size()) != n)
    throw Error("mode_field: one mode number per axis required");
  std::vector<Real> xi(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const int N = grid->points()[a];
    if (k[static_cast<std::size_t>(a)] < -N / 2 || k[static_cast<std::size_t>(a)] >= N / 2)
      throw Error("mode_field: mode number outside the lattice");
    xi[static_cast<std::size_t>(a)] =
        grid->freqs(a)[k[static_cast<std::size_t>(a)] + N / 2];
  }
  return sampled_field(std::move(grid), components,
                       [&, amplitude](const Eigen::VectorXd& x, Complex* out) {
                         Real phase = 0.0;
                         for (int a = 0; a < x.size(); ++a)
                           phase += xi[static_cast<std::size_t>(a)] * x[a];
                         const Real v = amplitude * std::cos(phase);
                         for (int cc = 0; cc < components; ++cc) out[cc] = v;
                       });
}

}  // namespace bqs
