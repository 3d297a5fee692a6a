#include "bqs/norms.hpp"

#include <cmath>
#include <vector>

#include "bqs/errors.hpp"
#include "bqs/parallel.hpp"
#include "bqs/spectral_ops.hpp"
#include "bqs/transform.hpp"

namespace bqs {

Real component_norm(const Complex* v, int components, Real q) {
  if (components == 1) return std::abs(v[0]);
  if (q == 2.0) {
    Real s = 0.0;
    for (int c = 0; c < components; ++c) s += std::norm(v[c]);
    return std::sqrt(s);
  }
  Real s = 0.0;
  for (int c = 0; c < components; ++c) s += std::pow(std::abs(v[c]), q);
  return std::pow(s, 1.0 / q);
}

namespace {

void check_exponents(Real p, Real q, const char* who) {
  if (!(p >= 1.0)) throw Error(std::string(who) + ": p must be >= 1");
  if (!(q >= 1.0)) throw Error(std::string(who) + ": q_inner must be >= 1");
}

// Per-point contributions gathered first, then reduced pairwise so the
// result does not depend on thread count.
Real lp_of_points(const Field& f, Real p, Real q) {
  const std::int64_t P = f.points();
  const int nc = f.components;
  std::vector<Real> contrib(static_cast<std::size_t>(P));
  const Complex* data = f.values.data();
  parallel_for(P, [&](std::ptrdiff_t x) {
    Real cn;
    if (nc == 1) {
      cn = std::abs(data[x]);
    } else {
      // gather the (strided) component values of this point
      Complex tmp[8];
      Complex* v = tmp;
      std::vector<Complex> big;
      if (nc > 8) {
        big.resize(static_cast<std::size_t>(nc));
        v = big.data();
      }
      for (int c = 0; c < nc; ++c) v[c] = data[c * P + x];
      cn = component_norm(v, nc, q);
    }
    contrib[static_cast<std::size_t>(x)] = (p == 2.0) ? cn * cn : std::pow(cn, p);
  });
  const Real total = pairwise_sum(contrib) * f.grid->cell_volume();
  return (p == 2.0) ? std::sqrt(total) : std::pow(total, 1.0 / p);
}

}  // namespace

Real lp_norm(const Field& f, Real p, Real q_inner) {
  require_side(f, Side::Physical, "lp_norm");
  check_exponents(p, q_inner, "lp_norm");
  return lp_of_points(f, p, q_inner);
}

Real linf_norm(const Field& f, Real q_inner) {
  require_side(f, Side::Physical, "linf_norm");
  check_exponents(1.0, q_inner, "linf_norm");
  const std::int64_t P = f.points();
  const int nc = f.components;
  const Complex* data = f.values.data();
  Real best = 0.0;
  std::vector<Complex> v(static_cast<std::size_t>(nc));
  for (std::int64_t x = 0; x < P; ++x) {
    for (int c = 0; c < nc; ++c) v[static_cast<std::size_t>(c)] = data[c * P + x];
    best = std::max(best, component_norm(v.data(), nc, q_inner));
  }
  return best;
}

Real sobolev_norm(const Field& f, Real s, Real p, Real q_inner) {
  require_side(f, Side::Physical, "sobolev_norm");
  return sobolev_norm_spectral(forward_transform(f), s, p, q_inner);
}

Real sobolev_norm_spectral(const Field& spectral, Real s, Real p, Real q_inner) {
  require_side(spectral, Side::Spectral, "sobolev_norm_spectral");
  check_exponents(p, q_inner, "sobolev_norm");
  return lp_of_points(inverse_transform(bessel_apply(spectral, s)), p, q_inner);
}

}  // namespace bqs
