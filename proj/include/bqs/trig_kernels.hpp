#pragma once

#include <cmath>
#include <cstdlib>

#include "bqs/types.hpp"

namespace bqs {

// Operator cosine and sine built from the square of the frequency: for a
// square matrix M (any spectrum location, no square root taken),
//
//   cosine_kernel(M, t) = cos(t sqrt(M)) = sum_k (-1)^k (t^2 M)^k / (2k)!
//   sine_kernel(M, t)   = sin(t sqrt(M)) / sqrt(M)
//                       = t * sum_k (-1)^k (t^2 M)^k / (2k+1)!
//
// Both series are entire in t^2 M, so they are evaluated with
// scaling-and-recombination: halve t until ||t^2 M||_inf <= 1, sum the two
// series together (truncating when the next term falls below 1e-16 of the
// running result), then undo the scaling with the double-angle pair
//   C(2T) = 2 C(T)^2 - I,   S(2T) = 2 S(T) C(T).
// sine_kernel(M, 0) = 0 and cosine_kernel(M, 0) = I exactly.

namespace detail {

template <class Mat>
Real inf_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <class Mat>
void cosine_sine_scaled(const Mat& B, Mat& C, Mat& Ssinc) {
  // C = sum (-1)^k B^k/(2k)!, Ssinc = sum (-1)^k B^k/(2k+1)!, ||B|| <= 1.
  const Eigen::Index n = B.rows();
  Mat term = Mat::Identity(n, n);
  C = term;
  Ssinc = term;
  Real scale = 1.0;
  for (int k = 1; k <= 64; ++k) {
    term = (term * B).eval();
    scale /= static_cast<Real>((2 * k - 1) * (2 * k));
    const Real sgn = (k & 1) ? -1.0 : 1.0;
    C += sgn * scale * term;
    Ssinc += sgn * scale / static_cast<Real>(2 * k + 1) * term;
    const Real tail = scale * inf_norm(term) / static_cast<Real>((2 * k + 1) * (2 * k + 2));
    if (tail <= 1e-16 * std::max(inf_norm(C), 1.0)) break;
  }
}

}  // namespace detail

/// Evaluate both kernels at once (they share the scaling ladder).
template <class Mat>
void cosine_sine_pair(const Mat& M, Real t, Mat& C, Mat& S) {
  const Eigen::Index n = M.rows();
  const Mat I = Mat::Identity(n, n);
  if (t == 0.0) {
    C = I;
    S = Mat::Zero(n, n);
    return;
  }
  int halvings = 0;
  Real norm = t * t * detail::inf_norm(M);
  while (norm > 1.0 && halvings < 64) {
    norm *= 0.25;
    ++halvings;
  }
  const Real ts = t / static_cast<Real>(1LL << halvings);
  const Mat B = (ts * ts) * M;
  Mat Ssinc;
  detail::cosine_sine_scaled(B, C, Ssinc);
  S = ts * Ssinc;
  for (int h = 0; h < halvings; ++h) {
    const Mat Snew = 2.0 * (S * C).eval();
    C = (2.0 * (C * C) - I).eval();
    S = Snew;
  }
}

template <class Mat>
Mat cosine_kernel(const Mat& M, Real t) {
  Mat C, S;
  cosine_sine_pair(M, t, C, S);
  return C;
}

template <class Mat>
Mat sine_kernel(const Mat& M, Real t) {
  Mat C, S;
  cosine_sine_pair(M, t, C, S);
  return S;
}

// Scalar forms: closed expressions, valid for any m >= 0.
inline Real cosine_kernel(Real m, Real t) { return std::cos(t * std::sqrt(m)); }

inline Real sine_kernel(Real m, Real t) {
  if (m == 0.0) return t;
  const Real w = std::sqrt(m);
  return std::sin(t * w) / w;
}

}  // namespace bqs
