#pragma once

// Naive reference implementations used to cross-check the library. Each one is a
// direct transcription of a defining formula with plain loops.

#include "mubforge/numeric_core.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

namespace oracle {

using mubforge::CMatrix;
using mubforge::Complex;
using mubforge::CVector;

inline Complex inner(const CVector& a, const CVector& b) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += std::conj(a(i)) * b(i);
  return s;
}

/// Largest | |<u|v>|^2 - 1/d | over vectors of different bases.
inline double mu_deviation(const std::vector<CMatrix>& bases) {
  double worst = 0.0;
  for (std::size_t a = 0; a < bases.size(); ++a)
    for (std::size_t b = 0; b < bases.size(); ++b) {
      if (a == b) continue;
      const auto d = bases[a].rows();
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
          worst = std::max(worst, std::abs(std::norm(inner(bases[a].col(i), bases[b].col(j))) - 1.0 / d));
    }
  return worst;
}

inline double orth_deviation(const CMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.cols(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(inner(m.col(i), m.col(j)) - (i == j ? 1.0 : 0.0)));
  return worst;
}

/// Tr[rho_1^2] with rho_1(i, i') = sum_j v(i d2 + j) conj(v(i' d2 + j)).
inline double purity(const CVector& v, int d1, int d2) {
  double p = 0.0;
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k) {
      Complex r = 0.0;
      for (int j = 0; j < d2; ++j) r += v(i * d2 + j) * std::conj(v(k * d2 + j));
      p += std::norm(r);
    }
  return p;
}

/// sum_{x,y} |<x|y>|^(2k) over a vector list, self-pairs included.
inline double welch_sum(const std::vector<CVector>& vs, int k) {
  double s = 0.0;
  for (const auto& x : vs)
    for (const auto& y : vs) s += std::pow(std::norm(inner(x, y)), k);
  return s;
}

inline int fourier_defect(int d) {
  int s = 0;
  for (int n = 1; n < d; ++n) s += std::gcd(n, d) - 1;
  return s;
}

inline CMatrix fourier(int d) {
  CMatrix f(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) f(j, k) = std::polar(1.0 / std::sqrt(d), 2.0 * M_PI * j * k / d);
  return f;
}

/// Tr[(A (x) B) rho] style witness sum computed term by term.
inline double witness(const std::vector<CMatrix>& bases, const CMatrix& rho) {
  const auto d = bases.front().rows();
  double total = 0.0;
  for (const auto& b : bases)
    for (Eigen::Index v = 0; v < d; ++v) {
      CVector w(d * d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) w(i * d + j) = b(i, v) * std::conj(b(j, v));
      total += (w.adjoint() * rho * w)(0, 0).real();
    }
  return total;
}

}  // namespace oracle
