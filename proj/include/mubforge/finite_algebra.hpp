#pragma once

#include "mubforge/numeric_core.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace mubforge {

bool is_prime(long long n);

/// (p, n) with d = p^n, or nullopt when d is not a prime power.
std::optional<std::pair<int, int>> prime_power(int d);

/// Prime factorization as (p, exponent) pairs in ascending p.
std::vector<std::pair<int, int>> factorize(int d);

/// GF(p^n). Elements are integer indices sum_i c_i p^i of their coefficient
/// vectors in the polynomial basis 1, a, ..., a^{n-1} where a is a root of
/// the defining primitive polynomial.
class FieldExtension {
 public:
  FieldExtension(int p, int n);

  [[nodiscard]] int p() const { return p_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int order() const { return q_; }
  /// Monic primitive polynomial, coefficients c_0 .. c_n (c_n = 1).
  [[nodiscard]] const std::vector<int>& primitive_poly() const { return poly_; }

  [[nodiscard]] std::vector<int> coeffs(int x) const;
  [[nodiscard]] int from_coeffs(const std::vector<int>& c) const;

  [[nodiscard]] int add(int x, int y) const;
  [[nodiscard]] int neg(int x) const;
  [[nodiscard]] int sub(int x, int y) const { return add(x, neg(y)); }
  [[nodiscard]] int mul(int x, int y) const;
  [[nodiscard]] int inv(int x) const;
  [[nodiscard]] int pow(int x, long long e) const;
  /// Root of the primitive polynomial.
  [[nodiscard]] int generator() const { return exp_[1]; }
  /// generator()^k.
  [[nodiscard]] int exp(long long k) const;
  /// Absolute trace into Z_p.
  [[nodiscard]] int trace(int x) const { return trace_[static_cast<std::size_t>(x)]; }

 private:
  int p_, n_, q_;
  std::vector<int> poly_;
  std::vector<int> exp_;  // length q-1
  std::vector<int> log_;  // log_[0] unused
  std::vector<int> trace_;
};

/// GR(4, n) = Z_4[x]/(h) with h the Hensel lift of the GF(2^n) primitive polynomial.
/// Elements are indices sum_i c_i 4^i with c_i in Z_4.
class GaloisRing {
 public:
  explicit GaloisRing(int n);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int size() const { return size_; }
  [[nodiscard]] const std::vector<int>& lifted_poly() const { return h_; }
  /// {0, 1, xi, ..., xi^{2^n - 2}}.
  [[nodiscard]] const std::vector<int>& teichmuller() const { return teich_; }

  [[nodiscard]] int add(int x, int y) const;
  [[nodiscard]] int mul(int x, int y) const;
  [[nodiscard]] int times_two(int x) const;
  /// x = b + 2v with b, v Teichmuller.
  [[nodiscard]] std::pair<int, int> decompose(int x) const;
  [[nodiscard]] int frobenius(int x) const;
  /// Trace into Z_4.
  [[nodiscard]] int trace(int x) const;
  /// sum over t in T of i^{Tr(r t)}.
  [[nodiscard]] Complex exponential_sum(int r) const;

 private:
  [[nodiscard]] std::vector<int> digits(int x) const;
  [[nodiscard]] int pack(const std::vector<int>& c) const;

  int n_, size_;
  std::vector<int> h_;
  std::vector<int> teich_;
  std::vector<int> teich_b_, teich_v_;  // decomposition table
};

/// |sum_k exp(2 pi i Tr[b k^2 + v k] / p)| over GF(p^n). Unsupported for p = 2.
double gauss_sum_modulus(const FieldExtension& f, int b, int v);

class LatinSquare {
 public:
  /// Validates that rows and columns are permutations unless allow_non_latin.
  explicit LatinSquare(std::vector<std::vector<int>> cells, bool allow_non_latin = false);

  [[nodiscard]] int order() const { return static_cast<int>(cells_.size()); }
  [[nodiscard]] int at(int i, int j) const { return cells_[i][j]; }
  [[nodiscard]] const std::vector<std::vector<int>>& cells() const { return cells_; }
  [[nodiscard]] bool is_latin() const;

  bool operator==(const LatinSquare&) const = default;

 private:
  std::vector<std::vector<int>> cells_;
};

struct MolsSet {
  std::vector<LatinSquare> latin;  // d - 1 squares L_a(i, j) = a i + j
  LatinSquare a;                   // A_ij = i
  LatinSquare b;                   // B_ij = j
};

/// Complete MOLS of prime-power order from GF(d) plus the two augmentation squares.
MolsSet mols_generate(int d);

bool are_orthogonal_latin(const LatinSquare& l, const LatinSquare& m);

}  // namespace mubforge
