#include "mubforge/finite_algebra.hpp"

#include <cmath>
#include <set>

namespace mubforge {

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

std::vector<std::pair<int, int>> factorize(int d) {
  std::vector<std::pair<int, int>> out;
  for (int p = 2; static_cast<long long>(p) * p <= d; ++p) {
    int e = 0;
    while (d % p == 0) {
      d /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (d > 1) out.emplace_back(d, 1);
  return out;
}

std::optional<std::pair<int, int>> prime_power(int d) {
  if (d < 2) return std::nullopt;
  const auto f = factorize(d);
  if (f.size() != 1) return std::nullopt;
  return f.front();
}

namespace {

int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

FieldExtension::FieldExtension(int p, int n) : p_(p), n_(n) {
  if (!is_prime(p)) throw DomainError("gf_construct: p = " + std::to_string(p) + " is not prime");
  if (n < 1) throw DomainError("gf_construct: n must be positive");
  if (std::pow(static_cast<double>(p), n) > 65536.0) {
    throw UnsupportedError("gf_construct: fields larger than 2^16 are not supported");
  }
  q_ = ipow(p, n);

  // Scan monic polynomials with c_{n-1} as the most significant digit.
  for (int code = 0; code < q_; ++code) {
    std::vector<int> low(static_cast<std::size_t>(n));
    int c = code;
    for (int i = 0; i < n; ++i) {
      low[static_cast<std::size_t>(i)] = c % p;
      c /= p;
    }
    if (low[0] == 0) continue;
    // Multiplication by the root a: shift and reduce with a^n = -sum c_i a^i.
    auto times_root = [&](const std::vector<int>& v) {
      std::vector<int> w(static_cast<std::size_t>(n), 0);
      const int top = v[static_cast<std::size_t>(n - 1)];
      for (int i = n - 1; i >= 1; --i) w[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i - 1)];
      for (int i = 0; i < n; ++i) {
        w[static_cast<std::size_t>(i)] =
            ((w[static_cast<std::size_t>(i)] - top * low[static_cast<std::size_t>(i)]) % p + p) % p;
      }
      return w;
    };
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    cur[0] = 1;
    std::vector<int> ex;
    ex.reserve(static_cast<std::size_t>(q_ - 1));
    std::vector<char> seen(static_cast<std::size_t>(q_), 0);
    bool ok = true;
    for (int k = 0; k < q_ - 1; ++k) {
      int idx = 0;
      for (int i = n - 1; i >= 0; --i) idx = idx * p + cur[static_cast<std::size_t>(i)];
      if (idx == 0 || seen[static_cast<std::size_t>(idx)]) {
        ok = false;
        break;
      }
      seen[static_cast<std::size_t>(idx)] = 1;
      ex.push_back(idx);
      cur = times_root(cur);
    }
    if (!ok) continue;
    poly_ = low;
    poly_.push_back(1);
    exp_ = std::move(ex);
    break;
  }
  if (exp_.empty()) throw ConstructionError("gf_construct: no primitive polynomial found");

  log_.assign(static_cast<std::size_t>(q_), -1);
  for (int k = 0; k < q_ - 1; ++k) log_[static_cast<std::size_t>(exp_[static_cast<std::size_t>(k)])] = k;

  trace_.assign(static_cast<std::size_t>(q_), 0);
  for (int x = 0; x < q_; ++x) {
    int acc = 0, y = x;
    for (int j = 0; j < n_; ++j) {
      acc = add(acc, y);
      y = pow(y, p_);
    }
    if (acc >= p_) throw ConstructionError("gf_construct: trace left the prime field");
    trace_[static_cast<std::size_t>(x)] = acc;
  }
}

std::vector<int> FieldExtension::coeffs(int x) const {
  std::vector<int> c(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    c[static_cast<std::size_t>(i)] = x % p_;
    x /= p_;
  }
  return c;
}

int FieldExtension::from_coeffs(const std::vector<int>& c) const {
  int idx = 0;
  for (int i = n_ - 1; i >= 0; --i) idx = idx * p_ + ((c[static_cast<std::size_t>(i)] % p_) + p_) % p_;
  return idx;
}

int FieldExtension::add(int x, int y) const {
  int r = 0, scale = 1;
  for (int i = 0; i < n_; ++i) {
    r += ((x % p_ + y % p_) % p_) * scale;
    x /= p_;
    y /= p_;
    scale *= p_;
  }
  return r;
}

int FieldExtension::neg(int x) const {
  int r = 0, scale = 1;
  for (int i = 0; i < n_; ++i) {
    r += ((p_ - x % p_) % p_) * scale;
    x /= p_;
    scale *= p_;
  }
  return r;
}

int FieldExtension::mul(int x, int y) const {
  if (x == 0 || y == 0) return 0;
  return exp_[static_cast<std::size_t>((log_[static_cast<std::size_t>(x)] + log_[static_cast<std::size_t>(y)]) % (q_ - 1))];
}

int FieldExtension::inv(int x) const {
  if (x == 0) throw DomainError("FieldExtension::inv: zero has no inverse");
  return exp_[static_cast<std::size_t>((q_ - 1 - log_[static_cast<std::size_t>(x)]) % (q_ - 1))];
}

int FieldExtension::pow(int x, long long e) const {
  if (e == 0) return 1;
  if (x == 0) return 0;
  long long k = (static_cast<long long>(log_[static_cast<std::size_t>(x)]) * (e % (q_ - 1))) % (q_ - 1);
  if (k < 0) k += q_ - 1;
  return exp_[static_cast<std::size_t>(k)];
}

int FieldExtension::exp(long long k) const {
  long long m = k % (q_ - 1);
  if (m < 0) m += q_ - 1;
  return exp_[static_cast<std::size_t>(m)];
}

GaloisRing::GaloisRing(int n) : n_(n) {
  if (n < 1) throw DomainError("GaloisRing: n must be positive");
  if (n > 8) throw UnsupportedError("GaloisRing: n > 8 is not supported");
  size_ = ipow(4, n);
  const FieldExtension f(2, n);
  const auto& fp = f.primitive_poly();

  // Graeffe lift: h(x^2) = +-(e(x)^2 - o(x)^2) mod 4.
  std::vector<int> e(static_cast<std::size_t>(n + 1), 0), o(static_cast<std::size_t>(n + 1), 0);
  for (int i = 0; i <= n; ++i) (i % 2 == 0 ? e : o)[static_cast<std::size_t>(i)] = fp[static_cast<std::size_t>(i)];
  std::vector<int> g(static_cast<std::size_t>(2 * n + 1), 0);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      g[static_cast<std::size_t>(i + j)] += e[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(j)] -
                                            o[static_cast<std::size_t>(i)] * o[static_cast<std::size_t>(j)];
  h_.assign(static_cast<std::size_t>(n + 1), 0);
  for (int k = 0; k <= n; ++k) h_[static_cast<std::size_t>(k)] = ((g[static_cast<std::size_t>(2 * k)] % 4) + 4) % 4;
  const int lead = h_[static_cast<std::size_t>(n)];
  if (lead == 3) {
    for (int& c : h_) c = (4 - c) % 4;
  } else if (lead != 1) {
    throw ConstructionError("GaloisRing: Hensel lift is not monic");
  }

  // Teichmuller set: 0 and powers of xi = x.
  // For n = 1 the lift of x + 1 is x + 3, whose root is the constant 1.
  const int root = n == 1 ? (4 - h_[0]) % 4 : 4;
  teich_.push_back(0);
  int cur = 1;
  for (int k = 0; k < ipow(2, n) - 1; ++k) {
    teich_.push_back(cur);
    cur = mul(cur, root);
  }
  if (cur != 1) throw ConstructionError("GaloisRing: lifted root does not have order 2^n - 1");

  teich_b_.assign(static_cast<std::size_t>(size_), -1);
  teich_v_.assign(static_cast<std::size_t>(size_), -1);
  for (int b : teich_) {
    for (int v : teich_) {
      const int x = add(b, times_two(v));
      if (teich_b_[static_cast<std::size_t>(x)] != -1) {
        throw ConstructionError("GaloisRing: 2-adic decomposition is not unique");
      }
      teich_b_[static_cast<std::size_t>(x)] = b;
      teich_v_[static_cast<std::size_t>(x)] = v;
    }
  }
}

std::vector<int> GaloisRing::digits(int x) const {
  std::vector<int> c(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    c[static_cast<std::size_t>(i)] = x % 4;
    x /= 4;
  }
  return c;
}

int GaloisRing::pack(const std::vector<int>& c) const {
  int idx = 0;
  for (int i = n_ - 1; i >= 0; --i) idx = idx * 4 + ((c[static_cast<std::size_t>(i)] % 4) + 4) % 4;
  return idx;
}

int GaloisRing::add(int x, int y) const {
  auto a = digits(x);
  const auto b = digits(y);
  for (int i = 0; i < n_; ++i) a[static_cast<std::size_t>(i)] += b[static_cast<std::size_t>(i)];
  return pack(a);
}

int GaloisRing::times_two(int x) const { return add(x, x); }

int GaloisRing::mul(int x, int y) const {
  const auto a = digits(x);
  const auto b = digits(y);
  std::vector<int> prod(static_cast<std::size_t>(2 * n_ - 1), 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      prod[static_cast<std::size_t>(i + j)] = (prod[static_cast<std::size_t>(i + j)] +
                                               a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)]) % 4;
  for (int k = 2 * n_ - 2; k >= n_; --k) {
    const int top = prod[static_cast<std::size_t>(k)];
    if (top == 0) continue;
    for (int i = 0; i < n_; ++i) {
      int& slot = prod[static_cast<std::size_t>(k - n_ + i)];
      slot = ((slot - top * h_[static_cast<std::size_t>(i)]) % 4 + 4) % 4;
    }
    prod[static_cast<std::size_t>(k)] = 0;
  }
  prod.resize(static_cast<std::size_t>(n_));
  return pack(prod);
}

std::pair<int, int> GaloisRing::decompose(int x) const {
  return {teich_b_[static_cast<std::size_t>(x)], teich_v_[static_cast<std::size_t>(x)]};
}

int GaloisRing::frobenius(int x) const {
  const auto [b, v] = decompose(x);
  return add(mul(b, b), times_two(mul(v, v)));
}

int GaloisRing::trace(int x) const {
  int acc = 0, y = x;
  for (int j = 0; j < n_; ++j) {
    acc = add(acc, y);
    y = frobenius(y);
  }
  if (acc >= 4) throw NumericalError("GaloisRing::trace: value left Z_4");
  return acc;
}

Complex GaloisRing::exponential_sum(int r) const {
  Complex s = 0.0;
  for (int t : teich_) s += root_of_unity(trace(mul(r, t)), 4);
  return s;
}

double gauss_sum_modulus(const FieldExtension& f, int b, int v) {
  if (f.p() == 2) throw UnsupportedError("gauss_sum_modulus: the quadratic Gauss sum identity fails for p = 2");
  if (b == 0) throw DomainError("gauss_sum_modulus: b must be nonzero");
  Complex s = 0.0;
  for (int k = 0; k < f.order(); ++k) {
    const int arg = f.add(f.mul(b, f.mul(k, k)), f.mul(v, k));
    s += root_of_unity(f.trace(arg), f.p());
  }
  return std::abs(s);
}

LatinSquare::LatinSquare(std::vector<std::vector<int>> cells, bool allow_non_latin)
    : cells_(std::move(cells)) {
  const int d = order();
  if (d == 0) throw ShapeError("LatinSquare: empty");
  for (const auto& row : cells_) {
    if (static_cast<int>(row.size()) != d) throw ShapeError("LatinSquare: not square");
    for (int c : row)
      if (c < 0 || c >= d) throw DomainError("LatinSquare: symbol out of range");
  }
  if (!allow_non_latin && !is_latin()) throw DomainError("LatinSquare: rows or columns repeat a symbol");
}

bool LatinSquare::is_latin() const {
  const int d = order();
  for (int i = 0; i < d; ++i) {
    std::vector<char> r(static_cast<std::size_t>(d), 0), c(static_cast<std::size_t>(d), 0);
    for (int j = 0; j < d; ++j) {
      if (r[static_cast<std::size_t>(cells_[i][j])]++ || c[static_cast<std::size_t>(cells_[j][i])]++) return false;
    }
  }
  return true;
}

bool are_orthogonal_latin(const LatinSquare& l, const LatinSquare& m) {
  const int d = l.order();
  if (m.order() != d) throw ShapeError("are_orthogonal_latin: order mismatch");
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) pairs.emplace(l.at(i, j), m.at(i, j));
  return static_cast<int>(pairs.size()) == d * d;
}

MolsSet mols_generate(int d) {
  const auto pp = prime_power(d);
  if (!pp) throw UnsupportedError("mols_generate: order " + std::to_string(d) + " is not a prime power");
  const FieldExtension f(pp->first, pp->second);
  std::vector<std::vector<int>> a(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d)));
  auto b = a;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      a[i][j] = i;
      b[i][j] = j;
    }
  MolsSet out{{}, LatinSquare(a, true), LatinSquare(b, true)};
  for (int s = 1; s < d; ++s) {
    std::vector<std::vector<int>> cells(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) cells[i][j] = f.add(f.mul(s, i), j);
    out.latin.emplace_back(std::move(cells));
  }
  return out;
}

}  // namespace mubforge
