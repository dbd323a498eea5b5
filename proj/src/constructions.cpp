#include "mubforge/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mubforge {

namespace {

struct MethodName {
  Method m;
  const char* name;
};

constexpr MethodName kMethodNames[] = {
    {Method::ivanovic, "ivanovic"},
    {Method::wootters_fields, "wootters_fields"},
    {Method::klappenecker_rotteler, "klappenecker_rotteler"},
    {Method::alltop, "alltop"},
    {Method::heisenberg_weyl, "heisenberg_weyl"},
    {Method::tensor_product, "tensor_product"},
    {Method::latin_square, "latin_square"},
    {Method::weighted_design, "weighted_design"},
    {Method::approx, "approx"},
    {Method::product_family_d6, "product_family_d6"},
};

double inv_sqrt(int d) { return 1.0 / std::sqrt(static_cast<double>(d)); }

void require_mu(const MUBSet& s, const char* who) {
  const double dev = max_mu_deviation(s.bases);
  if (dev > 1e-10) {
    throw ConstructionError(std::string(who) + ": output is not mutually unbiased (deviation " +
                            std::to_string(dev) + ")");
  }
}

}  // namespace

std::string to_string(Method m) {
  for (const auto& e : kMethodNames)
    if (e.m == m) return e.name;
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (const auto& e : kMethodNames)
    if (s == e.name) return e.m;
  throw DomainError("unknown construction method '" + s + "'");
}

double max_mu_deviation(const std::vector<OrthonormalBasis>& bases) {
  double worst = 0.0;
  for (std::size_t a = 0; a < bases.size(); ++a) {
    for (std::size_t b = a + 1; b < bases.size(); ++b) {
      const int d = bases[a].dim();
      if (bases[b].dim() != d) throw ShapeError("max_mu_deviation: dimension mismatch");
      const CMatrix g = bases[a].matrix().adjoint() * bases[b].matrix();
      worst = std::max(worst, (g.cwiseAbs2().array() - 1.0 / d).abs().maxCoeff());
    }
  }
  return worst;
}

namespace {

MUBSet ivanovic(int d) {
  if (!is_prime(d)) throw ConstructionError("ivanovic: d = " + std::to_string(d) + " must be prime");
  MUBSet s{d, {OrthonormalBasis::standard(d)}, Method::ivanovic, {}, std::nullopt};
  for (int b = 0; b < d; ++b) {
    CMatrix m(d, d);
    for (int v = 0; v < d; ++v) {
      for (int k = 0; k < d; ++k) {
        // For p = 2 the quadratic phase lives on Z_4: i^{b k^2} (-1)^{v k}.
        const Complex ph = d == 2 ? root_of_unity(static_cast<long long>(b) * k * k + 2LL * v * k, 4)
                                  : root_of_unity(static_cast<long long>(b) * k * k + static_cast<long long>(v) * k, d);
        m(k, v) = inv_sqrt(d) * ph;
      }
    }
    s.bases.emplace_back(std::move(m));
  }
  return s;
}

MUBSet wootters(int d) {
  const auto pp = prime_power(d);
  if (!pp || pp->first == 2) {
    throw ConstructionError("wootters_fields: d = " + std::to_string(d) + " must be an odd prime power");
  }
  const FieldExtension f(pp->first, pp->second);
  const int p = f.p();
  MUBSet s{d, {OrthonormalBasis::standard(d)}, Method::wootters_fields, {}, std::nullopt};
  for (int b = 0; b < d; ++b) {
    CMatrix m(d, d);
    for (int v = 0; v < d; ++v)
      for (int k = 0; k < d; ++k)
        m(k, v) = inv_sqrt(d) * root_of_unity(f.trace(f.add(f.mul(b, f.mul(k, k)), f.mul(v, k))), p);
    s.bases.emplace_back(std::move(m));
  }
  return s;
}

MUBSet alltop(int d) {
  const auto pp = prime_power(d);
  if (!pp || pp->first < 5) {
    throw ConstructionError("alltop: d = " + std::to_string(d) + " must be a power of a prime p >= 5");
  }
  const FieldExtension f(pp->first, pp->second);
  MUBSet s{d, {OrthonormalBasis::standard(d)}, Method::alltop, {}, std::nullopt};
  for (int b = 0; b < d; ++b) {
    CMatrix m(d, d);
    for (int v = 0; v < d; ++v) {
      for (int k = 0; k < d; ++k) {
        const int t = f.add(k, b);
        const int arg = f.add(f.mul(t, f.mul(t, t)), f.mul(v, t));
        m(k, v) = inv_sqrt(d) * root_of_unity(f.trace(arg), f.p());
      }
    }
    s.bases.emplace_back(std::move(m));
  }
  return s;
}

MUBSet klappenecker_rotteler(int d) {
  const auto pp = prime_power(d);
  if (!pp || pp->first != 2) {
    throw ConstructionError("klappenecker_rotteler: d = " + std::to_string(d) + " must be a power of 2");
  }
  const GaloisRing r(pp->second);
  const auto& t = r.teichmuller();
  MUBSet s{d, {OrthonormalBasis::standard(d)}, Method::klappenecker_rotteler, {}, std::nullopt};
  for (int b : t) {
    CMatrix m(d, d);
    for (int vi = 0; vi < d; ++vi) {
      const int label = r.add(b, r.times_two(t[static_cast<std::size_t>(vi)]));
      for (int ki = 0; ki < d; ++ki) {
        m(ki, vi) = inv_sqrt(d) * root_of_unity(r.trace(r.mul(label, t[static_cast<std::size_t>(ki)])), 4);
      }
    }
    s.bases.emplace_back(std::move(m));
  }
  return s;
}

}  // namespace

MUBSet construct_complete(Method method, int d) {
  if (d < 2) throw ConstructionError("construct_complete: d must be at least 2");
  MUBSet s;
  switch (method) {
    case Method::ivanovic: s = ivanovic(d); break;
    case Method::wootters_fields: s = wootters(d); break;
    case Method::alltop: s = alltop(d); break;
    case Method::klappenecker_rotteler: s = klappenecker_rotteler(d); break;
    case Method::heisenberg_weyl:
      if (!is_prime(d)) throw ConstructionError("heisenberg_weyl: d = " + std::to_string(d) + " must be prime");
      s = heisenberg_weyl_classes(d).eigenbases;
      break;
    default:
      throw ConstructionError("construct_complete: method " + to_string(method) + " does not build complete sets");
  }
  require_mu(s, "construct_complete");
  return s;
}

std::vector<Method> applicable_complete_methods(int d) {
  std::vector<Method> out;
  const auto pp = prime_power(d);
  if (!pp) return out;
  if (pp->second == 1) out.push_back(Method::ivanovic);
  if (pp->first != 2) out.push_back(Method::wootters_fields);
  if (pp->first == 2) out.push_back(Method::klappenecker_rotteler);
  if (pp->first >= 5) out.push_back(Method::alltop);
  if (pp->second == 1) out.push_back(Method::heisenberg_weyl);
  return out;
}

CMatrix shift_operator(int d) {
  CMatrix x = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  return x;
}

CMatrix clock_operator(int d) {
  CMatrix z = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) z(k, k) = root_of_unity(k, d);
  return z;
}

HWClasses heisenberg_weyl_classes(int p) {
  if (!is_prime(p)) throw UnsupportedError("heisenberg_weyl_classes: p = " + std::to_string(p) + " is not prime");
  const CMatrix x = shift_operator(p);
  const CMatrix z = clock_operator(p);
  HWClasses out;
  out.eigenbases = MUBSet{p, {OrthonormalBasis::standard(p)}, Method::heisenberg_weyl, {}, std::nullopt};

  auto make_class = [&](const CMatrix& u, std::string label) {
    HWOperatorClass c{p, std::move(label), {}};
    CMatrix cur = CMatrix::Identity(p, p);
    for (int k = 0; k < p; ++k) {
      c.members.push_back(cur);
      cur = cur * u;
    }
    return c;
  };

  out.classes.push_back(make_class(z, "Z"));
  CMatrix zb = CMatrix::Identity(p, p);
  for (int b = 0; b < p; ++b) {
    out.classes.push_back(make_class(x * zb, b == 0 ? "X" : "XZ^" + std::to_string(b)));
    // Eigenvectors of X Z^b: v_k = lambda^{-k} exp(i pi b k (k-1) / p) / sqrt(p)
    // with lambda = exp(i pi b (p-1) / p) w^v.
    CMatrix m(p, p);
    for (int v = 0; v < p; ++v) {
      const double lam = kPi * b * (p - 1) / p + kTwoPi * v / p;
      for (int k = 0; k < p; ++k) {
        const double a = -lam * k + kPi * b * k * (k - 1) / p;
        m(k, v) = inv_sqrt(p) * Complex(std::cos(a), std::sin(a));
      }
    }
    out.eigenbases.bases.emplace_back(std::move(m));
    zb = zb * z;
  }
  return out;
}

MUBSet tensor_product_mubs(const std::vector<MUBSet>& factors) {
  if (factors.empty()) throw DomainError("tensor_product_mubs: empty factor list");
  int mu = factors.front().size();
  int d = 1;
  for (const auto& f : factors) {
    mu = std::min(mu, f.size());
    d *= f.dim;
  }
  MUBSet s{d, {}, Method::tensor_product, {{"mu", static_cast<double>(mu)}}, std::nullopt};
  for (int b = 0; b < mu; ++b) {
    CMatrix m = factors.front().bases[static_cast<std::size_t>(b)].matrix();
    for (std::size_t i = 1; i < factors.size(); ++i) m = kron(m, factors[i].bases[static_cast<std::size_t>(b)].matrix());
    s.bases.emplace_back(std::move(m));
  }
  require_mu(s, "tensor_product_mubs");
  return s;
}

MUBSet latin_square_mubs(int s, const std::vector<LatinSquare>& mols, const HadamardMatrix& h) {
  if (h.dim() != s) throw ShapeError("latin_square_mubs: Hadamard order differs from s");
  for (const auto& l : mols) {
    if (l.order() != s) throw ShapeError("latin_square_mubs: square order differs from s");
    if (!l.is_latin()) throw DomainError("latin_square_mubs: input square is not Latin");
  }
  for (std::size_t a = 0; a < mols.size(); ++a)
    for (std::size_t b = a + 1; b < mols.size(); ++b)
      if (!are_orthogonal_latin(mols[a], mols[b])) {
        throw DomainError("latin_square_mubs: input squares are not mutually orthogonal");
      }

  std::vector<std::vector<int>> ca(static_cast<std::size_t>(s), std::vector<int>(static_cast<std::size_t>(s)));
  auto cb = ca;
  for (int i = 0; i < s; ++i)
    for (int k = 0; k < s; ++k) {
      ca[i][k] = i;
      cb[i][k] = k;
    }
  std::vector<LatinSquare> all{LatinSquare(ca, true), LatinSquare(cb, true)};
  all.insert(all.end(), mols.begin(), mols.end());

  // Unitary H with entries of modulus 1/sqrt(s) spreads each line over s vectors.
  const CMatrix& hm = h.matrix();
  const int d = s * s;
  MUBSet out{d, {}, Method::latin_square, {{"s", static_cast<double>(s)}, {"mols", static_cast<double>(mols.size())}},
             std::nullopt};
  for (const auto& sq : all) {
    CMatrix m = CMatrix::Zero(d, d);
    int col = 0;
    for (int j = 0; j < s; ++j) {
      std::vector<int> points;
      for (int i = 0; i < s; ++i)
        for (int k = 0; k < s; ++k)
          if (sq.at(i, k) == j) points.push_back(i * s + k);
      for (int mcol = 0; mcol < s; ++mcol, ++col)
        for (int t = 0; t < s; ++t) m(points[static_cast<std::size_t>(t)], col) = hm(t, mcol);
    }
    out.bases.emplace_back(std::move(m));
  }
  require_mu(out, "latin_square_mubs");
  return out;
}

MUBSet weighted_design(int d) {
  const auto pp = prime_power(d + 1);
  if (d < 2 || !pp) throw UnsupportedError("weighted_design: d + 1 = " + std::to_string(d + 1) + " is not a prime power");
  const FieldExtension f(pp->first, pp->second);
  // d = 6 uses the generator 3 of F_7 as in its explicit display.
  const int y = d == 6 ? 3 : f.generator();
  MUBSet s{d, {OrthonormalBasis::standard(d)}, Method::weighted_design, {{"generator", static_cast<double>(y)}},
           std::vector<double>{1.0 / (d * (d + 1.0))}};
  std::vector<int> ypow(static_cast<std::size_t>(d));
  int cur = 1;
  for (int k = 0; k < d; ++k) {
    ypow[static_cast<std::size_t>(k)] = cur;
    cur = f.mul(cur, y);
  }
  for (int b = 0; b <= d; ++b) {
    // b = 0 is the field zero; d = 6 labels it b = 7.
    CMatrix m(d, d);
    for (int v = 0; v < d; ++v)
      for (int k = 0; k < d; ++k)
        m(k, v) = inv_sqrt(d) * root_of_unity(static_cast<long long>(v) * k, d) *
                  root_of_unity(f.trace(f.mul(b, ypow[static_cast<std::size_t>(k)])), f.p());
    s.bases.emplace_back(std::move(m));
    s.weights->push_back(1.0 / ((d + 1.0) * (d + 1.0)));
  }
  return s;
}

int smallest_prime_one_mod(int d) {
  for (long long p = d + 1;; p += d)
    if (is_prime(p)) return static_cast<int>(p);
}

ApproxMubReport approx_mub(int d, int p) {
  if (d < 2) throw DomainError("approx_mub: d must be at least 2");
  if (p == 0) p = smallest_prime_one_mod(d);
  if (!is_prime(p)) throw DomainError("approx_mub: p = " + std::to_string(p) + " is not prime");
  ApproxMubReport rep;
  rep.p = p;
  rep.set = MUBSet{d, {OrthonormalBasis::standard(d)}, Method::approx, {{"p", static_cast<double>(p)}}, std::nullopt};
  for (int b = 1; b <= d; ++b) {
    CMatrix m(d, d);
    for (int v = 0; v < d; ++v)
      for (int k = 0; k < d; ++k)
        m(k, v) = inv_sqrt(d) * root_of_unity(static_cast<long long>(b) * k * k, p) *
                  root_of_unity(static_cast<long long>(v) * k, d);
    rep.set.bases.emplace_back(std::move(m));
  }
  for (std::size_t a = 0; a < rep.set.bases.size(); ++a)
    for (std::size_t b = a + 1; b < rep.set.bases.size(); ++b) {
      const CMatrix g = rep.set.bases[a].matrix().adjoint() * rep.set.bases[b].matrix();
      rep.max_overlap_sq = std::max(rep.max_overlap_sq, g.cwiseAbs2().maxCoeff());
    }
  rep.bound = std::sqrt(static_cast<double>(p)) / d;
  rep.within_bound = rep.max_overlap_sq <= rep.bound + 1e-12;
  return rep;
}

ProductFamily product_family_from_string(const std::string& s) {
  static const std::pair<const char*, ProductFamily> names[] = {
      {"P0", ProductFamily::P0}, {"P1", ProductFamily::P1}, {"P2", ProductFamily::P2},
      {"P3", ProductFamily::P3}, {"T0", ProductFamily::T0}, {"T1", ProductFamily::T1}};
  for (const auto& [n, f] : names)
    if (s == n) return f;
  throw DomainError("unknown product family '" + s + "'");
}

std::string to_string(ProductFamily f) {
  static const char* names[] = {"P0", "P1", "P2", "P3", "T0", "T1"};
  return names[static_cast<int>(f)];
}

CMatrix qubit_basis(char label) {
  const double s = inv_sqrt(2);
  CMatrix m(2, 2);
  switch (label) {
    case 'z': m = CMatrix::Identity(2, 2); break;
    case 'x': m << s, s, s, -s; break;
    case 'y': m << s, s, Complex(0, s), Complex(0, -s); break;
    default: throw DomainError(std::string("qubit_basis: unknown label ") + label);
  }
  return m;
}

CMatrix qutrit_basis(char label) {
  static const HWClasses hw = heisenberg_weyl_classes(3);
  switch (label) {
    case 'z': return hw.eigenbases.bases[0].matrix();
    case 'x': return hw.eigenbases.bases[1].matrix();
    case 'y': return hw.eigenbases.bases[2].matrix();
    case 'w': return hw.eigenbases.bases[3].matrix();
    default: throw DomainError(std::string("qutrit_basis: unknown label ") + label);
  }
}

namespace {

double param(const Params& p, const char* key) {
  const auto it = p.find(key);
  return it == p.end() ? kPi / 5.0 : it->second;
}

void check_range(double v, double lo, double hi, bool open_lo, const char* key) {
  const bool ok = (open_lo ? v > lo : v >= lo) && v < hi;
  if (!ok) throw DomainError(std::string("product_family_d6: parameter ") + key + " out of range");
}

CMatrix diag3(double a, double b) {
  CMatrix r = CMatrix::Zero(3, 3);
  r(0, 0) = 1.0;
  r(1, 1) = std::polar(1.0, a);
  r(2, 2) = std::polar(1.0, b);
  return r;
}

/// Columns |q_i> (x) |V_j> with the qubit column selecting the qutrit basis.
CMatrix indirect(const CMatrix& q, const std::vector<CMatrix>& t) {
  CMatrix m(6, 6);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b) m.col(a * 3 + b) = kron(CVector(q.col(a)), CVector(t[static_cast<std::size_t>(a)].col(b)));
  return m;
}

}  // namespace

MUBSet product_family_d6(ProductFamily which, const Params& params) {
  for (const auto& [k, v] : params) {
    if (k == "xi" || k == "eta" || k == "zeta" || k == "chi") {
      check_range(v, 0.0, kTwoPi, false, k.c_str());
    } else if (k == "sigma" || k == "tau") {
      check_range(v, 0.0, kPi, true, k.c_str());
    } else {
      throw DomainError("product_family_d6: unknown parameter " + k);
    }
  }
  const CMatrix qz = qubit_basis('z'), qx = qubit_basis('x'), qy = qubit_basis('y');
  const CMatrix tz = qutrit_basis('z'), tx = qutrit_basis('x'), ty = qutrit_basis('y'), tw = qutrit_basis('w');
  MUBSet s{6, {}, Method::product_family_d6, {}, std::nullopt};
  auto add = [&](const CMatrix& m) { s.bases.emplace_back(m); };

  switch (which) {
    case ProductFamily::P0:
      add(kron(qz, tz));
      add(kron(qx, tx));
      break;
    case ProductFamily::P1: {
      const double xi = param(params, "xi"), eta = param(params, "eta");
      s.params = {{"xi", xi}, {"eta", eta}};
      add(kron(qz, tz));
      add(indirect(qx, {tx, diag3(xi, eta) * tx}));
      break;
    }
    case ProductFamily::P2:
      add(indirect(qz, {tz, ty}));
      add(indirect(qx, {tx, tw}));
      break;
    case ProductFamily::P3: {
      const double zeta = param(params, "zeta"), chi = param(params, "chi");
      const double sigma = param(params, "sigma"), tau = param(params, "tau");
      s.params = {{"zeta", zeta}, {"chi", chi}, {"sigma", sigma}, {"tau", tau}};
      const CMatrix sx = tx * diag3(zeta, chi) * tx.adjoint();
      add(indirect(qz, {tz, sx * tz}));
      auto r = [&](double ang) {
        CMatrix m(2, 2);
        const Complex e = std::polar(inv_sqrt(2), ang);
        m << inv_sqrt(2), inv_sqrt(2), e, -e;
        return m;
      };
      const CMatrix rq[3] = {qx, r(sigma), r(tau)};
      CMatrix m(6, 6);
      // Qutrit index j selects the qubit basis; columns ordered a * 3 + j.
      for (int j = 0; j < 3; ++j)
        for (int a = 0; a < 2; ++a) m.col(a * 3 + j) = kron(CVector(rq[j].col(a)), CVector(tx.col(j)));
      add(m);
      break;
    }
    case ProductFamily::T0:
      add(kron(qz, tz));
      add(kron(qx, tx));
      add(kron(qy, ty));
      break;
    case ProductFamily::T1:
      add(kron(qz, tz));
      add(kron(qx, tx));
      add(indirect(qy, {ty, tw}));
      break;
  }
  require_mu(s, "product_family_d6");
  return s;
}

OrthonormalBasis complete_missing_basis(const std::vector<OrthonormalBasis>& bases) {
  if (bases.empty()) throw DomainError("complete_missing_basis: no bases given");
  const int d = bases.front().dim();
  if (static_cast<int>(bases.size()) != d) {
    throw DomainError("complete_missing_basis: need exactly d bases of a complete set");
  }
  const int cols = d * d + 1;
  CMatrix a(d * d, cols);
  int c = 0;
  const CMatrix id = CMatrix::Identity(d, d);
  a.col(c++) = Eigen::Map<const CVector>(id.data(), d * d);
  for (const auto& b : bases) {
    for (int v = 0; v < d; ++v) {
      const CVector col = b.column(v);
      const CMatrix p = col * col.adjoint() - id / static_cast<double>(d);
      a.col(c++) = Eigen::Map<const CVector>(p.data(), d * d);
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-9 * sv(0)) ++rank;
  const int nullity = d * d - rank;
  if (nullity != d - 1) {
    throw NumericalError("complete_missing_basis: complement has dimension " + std::to_string(nullity) +
                         ", expected " + std::to_string(d - 1));
  }
  // A fixed generic real combination of Hermitian parts of the complement.
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g = CMatrix::Zero(d, d);
  for (int i = rank; i < d * d; ++i) {
    const CVector u = svd.matrixU().col(i);
    const CMatrix m = Eigen::Map<const CMatrix>(u.data(), d, d);
    g += n(rng) * (m + m.adjoint()) + n(rng) * Complex(0, 1) * (m - m.adjoint());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  return OrthonormalBasis(es.eigenvectors(), 1e-9);
}

}  // namespace mubforge
