#include "mubforge/hadamard_catalogue.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace mubforge {

namespace {

const Complex kI(0.0, 1.0);

Complex w3(int k) { return root_of_unity(k, 3); }

double get(const FamilyParams& p, const std::string& key, std::optional<double> fallback = std::nullopt) {
  const auto it = p.find(key);
  if (it != p.end()) return it->second;
  if (fallback) return *fallback;
  throw DomainError("missing family parameter '" + key + "'");
}

CMatrix normalized(const CMatrix& m) { return m / std::sqrt(static_cast<double>(m.rows())); }

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::fourier: return "fourier";
    case Family::fourier6_family: return "fourier6_family";
    case Family::tao_s6: return "tao_s6";
    case Family::karlsson_k6_3: return "karlsson_k6_3";
    case Family::szollosi_x6_2: return "szollosi_x6_2";
    case Family::bjorck_c6: return "bjorck_c6";
    case Family::dita_slice: return "dita_slice";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  for (const auto& e : catalogue())
    if (to_string(e.family) == s) return e.family;
  throw DomainError("unknown Hadamard family '" + s + "'");
}

const std::vector<CatalogueEntry>& catalogue() {
  static const std::vector<CatalogueEntry> entries{
      {Family::fourier, 0, 1, {"d"}},
      {Family::fourier6_family, 6, 2, {"a", "b"}},
      {Family::tao_s6, 6, 0, {}},
      {Family::karlsson_k6_3, 6, 3, {"theta", "phi", "lambda"}},
      {Family::szollosi_x6_2, 6, 2, {"alpha_re", "alpha_im"}},
      {Family::bjorck_c6, 6, 0, {}},
      {Family::dita_slice, 6, 1, {"lambda"}},
  };
  return entries;
}

HadamardMatrix generate(Family family, const FamilyParams& params) {
  switch (family) {
    case Family::fourier: {
      const double d = get(params, "d");
      if (d < 1 || d != std::floor(d)) throw DomainError("fourier: d must be a positive integer");
      const int n = static_cast<int>(d);
      std::vector<std::vector<int>> e(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) e[j][k] = (j * k) % n;
      return HadamardMatrix::from_roots(n, e);
    }
    case Family::fourier6_family: return fourier6_family(get(params, "a", 0.0), get(params, "b", 0.0));
    case Family::tao_s6: return tao_s6();
    case Family::karlsson_k6_3:
      return karlsson_k6(get(params, "theta"), get(params, "phi"), get(params, "lambda", 0.0)).matrix;
    case Family::szollosi_x6_2: return szollosi_x6({get(params, "alpha_re"), get(params, "alpha_im")});
    case Family::bjorck_c6: return bjorck_c6();
    case Family::dita_slice: return dita_slice(get(params, "lambda", 0.0));
  }
  throw DomainError("generate: unknown family");
}

HadamardMatrix tao_s6() {
  return HadamardMatrix::from_roots(3, {{0, 0, 0, 0, 0, 0},
                                        {0, 0, 1, 1, 2, 2},
                                        {0, 1, 0, 2, 2, 1},
                                        {0, 1, 2, 0, 1, 2},
                                        {0, 2, 2, 1, 0, 1},
                                        {0, 2, 1, 2, 1, 0}});
}

HadamardMatrix fourier6_family(double a, double b) {
  const Complex x = std::polar(1.0, kTwoPi * a), y = std::polar(1.0, kTwoPi * b);
  const Complex w = w3(1), w2 = w3(2);
  CMatrix m(6, 6);
  m << 1, 1, 1, 1, 1, 1,
       1, -w2 * x, w, -x, w2, -w * x,
       1, w * y, w2, y, w, w2 * y,
       1, -1, 1, -1, 1, -1,
       1, w2 * x, w, x, w2, w * x,
       1, -w * y, w2, -y, w, -w2 * y;
  return HadamardMatrix(normalized(m));
}

HadamardMatrix bjorck_c6() {
  const double s3 = std::sqrt(3.0);
  const Complex a((1.0 - s3) / 2.0, std::sqrt(s3 / 2.0));
  const Complex x0[6] = {1.0, kI / a, -1.0 / a, -kI, -a, kI * a};
  CMatrix m(6, 6);
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) m(j, k) = x0[((j - k) % 6 + 6) % 6];
  return HadamardMatrix(normalized(m));
}

Complex mobius(Complex alpha, Complex beta, Complex z) {
  return (alpha * z - beta) / (std::conj(beta) * z - std::conj(alpha));
}

KarlssonData karlsson_k6(double theta, double phi, double lambda) {
  if (!(theta >= 0.0 && theta < kPi) || !(phi >= 0.0 && phi < kPi)) {
    throw DomainError("karlsson_k6: theta and phi must lie in [0, pi)");
  }
  const double h = std::sqrt(3.0) / 2.0;
  const Complex a11 = -0.5 + kI * h * (std::cos(theta) + std::polar(1.0, -phi) * std::sin(theta));
  const Complex a12 = -0.5 + kI * h * (-std::cos(theta) + std::polar(1.0, phi) * std::sin(theta));
  Eigen::Matrix2cd f2, am, bm;
  f2 << 1, 1, 1, -1;
  am << a11, a12, std::conj(a12), -std::conj(a11);
  bm = -f2 - am;

  const Complex alpha_a = a12 * a12, beta_a = a11 * a11;
  const Complex alpha_b = bm(0, 1) * bm(0, 1), beta_b = bm(0, 0) * bm(0, 0);
  const Complex z1 = std::polar(1.0, lambda);
  const Complex z3sq = mobius(alpha_a, beta_a, z1 * z1);
  const Complex z4sq = mobius(alpha_b, beta_b, z1 * z1);
  // Inverse of M_A is the Mobius map with alpha conjugated.
  const Complex z2sq = mobius(std::conj(alpha_a), beta_a, z4sq);

  auto left = [](Complex z) {
    Eigen::Matrix2cd m;
    m << 1, 1, z, -z;
    return m;
  };
  auto right = [](Complex z) {
    Eigen::Matrix2cd m;
    m << 1, z, 1, -z;
    return m;
  };

  // Every sign choice of the square roots gives a member of the family.
  const Complex z2 = std::sqrt(z2sq), z3 = std::sqrt(z3sq), z4 = std::sqrt(z4sq);
  const Eigen::Matrix2cd zz1 = left(z1), zz2 = left(z2), zz3 = right(z3), zz4 = right(z4);
  CMatrix m(6, 6);
  m.block<2, 2>(0, 0) = f2;
  m.block<2, 2>(0, 2) = zz1;
  m.block<2, 2>(0, 4) = zz2;
  m.block<2, 2>(2, 0) = zz3;
  m.block<2, 2>(2, 2) = 0.5 * zz3 * am * zz1;
  m.block<2, 2>(2, 4) = 0.5 * zz3 * bm * zz2;
  m.block<2, 2>(4, 0) = zz4;
  m.block<2, 2>(4, 2) = 0.5 * zz4 * bm * zz1;
  m.block<2, 2>(4, 4) = 0.5 * zz4 * am * zz2;
  const CMatrix n = normalized(m);
  const auto rep = is_hadamard(n);
  if (!rep.is_hadamard) {
    throw NumericalError("karlsson_k6: assembled matrix is not Hadamard (deviation " +
                         std::to_string(std::max(rep.unitarity_deviation, rep.modulus_deviation)) + ")");
  }
  return KarlssonData{HadamardMatrix(n), {z1, z2, z3, z4}, am, bm};
}

HadamardMatrix dita_slice(double lambda) {
  return karlsson_k6(std::acos(1.0 / std::sqrt(3.0)), kPi / 4.0, lambda).matrix;
}

std::vector<Complex> szollosi_roots(Complex alpha) {
  Eigen::Matrix3cd c = Eigen::Matrix3cd::Zero();
  // Companion matrix of z^3 + c2 z^2 + c1 z + c0.
  const Complex c2 = -alpha, c1 = std::conj(alpha), c0 = -1.0;
  c(1, 0) = 1.0;
  c(2, 1) = 1.0;
  c(0, 2) = -c0;
  c(1, 2) = -c1;
  c(2, 2) = -c2;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(c, false);
  std::vector<Complex> r(es.eigenvalues().data(), es.eigenvalues().data() + 3);
  std::sort(r.begin(), r.end(), [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
  return r;
}

namespace {

CMatrix szollosi_display(Complex x, Complex y, Complex u, Complex v) {
  CMatrix m(6, 6);
  m << 1, 1, 1, 1, 1, 1,
       1, x * x * y, x * y * y, x * y / (u * v), u * x * y, v * x * y,
       1, x / y, x * x * y, x / u, x / v, u * v * x,
       1, u * v * x, u * x * y, -1, -u * x * y, -u * v * x,
       1, x / u, v * x * y, -x / u, -1, -v * x * y,
       1, x / v, x * y / (u * v), -x * y / (u * v), -x / v, -1;
  return normalized(m);
}

bool unimodular_roots(const std::vector<Complex>& r, double eps) {
  return std::all_of(r.begin(), r.end(), [&](Complex z) { return std::abs(std::abs(z) - 1.0) <= eps; });
}

}  // namespace

HadamardMatrix szollosi_x6(Complex alpha) {
  const auto rp = szollosi_roots(alpha);
  const auto rm = szollosi_roots(-alpha);
  // Companion eigenvalues of a triple root lose half the digits.
  const double eps = 1e-7;
  if (!unimodular_roots(rp, eps) || !unimodular_roots(rm, eps)) {
    throw DomainError("szollosi_x6: alpha lies outside the admissible region (non-unimodular cubic roots)");
  }
  double best = 1e300;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          if (k == l) continue;
          const CMatrix m = szollosi_display(rp[i], rp[j], rm[k], rm[l]);
          const auto rep = is_hadamard(m);
          best = std::min(best, std::max(rep.unitarity_deviation, rep.modulus_deviation));
          if (rep.is_hadamard) return HadamardMatrix(m);
        }
    }
  throw NumericalError("szollosi_x6: no root assignment yields a Hadamard matrix (best deviation " +
                       std::to_string(best) + ")");
}

Complex sample_szollosi_alpha(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Complex x = std::polar(1.0, u(rng)), y = std::polar(1.0, u(rng));
    const Complex alpha = x + y + 1.0 / (x * y);
    const auto rm = szollosi_roots(-alpha);
    if (unimodular_roots(rm, 1e-9) && unimodular_roots(szollosi_roots(alpha), 1e-9)) {
      // Keep away from repeated roots, where the companion solve is ill-conditioned.
      double gap = 1e300;
      for (const auto& r : {szollosi_roots(alpha), rm})
        for (int i = 0; i < 3; ++i)
          for (int j = i + 1; j < 3; ++j) gap = std::min(gap, std::abs(r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)]));
      if (gap > 1e-2) return alpha;
    }
  }
  throw NumericalError("sample_szollosi_alpha: rejection sampling failed");
}

CMatrix zauner_t(double x) {
  const Complex e = std::polar(1.0, x), ec = std::conj(e);
  CMatrix t(6, 6);
  // Entry (0,1) is -e^{-ix}; with +e^{-ix} the upper-left block is not circulant and T is not unitary.
  t << 1, -ec, e, -1, kI * ec, kI * e,
       e, 1, -ec, kI * e, -1, kI * ec,
       -ec, e, 1, kI * ec, kI * e, -1,
       1, kI * ec, kI * e, 1, ec, -e,
       kI * e, 1, kI * ec, -e, 1, ec,
       kI * ec, kI * e, 1, ec, -e, 1;
  return normalized(t);
}

ZaunerTriple zauner_triple(double x) {
  const CMatrix t = zauner_t(x);
  if (unitarity_deviation(t) > 1e-10) {
    throw NumericalError("zauner_triple: T(x) is not unitary (deviation " + std::to_string(unitarity_deviation(t)) + ")");
  }
  const CMatrix f3 = fourier_matrix(3);
  // Circulant blocks diagonalize as A = F^dag diag(a) F.
  Complex a[2][2][3];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const CMatrix bar = f3 * t.block(3 * r, 3 * c, 3, 3) * f3.adjoint();
      double off = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j) off = std::max(off, std::abs(bar(i, j)));
      if (off > 1e-10) throw NumericalError("zauner_triple: block is not circulant");
      for (int k = 0; k < 3; ++k) a[r][c][k] = bar(k, k);
    }

  Eigen::Vector3cd u[4];
  for (int k = 0; k < 3; ++k) {
    Eigen::Matrix2cd s;
    s << a[0][0][k], a[0][1][k], a[1][0][k], a[1][1][k];
    const double dev = (s.adjoint() * s - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    if (dev > 1e-10) {
      throw NumericalError("zauner_triple: S_" + std::to_string(k + 1) + " is not unitary (deviation " +
                           std::to_string(dev) + ")");
    }
    Complex e1, e2, eb4, emb3;
    if (std::abs(s(0, 0)) < 1e-12) {
      // e1 = -e2: fix b4 = 0.
      eb4 = 1.0;
      e1 = s(0, 1);
      e2 = -e1;
      emb3 = s(1, 0) / e1;
    } else {
      const Complex ratio = s(1, 1) / s(0, 0);
      const Complex prod = s.determinant() / ratio;
      const Complex disc = std::sqrt(s(0, 0) * s(0, 0) - prod);
      e1 = s(0, 0) + disc;
      e2 = s(0, 0) - disc;
      const Complex m12 = 0.5 * (e1 - e2);
      if (std::abs(m12) < 1e-12) {
        eb4 = 1.0;
        emb3 = ratio;
      } else {
        eb4 = s(0, 1) / m12;
        emb3 = s(1, 0) / m12;
      }
    }
    u[0](k) = e1;
    u[1](k) = e2;
    u[2](k) = std::conj(emb3);
    u[3](k) = eb4;
  }
  const double r2 = 1.0 / std::sqrt(2.0);
  const CMatrix u1 = u[0].asDiagonal(), u2 = u[1].asDiagonal(), u3 = u[2].asDiagonal(), u4 = u[3].asDiagonal();
  CMatrix e1(6, 6), e2(6, 6);
  e1 << f3, u3 * f3, f3, -u3 * f3;
  e2 << u1 * f3, u1 * u4 * f3, u2 * f3, -u2 * u4 * f3;
  e1 *= r2;
  e2 *= r2;
  const double err = (e1.adjoint() * e2 - t).cwiseAbs().maxCoeff();
  if (err > 1e-9) throw NumericalError("zauner_triple: E1^dag E2 differs from T by " + std::to_string(err));
  return {HadamardMatrix(e1), HadamardMatrix(e2), t};
}

CMatrix dephase_matrix(const CMatrix& h) {
  const int d = static_cast<int>(h.rows());
  auto ph = [](Complex z) { return z / std::abs(z); };
  CMatrix out(d, d);
  const Complex p00 = ph(h(0, 0));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) out(j, k) = h(j, k) * std::conj(ph(h(j, 0))) * std::conj(ph(h(0, k))) * p00;
  return out;
}

HadamardMatrix dephase(const HadamardMatrix& h) { return HadamardMatrix(dephase_matrix(h.matrix())); }

std::vector<Complex> haagerup_set(const HadamardMatrix& h, double eps_dedup) {
  const int d = h.dim();
  const CMatrix m = h.matrix() * std::sqrt(static_cast<double>(d));
  std::vector<Complex> vals;
  vals.reserve(static_cast<std::size_t>(d) * d * d * d);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      for (int r = 0; r < d; ++r) {
        const Complex pqr = m(p, q) * std::conj(m(r, q));
        for (int s = 0; s < d; ++s) vals.push_back(pqr * m(r, s) * std::conj(m(p, s)));
      }
  // Sort by angle in [0, 2pi) and merge neighbours closer than eps.
  auto key = [](Complex z) {
    double a = std::arg(z);
    return a < 0 ? a + kTwoPi : a;
  };
  std::sort(vals.begin(), vals.end(), [&](Complex a, Complex b) { return key(a) < key(b); });
  std::vector<Complex> out;
  for (const auto& v : vals)
    if (out.empty() || std::abs(v - out.back()) > eps_dedup) out.push_back(v);
  if (out.size() > 1 && std::abs(out.front() - out.back()) <= eps_dedup) out.pop_back();
  return out;
}

bool same_haagerup_set(const std::vector<Complex>& a, const std::vector<Complex>& b, double eps) {
  auto covered = [&](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    return std::all_of(x.begin(), x.end(), [&](Complex z) {
      return std::any_of(y.begin(), y.end(), [&](Complex w) { return std::abs(z - w) <= eps; });
    });
  };
  return covered(a, b) && covered(b, a);
}

DefectReport defect(const HadamardMatrix& h) {
  const int d = h.dim();
  const CMatrix m = dephase_matrix(h.matrix());
  const int n = (d - 1) * (d - 1);
  const int eqs = d * (d - 1);  // real and imaginary parts for j < k
  RMatrix sys = RMatrix::Zero(eqs, n);
  auto var = [d](int j, int l) { return (j - 1) * (d - 1) + (l - 1); };
  int row = 0;
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k, row += 2) {
      for (int l = 0; l < d; ++l) {
        const Complex c = m(j, l) * std::conj(m(k, l));
        if (j > 0 && l > 0) {
          sys(row, var(j, l)) += c.real();
          sys(row + 1, var(j, l)) += c.imag();
        }
        if (l > 0) {
          sys(row, var(k, l)) -= c.real();
          sys(row + 1, var(k, l)) -= c.imag();
        }
      }
    }
  DefectReport rep;
  rep.matrix_order = d;
  if (n == 0) return rep;
  Eigen::JacobiSVD<RMatrix> svd(sys);
  const auto& sv = svd.singularValues();
  const double cut = 1e-8 * sv(0);
  rep.system_rank = static_cast<int>((sv.array() > cut).count());
  rep.defect = n - rep.system_rank;
  return rep;
}

int fourier_defect(int d) {
  if (d < 2) throw DomainError("fourier_defect: d must be at least 2");
  int s = 0;
  for (int k = 1; k < d; ++k) s += std::gcd(k, d) - 1;
  return s;
}

StructureFlags structure_flags(const HadamardMatrix& h, const ToleranceProfile& tol) {
  const int d = h.dim();
  const CMatrix u = h.matrix() * std::sqrt(static_cast<double>(d));
  StructureFlags f;
  for (int r = 1; r <= 2 * d && !f.butson_order; ++r) {
    bool ok = true;
    for (int j = 0; j < d && ok; ++j)
      for (int k = 0; k < d && ok; ++k) {
        const double t = std::arg(u(j, k)) * r / kTwoPi;
        ok = std::abs(t - std::round(t)) * kTwoPi / r < tol.eps_orth;
      }
    if (ok) f.butson_order = r;
  }
  f.is_real = u.imag().cwiseAbs().maxCoeff() < tol.eps_mod;
  f.is_circulant = true;
  for (int j = 0; j < d && f.is_circulant; ++j)
    for (int k = 0; k < d; ++k)
      if (std::abs(u(j, k) - u((j + 1) % d, (k + 1) % d)) > tol.eps_mod * 10.0) {
        f.is_circulant = false;
        break;
      }
  if (d == 6) {
    const CMatrix dp = dephase_matrix(u);
    f.h2_reducible = ((dp.array() + 1.0).abs() < 1e-8).any();
    f.has_subunitary_3x3 = has_subunitary_3x3(h, tol);
  }
  return f;
}

bool has_subunitary_3x3(const HadamardMatrix& h, const ToleranceProfile& tol) {
  if (h.dim() != 6) throw UnsupportedError("has_subunitary_3x3: only defined for order 6");
  const CMatrix& m = h.matrix();
  std::vector<std::array<int, 3>> triples;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b)
      for (int c = b + 1; c < 6; ++c) triples.push_back({a, b, c});
  for (const auto& r : triples)
    for (const auto& c : triples) {
      Eigen::Matrix3cd s;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s(i, j) = m(r[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
      const Eigen::Matrix3cd g = s.adjoint() * s;
      const Complex scale = g(0, 0);
      if ((g - scale * Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff() < tol.eps_orth) return true;
    }
  return false;
}

CMatrix random_equivalent(const CMatrix& h, std::mt19937_64& rng) {
  const int d = static_cast<int>(h.rows());
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<int> pr(static_cast<std::size_t>(d)), pc(static_cast<std::size_t>(d));
  std::iota(pr.begin(), pr.end(), 0);
  std::iota(pc.begin(), pc.end(), 0);
  std::shuffle(pr.begin(), pr.end(), rng);
  std::shuffle(pc.begin(), pc.end(), rng);
  std::vector<Complex> dr(static_cast<std::size_t>(d)), dc(static_cast<std::size_t>(d));
  for (auto& z : dr) z = std::polar(1.0, u(rng));
  for (auto& z : dc) z = std::polar(1.0, u(rng));
  CMatrix out(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      out(j, k) = dr[static_cast<std::size_t>(j)] * h(pr[static_cast<std::size_t>(j)], pc[static_cast<std::size_t>(k)]) *
                  dc[static_cast<std::size_t>(k)];
  return out;
}

}  // namespace mubforge
