#include "mubforge/numeric_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mubforge {

void ToleranceProfile::validate() const {
  for (double e : {eps_unitary, eps_mod, eps_mu, eps_orth, eps_dedup}) {
    if (!(e > 0.0 && e < 1e-2)) {
      throw DomainError("tolerance values must lie in (0, 1e-2)");
    }
  }
}

Complex root_of_unity(long long k, long long r) {
  long long m = k % r;
  if (m < 0) m += r;
  const double a = kTwoPi * static_cast<double>(m) / static_cast<double>(r);
  return {std::cos(a), std::sin(a)};
}

UnitVector::UnitVector(CVector amps, double eps_norm) : amps_(std::move(amps)) {
  if (amps_.size() == 0) throw ShapeError("UnitVector: empty amplitude list");
  if (!amps_.allFinite()) throw DomainError("UnitVector: non-finite amplitude");
  if (std::abs(amps_.squaredNorm() - 1.0) > eps_norm) {
    throw DomainError("UnitVector: amplitudes are not normalized");
  }
}

UnitVector UnitVector::canonical() const { return UnitVector(canonical_phase(amps_)); }

OrthonormalBasis::OrthonormalBasis(CMatrix columns, double eps_unitary)
    : cols_(std::move(columns)) {
  if (cols_.rows() != cols_.cols() || cols_.rows() == 0) {
    throw ShapeError("OrthonormalBasis: need a non-empty square matrix");
  }
  if (unitarity_deviation(cols_) > eps_unitary) {
    throw DomainError("OrthonormalBasis: columns are not orthonormal");
  }
}

OrthonormalBasis OrthonormalBasis::standard(int d) {
  return OrthonormalBasis(CMatrix::Identity(d, d));
}

HadamardMatrix::HadamardMatrix(CMatrix entries, const ToleranceProfile& tol)
    : m_(std::move(entries)) {
  const auto rep = is_hadamard(m_, tol);
  if (!rep.is_hadamard) {
    throw DomainError("HadamardMatrix: not a complex Hadamard matrix (unitarity dev " +
                      std::to_string(rep.unitarity_deviation) + ", modulus dev " +
                      std::to_string(rep.modulus_deviation) + ")");
  }
}

HadamardMatrix HadamardMatrix::from_roots(int r, const std::vector<std::vector<int>>& exps) {
  const int d = static_cast<int>(exps.size());
  CMatrix m(d, d);
  std::vector<PhaseTag> tags;
  tags.reserve(static_cast<std::size_t>(d * d));
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    if (static_cast<int>(exps[j].size()) != d) throw ShapeError("from_roots: ragged rows");
    for (int k = 0; k < d; ++k) {
      int e = exps[j][k] % r;
      if (e < 0) e += r;
      m(j, k) = s * root_of_unity(e, r);
      tags.push_back({r, e});
    }
  }
  HadamardMatrix h(std::move(m));
  h.tags_ = std::move(tags);
  return h;
}

std::optional<PhaseTag> HadamardMatrix::tag(int j, int k) const {
  if (!tags_) return std::nullopt;
  return (*tags_)[static_cast<std::size_t>(j * dim() + k)];
}

double unitarity_deviation(const CMatrix& m) {
  const CMatrix g = m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols());
  return g.cwiseAbs().maxCoeff();
}

HadamardReport is_hadamard(const CMatrix& m, const ToleranceProfile& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ShapeError("is_hadamard: matrix must be square and non-empty");
  }
  HadamardReport rep;
  const double target = 1.0 / std::sqrt(static_cast<double>(m.rows()));
  rep.unitarity_deviation = unitarity_deviation(m);
  rep.modulus_deviation = (m.cwiseAbs().array() - target).abs().maxCoeff();
  rep.is_hadamard = m.allFinite() && rep.unitarity_deviation < tol.eps_unitary &&
                    rep.modulus_deviation < tol.eps_mod;
  return rep;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix fourier_matrix(int d) {
  CMatrix f(d, d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) f(j, k) = s * root_of_unity(static_cast<long long>(j) * k, d);
  return f;
}

namespace {
void check_bipartite(Eigen::Index dim, int d1, int d2, const char* who) {
  if (d1 < 1 || d2 < 1 || static_cast<Eigen::Index>(d1) * d2 != dim) {
    throw ShapeError(std::string(who) + ": dimension is not d1*d2");
  }
}
}  // namespace

CMatrix reduced_first(const CVector& v, int d1, int d2) {
  check_bipartite(v.size(), d1, d2, "reduced_first");
  // v reshaped as d1 x d2 coefficient matrix C; rho_1 = C C^dag.
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      c(v.data(), d1, d2);
  return c * c.adjoint();
}

double purity(const CVector& v, int d1, int d2) {
  const CMatrix rho = reduced_first(v, d1, d2);
  return (rho * rho).trace().real();
}

CMatrix realign(const CMatrix& m, int d1, int d2) {
  check_bipartite(m.rows(), d1, d2, "realign");
  if (m.rows() != m.cols()) throw ShapeError("realign: matrix must be square");
  CMatrix r(d1 * d1, d2 * d2);
  for (int i1 = 0; i1 < d1; ++i1)
    for (int i2 = 0; i2 < d2; ++i2)
      for (int j1 = 0; j1 < d1; ++j1)
        for (int j2 = 0; j2 < d2; ++j2)
          r(i1 * d1 + j1, i2 * d2 + j2) = m(i1 * d2 + i2, j1 * d2 + j2);
  return r;
}

int operator_schmidt_rank(const CMatrix& m, int d1, int d2, const ToleranceProfile& tol) {
  const CMatrix r = realign(m, d1, d2);
  Eigen::JacobiSVD<CMatrix> svd(r);
  const double cut = tol.eps_mod * m.norm();
  const auto& s = svd.singularValues();
  return static_cast<int>((s.array() > cut).count());
}

bool product_vector_test(const CVector& v, int d1, int d2, const ToleranceProfile& tol) {
  return purity(v, d1, d2) >= 1.0 - tol.eps_mu;
}

std::vector<int> crt_permutation(int d1, int d2) {
  if (std::gcd(d1, d2) != 1) throw DomainError("crt_permutation: factors must be coprime");
  std::vector<int> perm(static_cast<std::size_t>(d1 * d2));
  for (int j = 0; j < d1 * d2; ++j) perm[static_cast<std::size_t>(j)] = (j % d1) * d2 + (j % d2);
  return perm;
}

CVector canonical_phase(const CVector& v, double eps) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double a = std::abs(v(k));
    if (a > eps) return v * (std::conj(v(k)) / a);
  }
  return v;
}

double projective_distance(const CVector& u, const CVector& v) {
  return 1.0 - std::abs(u.dot(v));
}

CMatrix haar_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

CVector random_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(n(rng), n(rng));
  return v / v.norm();
}

double hermitian_norm(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace mubforge
