#include "mubforge/analysis.hpp"
#include "mubforge/hadamard_catalogue.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace mubforge;

namespace {

std::vector<CMatrix> matrices(const std::vector<OrthonormalBasis>& bases) {
  std::vector<CMatrix> out;
  for (const auto& b : bases) out.push_back(b.matrix());
  return out;
}

OrthonormalBasis perturbed(const OrthonormalBasis& b, double eps, std::mt19937_64& rng) {
  // exp(i eps H) for a random Hermitian H keeps the basis orthonormal.
  const int d = b.dim();
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix h(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) h(i, j) = Complex(n(rng), n(rng));
  h = (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector ph(d);
  for (int i = 0; i < d; ++i) ph(i) = std::polar(1.0, eps * es.eigenvalues()(i));
  const CMatrix u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  return OrthonormalBasis(u * b.matrix());
}

}  // namespace

TEST_CASE("check_mu_set on a complete set") {
  const MUBSet s = construct_complete(Method::wootters_fields, 3);
  const MUReport r = check_mu_set(s.bases);
  CHECK(r.is_mu);
  CHECK(r.num_bases == 4);
  CHECK(r.f_value < 1e-18);
  CHECK(r.avg_distance == doctest::Approx(1.0));
  CHECK(std::abs(r.max_mu_deviation - oracle::mu_deviation(matrices(s.bases))) < 1e-14);
  CHECK_THROWS_AS(check_mu_set({s.bases.front()}), DomainError);
}

TEST_CASE("identical bases have zero distance and positive F") {
  const OrthonormalBasis f(fourier_matrix(4));
  const MUReport r = check_mu_set({f, f});
  CHECK_FALSE(r.is_mu);
  CHECK(r.avg_distance == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.f_value > 1.0);
}

TEST_CASE("Welch sums match the naive oracle and the closed forms") {
  for (int d : {2, 3, 4, 5, 7}) {
    CAPTURE(d);
    const MUBSet s = construct_complete(applicable_complete_methods(d).front(), d);
    const auto vs = all_vectors(s.bases);
    const auto r = welch_and_design_check(s);
    CHECK(r.welch_k1 == doctest::Approx(oracle::welch_sum(vs, 1)).epsilon(1e-12));
    CHECK(r.welch_k2 == doctest::Approx(oracle::welch_sum(vs, 2)).epsilon(1e-12));
    CHECK(r.welch_k1 == doctest::Approx(d * (d + 1.0) * (d + 1.0)));
    CHECK(r.welch_k2 == doctest::Approx(2.0 * d * (d + 1.0)));
    CHECK(r.two_design_deviation < 1e-9);
    CHECK_FALSE(r.weighted);
  }
}

TEST_CASE("perturbing one basis breaks the design") {
  std::mt19937_64 rng(41);
  MUBSet s = construct_complete(Method::ivanovic, 3);
  s.bases[2] = perturbed(s.bases[2], 1e-2, rng);
  const auto r = welch_and_design_check(s);
  CHECK(std::abs(r.welch_k2 - 24.0) > 1e-6);
  CHECK(r.two_design_deviation > 1e-6);
}

TEST_CASE("symmetric projector") {
  for (int d : {2, 3, 4}) {
    const CMatrix p = symmetric_projector(d);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(p.trace().real() == doctest::Approx(d * (d + 1) / 2.0));
  }
}

TEST_CASE("entanglement content") {
  const MUBSet s4 = construct_complete(Method::klappenecker_rotteler, 4);
  const auto e4 = entanglement_content(s4, 2, 2);
  CHECK(e4.complete);
  CHECK(e4.holds);
  CHECK(e4.content == doctest::Approx(16.0).epsilon(1e-12));
  double naive = 0.0;
  for (const auto& v : all_vectors(s4.bases)) naive += oracle::purity(v, 2, 2);
  CHECK(e4.content == doctest::Approx(naive).epsilon(1e-12));

  const auto e9 = entanglement_content(construct_complete(Method::wootters_fields, 9), 3, 3);
  CHECK(e9.content == doctest::Approx(54.0).epsilon(1e-12));
  CHECK(e9.holds);

  const auto t = entanglement_content(product_family_d6(ProductFamily::T0), 2, 3);
  CHECK_FALSE(t.complete);
  CHECK(t.target == doctest::Approx(18.0));
  CHECK(t.content == doctest::Approx(18.0).epsilon(1e-12));
  CHECK(t.holds);
  CHECK_THROWS_AS(entanglement_content(s4, 2, 3), ShapeError);
}

TEST_CASE("witness value against the oracle") {
  for (int d : {2, 3}) {
    const MUBSet s = construct_complete(Method::ivanovic, d);
    CVector phi = CVector::Zero(d * d);
    for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(d);
    const CMatrix rho = phi * phi.adjoint();
    const auto w = witness_value(s.bases, rho);
    CHECK(w.value == doctest::Approx(d + 1.0));
    CHECK(w.value == doctest::Approx(oracle::witness(matrices(s.bases), rho)));
    CHECK(w.bound == doctest::Approx(2.0 * d / d));
    CHECK(w.violated);

    std::mt19937_64 rng(43);
    for (int t = 0; t < 20; ++t) {
      const CVector p = kron(random_state(d, rng), random_state(d, rng));
      const auto wp = witness_value(s.bases, p * p.adjoint());
      CHECK_FALSE(wp.violated);
      CHECK(wp.value == doctest::Approx(oracle::witness(matrices(s.bases), p * p.adjoint())));
    }
  }
  const MUBSet s2 = construct_complete(Method::ivanovic, 2);
  CHECK_THROWS_AS(witness_value(s2.bases, CMatrix::Identity(4, 4)), DomainError);
  CHECK_THROWS_AS(witness_value(s2.bases, CMatrix::Identity(3, 3) / 3.0), ShapeError);
}

TEST_CASE("QRAC success probability of MU bases") {
  for (int d : {2, 3, 5}) {
    const MUBSet s = construct_complete(Method::ivanovic, d);
    CHECK(qrac_probability({s.bases[0], s.bases[1]}) == doctest::Approx(0.5 + 0.5 / std::sqrt(d)));
  }
}

TEST_CASE("Fourier functions at gamma = 0") {
  for (int d : {2, 3, 5}) {
    const MUBSet s = construct_complete(Method::ivanovic, d);
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<int> u(-3, 3);
    std::vector<std::vector<int>> gammas(20, std::vector<int>(static_cast<std::size_t>(d)));
    for (auto& g : gammas)
      for (auto& x : g) x = u(rng);
    const auto r = fourier_linear_constraints(s, gammas);
    const double d3 = std::pow(d, 3), d4 = std::pow(d, 4);
    CHECK(r.e0 == doctest::Approx(d3).epsilon(1e-12));
    CHECK(r.f0 == doctest::Approx(d4).epsilon(1e-12));
    CHECK(r.holds);
  }
  MUBSet bad = construct_complete(Method::ivanovic, 3);
  bad.bases.pop_back();
  CHECK_THROWS_AS(fourier_linear_constraints(bad, {}), DomainError);
}

TEST_CASE("Delsarte h0 vanishes exactly on Hadamard unitaries") {
  CHECK(std::abs(delsarte_h0(fourier_matrix(6))) < 1e-12);
  CHECK(delsarte_h0(CMatrix::Identity(4, 4)) == doctest::Approx(3.0));
}
