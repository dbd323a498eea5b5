#include "mubforge/hadamard_catalogue.hpp"
#include "mubforge/numeric_core.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace mubforge;

TEST_CASE("is_hadamard accepts F2 and S6 and rejects the identity") {
  CMatrix f2(2, 2);
  f2 << 1, 1, 1, -1;
  f2 /= std::sqrt(2.0);
  CHECK(is_hadamard(f2).is_hadamard);
  CHECK(is_hadamard(tao_s6().matrix()).is_hadamard);

  const auto r = is_hadamard(CMatrix::Identity(3, 3));
  CHECK_FALSE(r.is_hadamard);
  CHECK(r.unitarity_deviation < 1e-15);
  CHECK(r.modulus_deviation == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK_THROWS_AS(is_hadamard(CMatrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("HadamardMatrix rejects non-Hadamard input and carries Butson tags") {
  CHECK_THROWS_AS(HadamardMatrix(CMatrix::Identity(2, 2)), DomainError);
  const auto h = HadamardMatrix::from_roots(3, {{0, 0, 0}, {0, 1, 2}, {0, 2, 1}});
  REQUIRE(h.tag(2, 1).has_value());
  CHECK(h.tag(2, 1)->exponent == 2);
  CHECK(h.tag(2, 1)->root_order == 3);
  CHECK((h.matrix() - oracle::fourier(3)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_FALSE(HadamardMatrix(oracle::fourier(3)).tag(0, 0).has_value());
}

TEST_CASE("tolerance profile bounds") {
  ToleranceProfile t;
  CHECK_NOTHROW(t.validate());
  t.eps_orth = 0.5;
  CHECK_THROWS_AS(t.validate(), DomainError);
  t.eps_orth = 0.0;
  CHECK_THROWS_AS(t.validate(), DomainError);
}

TEST_CASE("UnitVector checks normalization and canonicalizes the phase") {
  CVector v(2);
  v << Complex(0, 1), 0;
  CHECK_THROWS_AS(UnitVector(v * 2.0), DomainError);
  const UnitVector u(v);
  CHECK(u.canonical().amps()(0) == Complex(1, 0));
  CVector w(3);
  w << 0, Complex(0, -0.6), 0.8;
  const auto c = canonical_phase(w);
  CHECK(c(1).real() == doctest::Approx(0.6));
  CHECK(std::abs(c(1).imag()) < 1e-16);
}

TEST_CASE("OrthonormalBasis rejects non-orthonormal columns") {
  CMatrix m = CMatrix::Identity(3, 3);
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(OrthonormalBasis{m}, DomainError);
  CHECK_THROWS_AS(OrthonormalBasis(CMatrix::Zero(2, 3)), ShapeError);
  CHECK(OrthonormalBasis::standard(4).dim() == 4);
}

TEST_CASE("purity of product and maximally entangled states") {
  CVector p = CVector::Zero(4);
  p(0) = 1.0;
  CHECK(purity(p, 2, 2) == doctest::Approx(1.0));
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK(purity(bell, 2, 2) == doctest::Approx(0.5));
  CVector ghz = CVector::Zero(9);
  ghz(0) = ghz(4) = ghz(8) = 1.0 / std::sqrt(3.0);
  CHECK(purity(ghz, 3, 3) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(purity(ghz, 2, 3), ShapeError);
}

TEST_CASE("purity matches the loop oracle on random states") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const CVector v = random_state(6, rng);
    CHECK(purity(v, 2, 3) == doctest::Approx(oracle::purity(v, 2, 3)).epsilon(1e-12));
    CHECK(purity(v, 3, 2) == doctest::Approx(oracle::purity(v, 3, 2)).epsilon(1e-12));
  }
}

TEST_CASE("product_vector_test") {
  CVector v = CVector::Zero(4);
  v(1) = 1.0;
  CHECK(product_vector_test(v, 2, 2));
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK_FALSE(product_vector_test(bell, 2, 2));
}

TEST_CASE("columns of F6 are product vectors after CRT reordering") {
  const CMatrix f6 = oracle::fourier(6);
  const auto perm = crt_permutation(2, 3);
  for (int k = 0; k < 6; ++k) {
    CVector v(6);
    for (int j = 0; j < 6; ++j) v(perm[static_cast<std::size_t>(j)]) = f6(j, k);
    CHECK(product_vector_test(v, 2, 3));
  }
  CHECK_THROWS_AS(crt_permutation(2, 4), DomainError);
}

TEST_CASE("operator Schmidt rank") {
  CHECK(operator_schmidt_rank(kron(oracle::fourier(2), oracle::fourier(3)), 2, 3) == 1);
  std::mt19937_64 rng(5);
  CHECK(operator_schmidt_rank(haar_unitary(6, rng), 2, 3) == 4);
  // Realignment of S6 computed independently: R((i1 j1),(i2 j2)) = M((i1 i2),(j1 j2)).
  const CMatrix s6 = tao_s6().matrix();
  CMatrix r(4, 9);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < 3; ++i2)
        for (int j2 = 0; j2 < 3; ++j2) r(i1 * 2 + j1, i2 * 3 + j2) = s6(i1 * 3 + i2, j1 * 3 + j2);
  Eigen::JacobiSVD<CMatrix> svd(r);
  const auto sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-10 * s6.norm();
  CHECK(operator_schmidt_rank(s6, 2, 3) == rank);
  CHECK_THROWS_AS(operator_schmidt_rank(s6, 2, 2), ShapeError);
}

TEST_CASE("kron and fourier_matrix") {
  CMatrix a(1, 2), b(2, 1);
  a << 1, 2;
  b << 3, Complex(0, 1);
  const CMatrix k = kron(a, b);
  REQUIRE(k.rows() == 2);
  REQUIRE(k.cols() == 2);
  CHECK(k(0, 1) == Complex(6, 0));
  CHECK(k(1, 1) == Complex(0, 2));
  for (int d = 2; d <= 8; ++d) CHECK((fourier_matrix(d) - oracle::fourier(d)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hermitian_norm and projective distance") {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = -3.0;
  h(1, 1) = 2.0;
  CHECK(hermitian_norm(h) == doctest::Approx(3.0));
  CVector u = CVector::Zero(2), v = CVector::Zero(2);
  u(0) = 1.0;
  v(0) = Complex(0, 1);
  CHECK(projective_distance(u, v) == doctest::Approx(0.0));
}

TEST_CASE("root_of_unity handles negative exponents") {
  CHECK(std::abs(root_of_unity(-1, 4) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(root_of_unity(6, 3) - Complex(1, 0)) < 1e-15);
}
