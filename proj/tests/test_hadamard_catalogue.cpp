#include "mubforge/analysis.hpp"
#include "mubforge/hadamard_catalogue.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace mubforge;

TEST_CASE("catalogue names and arities") {
  CHECK(catalogue().size() == 7);
  for (const auto& e : catalogue()) {
    CHECK(family_from_string(to_string(e.family)) == e.family);
    CHECK(static_cast<int>(e.param_names.size()) == e.param_arity);
  }
  CHECK_THROWS_AS(family_from_string("H7"), DomainError);
  CHECK_THROWS_AS(generate(Family::fourier), DomainError);
  CHECK_THROWS_AS(generate(Family::fourier, {{"d", 2.5}}), DomainError);
  CHECK(generate(Family::fourier, {{"d", 7}}).phase_tags().has_value());
}

TEST_CASE("fixed matrices are Hadamard") {
  CHECK(is_hadamard(tao_s6().matrix()).is_hadamard);
  CHECK(is_hadamard(bjorck_c6().matrix()).is_hadamard);
  CHECK(is_hadamard(fourier6_family(0.0, 0.0).matrix()).is_hadamard);
  // F6(0,0) is the Fourier matrix up to row and column permutations.
  CHECK(same_haagerup_set(haagerup_set(fourier6_family(0, 0)), haagerup_set(HadamardMatrix(oracle::fourier(6)))));
}

TEST_CASE("C6 is circulant and S6 is a Butson matrix of order 3") {
  const auto c = structure_flags(bjorck_c6());
  CHECK(c.is_circulant);
  CHECK_FALSE(c.is_real);
  const auto s = structure_flags(tao_s6());
  REQUIRE(s.butson_order.has_value());
  CHECK(*s.butson_order == 3);
  REQUIRE(s.has_subunitary_3x3.has_value());
  CHECK(*s.has_subunitary_3x3);
  CHECK(s.h2_reducible.has_value());
  const auto f2 = structure_flags(HadamardMatrix(oracle::fourier(2)));
  CHECK(f2.is_real);
  CHECK_FALSE(f2.h2_reducible.has_value());
  CHECK_THROWS_AS(has_subunitary_3x3(HadamardMatrix(oracle::fourier(4))), UnsupportedError);
}

TEST_CASE("Karlsson family satisfies its Mobius relations") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int t = 0; t < 40; ++t) {
    const double theta = u(rng), phi = u(rng), lambda = 2.0 * u(rng);
    const KarlssonData k = karlsson_k6(theta, phi, lambda);
    CHECK(is_hadamard(k.matrix.matrix()).is_hadamard);
    const Complex aa = k.a(0, 1) * k.a(0, 1), ba = k.a(0, 0) * k.a(0, 0);
    const Complex ab = k.b(0, 1) * k.b(0, 1), bb = k.b(0, 0) * k.b(0, 0);
    const Complex* z = k.z;
    CHECK(std::abs(z[2] * z[2] - mobius(aa, ba, z[0] * z[0])) < 1e-10);
    CHECK(std::abs(z[2] * z[2] - mobius(ab, bb, z[1] * z[1])) < 1e-10);
    CHECK(std::abs(z[3] * z[3] - mobius(aa, ba, z[1] * z[1])) < 1e-10);
    CHECK(std::abs(z[3] * z[3] - mobius(ab, bb, z[0] * z[0])) < 1e-10);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(z[i]) == doctest::Approx(1.0));
    Eigen::Matrix2cd f2;
    f2 << 1, 1, 1, -1;
    CHECK((k.b + f2 + k.a).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK_THROWS_AS(karlsson_k6(kPi, 0.0, 0.0), DomainError);
}

TEST_CASE("Szollosi family") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const Complex alpha = sample_szollosi_alpha(rng);
    const auto roots = szollosi_roots(alpha);
    REQUIRE(roots.size() == 3);
    for (const Complex r : roots) {
      CHECK(std::abs(r) == doctest::Approx(1.0));
      CHECK(std::abs(r * r * r - alpha * r * r + std::conj(alpha) * r - 1.0) < 1e-9);
    }
    CHECK(is_hadamard(szollosi_x6(alpha).matrix()).is_hadamard);
  }
  CHECK_THROWS_AS(szollosi_x6(Complex(5.0, 0.0)), DomainError);
}

TEST_CASE("Zauner triples are MU triples with the identity") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int t = 0; t < 10; ++t) {
    const ZaunerTriple z = zauner_triple(u(rng));
    CHECK(unitarity_deviation(z.t) < 1e-10);
    CHECK((z.e1.matrix().adjoint() * z.e2.matrix() - z.t).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(oracle::mu_deviation({CMatrix::Identity(6, 6), z.e1.matrix(), z.e2.matrix()}) < 1e-10);
  }
}

TEST_CASE("dephasing") {
  std::mt19937_64 rng(29);
  const CMatrix h = random_equivalent(tao_s6().matrix(), rng);
  CHECK(is_hadamard(h).is_hadamard);
  const CMatrix d = dephase_matrix(h);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(d(0, i).imag()) < 1e-14);
    CHECK(d(0, i).real() > 0);
    CHECK(std::abs(d(i, 0).imag()) < 1e-14);
    CHECK(d(i, 0).real() > 0);
  }
  CHECK(is_hadamard(dephase(HadamardMatrix(h)).matrix()).is_hadamard);
}

TEST_CASE("Haagerup sets are equivalence invariants") {
  std::mt19937_64 rng(31);
  const auto s6 = haagerup_set(tao_s6());
  const auto f6 = haagerup_set(HadamardMatrix(oracle::fourier(6)));
  CHECK_FALSE(same_haagerup_set(s6, f6));
  for (int t = 0; t < 5; ++t) {
    CHECK(same_haagerup_set(s6, haagerup_set(HadamardMatrix(random_equivalent(tao_s6().matrix(), rng)))));
    CHECK(same_haagerup_set(f6, haagerup_set(HadamardMatrix(random_equivalent(oracle::fourier(6), rng)))));
  }
  // Fourier entries are sixth roots of unity, so are all Haagerup products.
  for (const Complex z : f6) CHECK(std::abs(std::pow(z, 6) - 1.0) < 1e-9);
  CHECK(f6.size() == 6);
  CHECK(s6.size() == 3);
}

TEST_CASE("defects") {
  CHECK(defect(HadamardMatrix(oracle::fourier(6))).defect == 4);
  CHECK(defect(tao_s6()).defect == 0);
  for (int d = 2; d <= 12; ++d) {
    CAPTURE(d);
    CHECK(fourier_defect(d) == oracle::fourier_defect(d));
    CHECK(defect(HadamardMatrix(oracle::fourier(d))).defect == oracle::fourier_defect(d));
  }
  CHECK(fourier_defect(6) == 4);
  CHECK(fourier_defect(7) == 0);
  CHECK_THROWS_AS(fourier_defect(1), DomainError);
}

TEST_CASE("D6 slice and Fourier family membership") {
  for (double lambda : {0.0, 0.7, 2.1}) CHECK(is_hadamard(dita_slice(lambda).matrix()).is_hadamard);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const HadamardMatrix f = fourier6_family(u(rng), u(rng));
    CHECK(is_hadamard(f.matrix()).is_hadamard);
    CHECK(oracle::mu_deviation({CMatrix::Identity(6, 6), f.matrix()}) < 1e-10);
  }
}
