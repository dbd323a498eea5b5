// Randomized invariants. Every case draws from a fixed seed.

#include "mubforge/analysis.hpp"
#include "mubforge/document.hpp"
#include "mubforge/hadamard_catalogue.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace mubforge;

TEST_CASE("equivalence preserves Hadamard property, defect and Haagerup set") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const HadamardMatrix h = fourier6_family(u(rng), u(rng));
    const HadamardMatrix e(random_equivalent(h.matrix(), rng));
    CHECK(defect(e).defect == defect(h).defect);
    CHECK(same_haagerup_set(haagerup_set(e), haagerup_set(h)));
  }
}

TEST_CASE("MU property and F are invariant under a global unitary") {
  std::mt19937_64 rng(103);
  for (int d : {3, 4, 5}) {
    const MUBSet s = construct_complete(applicable_complete_methods(d).front(), d);
    const CMatrix u = haar_unitary(d, rng);
    std::vector<OrthonormalBasis> rotated;
    for (const auto& b : s.bases) rotated.emplace_back(u * b.matrix());
    const auto r = check_mu_set(rotated);
    CHECK(r.is_mu);
    CHECK(r.f_value < 1e-18);
    const auto w = welch_and_design_check(all_vectors(rotated));
    CHECK(w.two_design_deviation < 1e-9);
  }
}

TEST_CASE("F vanishes only on MU sets") {
  std::mt19937_64 rng(107);
  for (int t = 0; t < 10; ++t) {
    const OrthonormalBasis a(haar_unitary(4, rng)), b(haar_unitary(4, rng));
    const auto r = check_mu_set({a, b});
    CHECK(r.f_value > 1e-6);
    CHECK(r.avg_distance < 1.0);
    CHECK(r.avg_distance > 0.0);
  }
}

TEST_CASE("purity bounds") {
  std::mt19937_64 rng(109);
  for (int t = 0; t < 50; ++t) {
    for (auto [d1, d2] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}}) {
      const CVector v = random_state(d1 * d2, rng);
      const double p = purity(v, d1, d2);
      CHECK(p <= 1.0 + 1e-12);
      CHECK(p >= 1.0 / std::min(d1, d2) - 1e-12);
      CHECK(p == doctest::Approx(oracle::purity(v, d1, d2)).epsilon(1e-12));
      CHECK(purity(kron(random_state(d1, rng), random_state(d2, rng)), d1, d2) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("operator Schmidt rank is bounded and multiplicative on products") {
  std::mt19937_64 rng(113);
  for (int t = 0; t < 10; ++t) {
    const CMatrix u = haar_unitary(6, rng);
    const int r = operator_schmidt_rank(u, 2, 3);
    CHECK(r >= 1);
    CHECK(r <= 4);
    CHECK(operator_schmidt_rank(kron(haar_unitary(2, rng), haar_unitary(3, rng)), 2, 3) == 1);
  }
}

TEST_CASE("canonical phase is idempotent and phase blind") {
  std::mt19937_64 rng(127);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int t = 0; t < 50; ++t) {
    const CVector v = random_state(5, rng);
    const CVector c = canonical_phase(v);
    CHECK((canonical_phase(c) - c).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((canonical_phase(std::polar(1.0, u(rng)) * v) - c).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(projective_distance(v, c) < 1e-12);
  }
}

TEST_CASE("documents round trip arbitrary doubles exactly") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int t = 0; t < 20; ++t) {
    MatrixDocument doc;
    doc.dim = 3;
    doc.kind = "mubset";
    for (int b = 0; b < 2; ++b) {
      CMatrix m(3, 3);
      for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = Complex(u(rng) * 1e-7, u(rng) * 1e9);
      doc.payload.push_back(m);
    }
    doc.payload[0](1, 1) = Complex(5e-324, -0.0);
    doc.metadata["seed"] = rng();
    CHECK(parse_document(serialize(doc)) == doc);
  }
}

TEST_CASE("witness bound holds on separable mixtures") {
  std::mt19937_64 rng(137);
  for (int d : {2, 3}) {
    const MUBSet s = construct_complete(Method::ivanovic, d);
    const double bound = (d + (d + 1.0) - 1.0) / d;
    for (int t = 0; t < 20; ++t) {
      CMatrix rho = CMatrix::Zero(d * d, d * d);
      for (int k = 0; k < 4; ++k) {
        const CVector p = kron(random_state(d, rng), random_state(d, rng));
        rho += 0.25 * p * p.adjoint();
      }
      CHECK(witness_value(s.bases, rho).value <= bound + 1e-10);
    }
  }
}

TEST_CASE("Zauner triples over random x") {
  std::mt19937_64 rng(139);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 10; ++t) {
    const ZaunerTriple z = zauner_triple(u(rng));
    const auto r = check_mu_set({OrthonormalBasis::standard(6), OrthonormalBasis(z.e1.matrix()),
                                 OrthonormalBasis(z.e2.matrix())});
    CHECK(r.is_mu);
  }
}
