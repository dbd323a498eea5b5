#include "mubforge/analysis.hpp"
#include "mubforge/constructions.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace mubforge;

namespace {

std::vector<CMatrix> matrices(const MUBSet& s) {
  std::vector<CMatrix> out;
  for (const auto& b : s.bases) out.push_back(b.matrix());
  return out;
}

}  // namespace

TEST_CASE("method names round trip") {
  for (Method m : {Method::ivanovic, Method::wootters_fields, Method::klappenecker_rotteler, Method::alltop,
                   Method::heisenberg_weyl, Method::tensor_product, Method::latin_square, Method::weighted_design,
                   Method::approx, Method::product_family_d6})
    CHECK(method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(method_from_string("nope"), DomainError);
}

TEST_CASE("applicable methods follow the prime-power type") {
  CHECK(applicable_complete_methods(6).empty());
  const auto m2 = applicable_complete_methods(2);
  CHECK(std::count(m2.begin(), m2.end(), Method::ivanovic) == 1);
  CHECK(std::count(m2.begin(), m2.end(), Method::klappenecker_rotteler) == 1);
  CHECK(std::count(m2.begin(), m2.end(), Method::wootters_fields) == 0);
  const auto m25 = applicable_complete_methods(25);
  CHECK(std::count(m25.begin(), m25.end(), Method::alltop) == 1);
  CHECK(std::count(m25.begin(), m25.end(), Method::ivanovic) == 0);
}

TEST_CASE("complete sets are mutually unbiased per the naive oracle") {
  for (int d : {2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27}) {
    for (Method m : applicable_complete_methods(d)) {
      CAPTURE(d);
      CAPTURE(to_string(m));
      const MUBSet s = construct_complete(m, d);
      REQUIRE(s.size() == d + 1);
      CHECK((s.bases.front().matrix() - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() == 0.0);
      const auto ms = matrices(s);
      CHECK(oracle::mu_deviation(ms) < 1e-10);
      for (const auto& b : ms) CHECK(oracle::orth_deviation(b) < 1e-10);
    }
  }
}

TEST_CASE("constructions reject wrong dimensions") {
  CHECK_THROWS_AS(construct_complete(Method::ivanovic, 4), ConstructionError);
  CHECK_THROWS_AS(construct_complete(Method::wootters_fields, 8), ConstructionError);
  CHECK_THROWS_AS(construct_complete(Method::alltop, 9), ConstructionError);
  CHECK_THROWS_AS(construct_complete(Method::klappenecker_rotteler, 9), ConstructionError);
  CHECK_THROWS_AS(construct_complete(Method::heisenberg_weyl, 6), ConstructionError);
  CHECK_THROWS_AS(construct_complete(Method::latin_square, 9), ConstructionError);
}

TEST_CASE("Ivanovic sets contain the Fourier basis") {
  for (int d : {3, 5, 7}) {
    const MUBSet s = construct_complete(Method::ivanovic, d);
    const CMatrix f = oracle::fourier(d);
    int matches = 0;
    for (const auto& b : s.bases) {
      const CMatrix g = b.matrix().adjoint() * f;
      bool same = true;
      for (int i = 0; i < d; ++i) same = same && std::abs(g.row(i).cwiseAbs().maxCoeff() - 1.0) < 1e-10;
      matches += same;
    }
    CHECK(matches == 1);
  }
}

TEST_CASE("Heisenberg-Weyl classes commute and their eigenbases are MU") {
  for (int p : {2, 3, 5, 7}) {
    const HWClasses hw = heisenberg_weyl_classes(p);
    REQUIRE(static_cast<int>(hw.classes.size()) == p + 1);
    CHECK(hw.classes.front().generator_label == "Z");
    for (const auto& c : hw.classes) {
      REQUIRE(static_cast<int>(c.members.size()) == p);
      CHECK((c.members[0] - CMatrix::Identity(p, p)).cwiseAbs().maxCoeff() < 1e-12);
      for (const auto& a : c.members)
        for (const auto& b : c.members) CHECK((a * b - b * a).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK(oracle::mu_deviation(matrices(hw.eigenbases)) < 1e-10);
    // Each eigenbasis diagonalizes its class.
    for (std::size_t k = 0; k < hw.classes.size(); ++k) {
      const CMatrix& v = hw.eigenbases.bases[k].matrix();
      const CMatrix dmat = v.adjoint() * hw.classes[k].members[1] * v;
      CMatrix off = dmat;
      off.diagonal().setZero();
      CHECK(off.cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  CHECK_THROWS_AS(heisenberg_weyl_classes(4), UnsupportedError);
  const CMatrix x = shift_operator(5), z = clock_operator(5);
  CHECK((z * x - root_of_unity(1, 5) * x * z).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tensor products of complete sets") {
  const MUBSet a = construct_complete(Method::ivanovic, 2);
  const MUBSet b = construct_complete(Method::ivanovic, 3);
  const MUBSet t = tensor_product_mubs({a, b});
  CHECK(t.dim == 6);
  CHECK(t.size() == 3);
  CHECK(oracle::mu_deviation(matrices(t)) < 1e-10);
  for (const auto& v : all_vectors(t.bases)) CHECK(product_vector_test(v, 2, 3));
  CHECK_THROWS_AS(tensor_product_mubs({}), DomainError);
}

TEST_CASE("Latin square MU bases in square dimensions") {
  for (int s : {2, 3, 4, 5}) {
    const MolsSet mols = mols_generate(s);
    const MUBSet set = latin_square_mubs(s, mols.latin, HadamardMatrix(fourier_matrix(s)));
    CHECK(set.dim == s * s);
    CHECK(set.size() == s + 1);
    CHECK(oracle::mu_deviation(matrices(set)) < 1e-10);
  }
  const MolsSet m3 = mols_generate(3);
  CHECK_THROWS_AS(latin_square_mubs(3, {m3.latin[0], m3.latin[0]}, HadamardMatrix(fourier_matrix(3))), DomainError);
  CHECK_THROWS_AS(latin_square_mubs(3, m3.latin, HadamardMatrix(fourier_matrix(2))), ShapeError);
}

TEST_CASE("weighted design bases") {
  for (int d : {2, 3, 4, 6, 7, 8}) {
    CAPTURE(d);
    const MUBSet s = weighted_design(d);
    REQUIRE(s.size() == d + 2);
    REQUIRE(s.weights.has_value());
    double total = 0.0;
    for (std::size_t b = 0; b < s.bases.size(); ++b) total += (*s.weights)[b] * d;
    CHECK(total == doctest::Approx(1.0));
    for (const auto& b : matrices(s)) CHECK(oracle::orth_deviation(b) < 1e-10);
    CHECK(welch_and_design_check(s).two_design_deviation < 1e-10);
  }
  // In d = 6 the d + 1 Fourier-type bases are not mutually unbiased.
  std::vector<CMatrix> six = matrices(weighted_design(6));
  six.erase(six.begin());
  CHECK(oracle::mu_deviation(six) > 1e-3);
  CHECK_THROWS_AS(weighted_design(5), UnsupportedError);
}

TEST_CASE("approximate MU bases report their overlap bound") {
  CHECK(smallest_prime_one_mod(6) == 7);
  CHECK(smallest_prime_one_mod(10) == 11);
  CHECK(smallest_prime_one_mod(4) == 5);
  const ApproxMubReport r = approx_mub(10);
  CHECK(r.p == 11);
  CHECK(r.set.size() == 11);
  CHECK(r.bound == doctest::Approx(std::sqrt(11.0) / 10.0));
  double worst = 0.0;
  const auto ms = matrices(r.set);
  for (std::size_t a = 0; a < ms.size(); ++a)
    for (std::size_t b = a + 1; b < ms.size(); ++b)
      worst = std::max(worst, (ms[a].adjoint() * ms[b]).cwiseAbs2().maxCoeff());
  CHECK(r.max_overlap_sq == doctest::Approx(worst));
  CHECK(r.within_bound == (r.max_overlap_sq <= r.bound + 1e-12));
  CHECK_THROWS_AS(approx_mub(6, 8), DomainError);
}

TEST_CASE("d = 6 product families") {
  for (auto f : {ProductFamily::P0, ProductFamily::P1, ProductFamily::P2, ProductFamily::P3, ProductFamily::T0,
                 ProductFamily::T1}) {
    CAPTURE(to_string(f));
    CHECK(product_family_from_string(to_string(f)) == f);
    const MUBSet s = product_family_d6(f);
    CHECK(s.size() == ((f == ProductFamily::T0 || f == ProductFamily::T1) ? 3 : 2));
    CHECK(oracle::mu_deviation(matrices(s)) < 1e-10);
    for (const auto& v : all_vectors(s.bases)) CHECK(oracle::purity(v, 2, 3) == doctest::Approx(1.0));
  }
  const MUBSet p3 = product_family_d6(ProductFamily::P3, {{"zeta", 1.0}, {"chi", 4.0}, {"sigma", 0.3}, {"tau", 2.9}});
  CHECK(oracle::mu_deviation(matrices(p3)) < 1e-10);
  CHECK_THROWS_AS(product_family_d6(ProductFamily::P3, {{"sigma", 0.0}}), DomainError);
  CHECK_THROWS_AS(product_family_d6(ProductFamily::P1, {{"xi", 7.0}}), DomainError);
  CHECK_THROWS_AS(product_family_d6(ProductFamily::P1, {{"bogus", 1.0}}), DomainError);
}

TEST_CASE("the missing basis of a complete set is recovered") {
  for (int d : {2, 3, 4, 5}) {
    CAPTURE(d);
    const MUBSet s = construct_complete(applicable_complete_methods(d).front(), d);
    std::vector<OrthonormalBasis> partial(s.bases.begin(), s.bases.end() - 1);
    const OrthonormalBasis missing = complete_missing_basis(partial);
    // Same basis up to ordering and phases.
    const CMatrix g = missing.matrix().adjoint() * s.bases.back().matrix();
    for (int i = 0; i < d; ++i) CHECK(g.row(i).cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-8));
  }
}
