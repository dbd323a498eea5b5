#pragma once

#include "mubforge/finite_algebra.hpp"
#include "mubforge/numeric_core.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mubforge {

enum class Method {
  ivanovic,
  wootters_fields,
  klappenecker_rotteler,
  alltop,
  heisenberg_weyl,
  tensor_product,
  latin_square,
  weighted_design,
  approx,
  product_family_d6,
};

std::string to_string(Method m);
/// Throws DomainError for unknown names.
Method method_from_string(const std::string& s);

using Params = std::map<std::string, double>;

struct MUBSet {
  int dim = 0;
  std::vector<OrthonormalBasis> bases;
  Method method = Method::ivanovic;
  Params params;
  std::optional<std::vector<double>> weights;

  [[nodiscard]] int size() const { return static_cast<int>(bases.size()); }
};

/// Largest |(|<u|v>|^2 - target)| over all cross-basis pairs with target 1/d.
double max_mu_deviation(const std::vector<OrthonormalBasis>& bases);

/// Complete set of d + 1 MU bases, standard basis first.
MUBSet construct_complete(Method method, int d);

/// Methods of construct_complete whose preconditions hold for d.
std::vector<Method> applicable_complete_methods(int d);

struct HWOperatorClass {
  int dim = 0;
  std::string generator_label;   // "Z" or "XZ^b"
  std::vector<CMatrix> members;  // U^0 .. U^{d-1}
};

struct HWClasses {
  std::vector<HWOperatorClass> classes;  // Z first, then XZ^b for b = 0 .. p-1
  MUBSet eigenbases;
};

/// Shift X|k> = |k+1>, clock Z|k> = w^k |k>.
CMatrix shift_operator(int d);
CMatrix clock_operator(int d);

HWClasses heisenberg_weyl_classes(int p);

/// Basis b of the result is the tensor product of basis b of every factor.
MUBSet tensor_product_mubs(const std::vector<MUBSet>& factors);

/// MU bases in d = s^2 from the augmented squares A, B and the given MOLS.
/// Ordering: A, B, then mols in input order.
MUBSet latin_square_mubs(int s, const std::vector<LatinSquare>& mols, const HadamardMatrix& h);

/// d + 2 bases forming a weighted 2-design for d = p^n - 1.
MUBSet weighted_design(int d);

struct ApproxMubReport {
  MUBSet set;
  int p = 0;
  double max_overlap_sq = 0.0;  // over all cross-basis pairs
  double bound = 0.0;           // sqrt(p) / d
  bool within_bound = false;
};

/// Smallest prime congruent to 1 mod d.
int smallest_prime_one_mod(int d);

/// p = 0 selects smallest_prime_one_mod(d).
ApproxMubReport approx_mub(int d, int p = 0);

enum class ProductFamily { P0, P1, P2, P3, T0, T1 };

ProductFamily product_family_from_string(const std::string& s);
std::string to_string(ProductFamily f);

/// Pairs or triples of MU product bases in C^2 (x) C^3, index a*3 + b.
/// Parameters xi, eta, zeta, chi in [0, 2pi) and sigma, tau in (0, pi) default to pi/5.
MUBSet product_family_d6(ProductFamily which, const Params& params = {});

/// Qubit bases z, x, y and qutrit bases z, x, y, w as columns.
CMatrix qubit_basis(char label);
CMatrix qutrit_basis(char label);

/// Recovers the basis MU to all of `bases` (d bases of a complete set) from the
/// orthogonal complement of their traceless projector planes.
OrthonormalBasis complete_missing_basis(const std::vector<OrthonormalBasis>& bases);

}  // namespace mubforge
