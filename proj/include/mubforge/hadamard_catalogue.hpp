#pragma once

#include "mubforge/numeric_core.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mubforge {

enum class Family { fourier, fourier6_family, tao_s6, karlsson_k6_3, szollosi_x6_2, bjorck_c6, dita_slice };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct CatalogueEntry {
  Family family;
  int order;
  int param_arity;
  std::vector<std::string> param_names;
};

/// All families with their parameter names.
const std::vector<CatalogueEntry>& catalogue();

using FamilyParams = std::map<std::string, double>;

/// Generates a normalized Hadamard matrix of the family.
/// fourier: d. fourier6_family: a, b. karlsson_k6_3: theta, phi, lambda.
/// szollosi_x6_2: alpha_re, alpha_im. dita_slice: lambda. Others take none.
HadamardMatrix generate(Family family, const FamilyParams& params = {});

/// (1/sqrt6) times the unimodular display with cube roots of unity.
HadamardMatrix tao_s6();
HadamardMatrix fourier6_family(double a, double b);
HadamardMatrix bjorck_c6();

struct KarlssonData {
  HadamardMatrix matrix;
  Complex z[4];
  Eigen::Matrix2cd a, b;
};

KarlssonData karlsson_k6(double theta, double phi, double lambda);

/// Mobius map (alpha z - beta) / (conj(beta) z - conj(alpha)).
Complex mobius(Complex alpha, Complex beta, Complex z);

/// Karlsson slice theta = arccos(1/sqrt3), phi = pi/4.
HadamardMatrix dita_slice(double lambda);

/// Roots of z^3 - alpha z^2 + conj(alpha) z - 1 ordered by ascending arg.
std::vector<Complex> szollosi_roots(Complex alpha);
HadamardMatrix szollosi_x6(Complex alpha);
/// Rejection sample of alpha with unimodular roots for both f_alpha and f_{-alpha}.
Complex sample_szollosi_alpha(std::mt19937_64& rng);

/// Unitary 1/sqrt6 normalization of the circulant-block matrix T(x).
CMatrix zauner_t(double x);

struct ZaunerTriple {
  HadamardMatrix e1;
  HadamardMatrix e2;
  CMatrix t;
};

/// E1, E2 Hadamard with T(x) = E1^dag E2.
ZaunerTriple zauner_triple(double x);

/// First row and column made real positive.
HadamardMatrix dephase(const HadamardMatrix& h);
CMatrix dephase_matrix(const CMatrix& h);

/// Products H_pq H*_qr H_rs H*_sp of the unimodular rescaling, deduplicated and sorted by arg.
std::vector<Complex> haagerup_set(const HadamardMatrix& h, double eps_dedup = 1e-6);

/// True when both sets agree element-wise within eps.
bool same_haagerup_set(const std::vector<Complex>& a, const std::vector<Complex>& b, double eps = 1e-6);

struct DefectReport {
  int defect = 0;
  int system_rank = 0;
  int matrix_order = 0;
};

DefectReport defect(const HadamardMatrix& h);
int fourier_defect(int d);

struct StructureFlags {
  std::optional<int> butson_order;
  bool is_real = false;
  bool is_circulant = false;
  std::optional<bool> h2_reducible;        // d = 6 only
  std::optional<bool> has_subunitary_3x3;  // d = 6 only
};

StructureFlags structure_flags(const HadamardMatrix& h, const ToleranceProfile& tol = {});

/// Exhaustive scan of 3x3 submatrices proportional to a unitary. Unsupported for d != 6.
bool has_subunitary_3x3(const HadamardMatrix& h, const ToleranceProfile& tol = {});

/// P1 D1 H D2 P2 with random permutations and diagonal phases.
CMatrix random_equivalent(const CMatrix& h, std::mt19937_64& rng);

}  // namespace mubforge
