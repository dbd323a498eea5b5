#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mubforge {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Error taxonomy shared by every module.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ToleranceProfile {
  double eps_unitary = 1e-10;
  double eps_mod = 1e-10;
  double eps_mu = 1e-10;
  double eps_orth = 1e-8;
  double eps_dedup = 1e-6;

  /// Throws DomainError unless every field lies in (0, 1e-2).
  void validate() const;
};

/// e^{2 pi i k / r}
Complex root_of_unity(long long k, long long r);

/// Unit-norm state. Construction normalizes nothing; it checks.
class UnitVector {
 public:
  explicit UnitVector(CVector amps, double eps_norm = 1e-10);

  [[nodiscard]] int dim() const { return static_cast<int>(amps_.size()); }
  [[nodiscard]] const CVector& amps() const { return amps_; }

  /// First nonzero component made real positive.
  [[nodiscard]] UnitVector canonical() const;

 private:
  CVector amps_;
};

/// Columns are the basis states.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(CMatrix columns, double eps_unitary = 1e-10);

  [[nodiscard]] int dim() const { return static_cast<int>(cols_.rows()); }
  [[nodiscard]] const CMatrix& matrix() const { return cols_; }
  [[nodiscard]] CVector column(int i) const { return cols_.col(i); }

  static OrthonormalBasis standard(int d);

 private:
  CMatrix cols_;
};

/// Exact tag for an entry exp(2 pi i k / r) / sqrt(d).
struct PhaseTag {
  int root_order = 1;
  int exponent = 0;
  bool operator==(const PhaseTag&) const = default;
};

class HadamardMatrix {
 public:
  explicit HadamardMatrix(CMatrix entries, const ToleranceProfile& tol = {});
  /// Butson-type constructor: entry (j,k) = exp(2 pi i exps(j,k)/r)/sqrt(d).
  static HadamardMatrix from_roots(int r, const std::vector<std::vector<int>>& exps);

  [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
  [[nodiscard]] const CMatrix& matrix() const { return m_; }
  [[nodiscard]] const std::optional<std::vector<PhaseTag>>& phase_tags() const {
    return tags_;
  }
  /// Row-major tag of entry (j,k).
  [[nodiscard]] std::optional<PhaseTag> tag(int j, int k) const;

 private:
  CMatrix m_;
  std::optional<std::vector<PhaseTag>> tags_;
};

struct HadamardReport {
  bool is_hadamard = false;
  double unitarity_deviation = 0.0;  // max |(M^dag M - I)_jk|
  double modulus_deviation = 0.0;    // max ||M_jk| - 1/sqrt(d)|
};

HadamardReport is_hadamard(const CMatrix& m, const ToleranceProfile& tol = {});

/// max |(M^dag M - I)_jk|
double unitarity_deviation(const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

/// Unitary Fourier matrix, F_jk = w^{jk}/sqrt(d).
CMatrix fourier_matrix(int d);

/// Reduction of |v><v| onto the first factor of C^{d1} (x) C^{d2}.
CMatrix reduced_first(const CVector& v, int d1, int d2);

double purity(const CVector& v, int d1, int d2);

/// M_{(i1 i2),(j1 j2)} -> R_{(i1 j1),(i2 j2)}
CMatrix realign(const CMatrix& m, int d1, int d2);

int operator_schmidt_rank(const CMatrix& m, int d1, int d2, const ToleranceProfile& tol = {});

bool product_vector_test(const CVector& v, int d1, int d2, const ToleranceProfile& tol = {});

/// Reorders Z_{d1 d2} indices j -> (j mod d1, j mod d2) as a product index a*d2 + b.
/// Requires gcd(d1, d2) = 1.
std::vector<int> crt_permutation(int d1, int d2);

/// Multiplies v by a phase so its first component with modulus > eps is real positive.
CVector canonical_phase(const CVector& v, double eps = 1e-12);

/// 1 - |<u|v>| for unit vectors.
double projective_distance(const CVector& u, const CVector& v);

/// Haar-random unitary via QR of a Ginibre matrix.
CMatrix haar_unitary(int d, std::mt19937_64& rng);

/// Haar-random unit vector.
CVector random_state(int d, std::mt19937_64& rng);

/// Largest |eigenvalue| of a Hermitian matrix (its operator norm).
double hermitian_norm(const CMatrix& h);

}  // namespace mubforge
