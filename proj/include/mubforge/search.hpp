#pragma once

#include "mubforge/numeric_core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mubforge {

enum class Optimizer { newton_residual, quasi_newton_f };

std::string to_string(Optimizer o);
Optimizer optimizer_from_string(const std::string& s);

struct SearchConfig {
  std::uint64_t seed = 1;
  int restarts = 1000;
  int newton_max_iter = 200;
  double newton_tol = 1e-12;
  double dedup_tol = 1e-6;
  Optimizer optimizer = Optimizer::quasi_newton_f;
  /// 0 selects MUBFORGE_THREADS or the hardware concurrency.
  int threads = 0;

  void validate() const;
};

/// Worker count honouring MUBFORGE_THREADS.
int worker_count(int requested);

/// Independent 64-bit stream seed for restart `index`.
std::uint64_t restart_seed(std::uint64_t seed, std::uint64_t index);

struct VectorSolutionSet {
  std::string label;
  int dim = 0;
  std::vector<CVector> vectors;   // canonical phase, sorted lexicographically
  std::vector<double> residuals;  // max MU deviation per vector
  int restarts = 0;
  int converged = 0;              // restarts that ended below tolerance
  bool coverage_warning = false;  // a new solution first appeared in the last 20% of restarts
  bool continuum_detected = false;
  int singular = 0;               // solutions where the residual Jacobian is rank deficient
};

/// Vectors MU to the standard basis and to the columns of H.
VectorSolutionSet mu_vectors_to_pair(const HadamardMatrix& h, const SearchConfig& cfg, const std::string& label = "");

/// Vectors with unimodular entries MU to every given basis (the standard basis is implied).
VectorSolutionSet mu_vectors_to_bases(const std::vector<CMatrix>& bases, const SearchConfig& cfg,
                                      const std::string& label = "");

/// Every d-clique of the orthogonality graph |<u|v>| < eps_orth, as a basis.
std::vector<OrthonormalBasis> group_into_bases(const std::vector<CVector>& vectors, double eps_orth = 1e-8);

struct ExtensionReport {
  int extra_vectors = 0;
  int bases_found = 0;
  bool extends_to_basis = false;
  std::vector<OrthonormalBasis> extensions;
};

/// Searches vectors MU to all `bases` after rotating the first one to the identity.
ExtensionReport extension_probe(const std::vector<OrthonormalBasis>& bases, const SearchConfig& cfg);

struct ConstellationSpec {
  int dim = 0;
  std::vector<int> parts;

  void validate() const;
  /// (d-1)((mu-1)(d-1)-1) for mu full bases.
  static int full_basis_param_count(int d, int mu);
  /// Free real parameters of the parameterization used by the search.
  [[nodiscard]] int param_count() const;
  [[nodiscard]] std::string label() const;
};

struct ConstellationResult {
  bool found = false;
  double best_residual = 0.0;  // smallest final F
  int successes = 0;
  int attempts = 0;
};

/// Success iff the final constellation-restricted F < 1e-16.
ConstellationResult constellation_search(const ConstellationSpec& spec, const SearchConfig& cfg);

/// F restricted to the constellation for explicit vectors grouped by part.
double constellation_f(const std::vector<std::vector<CVector>>& parts);

}  // namespace mubforge
