#pragma once

#include "mubforge/constructions.hpp"
#include "mubforge/numeric_core.hpp"

#include <vector>

namespace mubforge {

struct MUReport {
  int dim = 0;
  int num_bases = 0;
  double max_mu_deviation = 0.0;    // max ||<u|v>|^2 - 1/d| across bases
  double max_orth_deviation = 0.0;  // max |<u|v> - delta| within bases
  double f_value = 0.0;             // sum over ordered pairs of (|<u|v>| - chi)^2
  double avg_distance = 0.0;        // mean of D_bb' over unordered basis pairs
  bool is_mu = false;
};

MUReport check_mu_set(const std::vector<OrthonormalBasis>& bases, const ToleranceProfile& tol = {});

struct DesignCheckReport {
  double welch_k1 = 0.0;  // sum_{x,y} |<x|y>|^2 with self-pairs
  double welch_k2 = 0.0;  // sum_{x,y} |<x|y>|^4 with self-pairs
  double two_design_deviation = 0.0;
  bool weighted = false;
};

/// Unweighted check of a vector collection against 2 Pi_sym.
DesignCheckReport welch_and_design_check(const std::vector<CVector>& vectors);
/// Uses the set's weights against binom(d+1,2)^{-1} Pi_sym when present.
DesignCheckReport welch_and_design_check(const MUBSet& set);

std::vector<CVector> all_vectors(const std::vector<OrthonormalBasis>& bases);

/// Projector onto the symmetric subspace of C^d (x) C^d.
CMatrix symmetric_projector(int d);

struct EntanglementContent {
  double content = 0.0;  // sum of purities
  double target = 0.0;   // d1 d2 (d1 + d2) when complete, else the upper bound
  bool complete = false;
  bool holds = false;    // equality (complete) or bound (otherwise) within 1e-9
};

EntanglementContent entanglement_content(const MUBSet& set, int d1, int d2);

struct WitnessValue {
  double value = 0.0;
  double bound = 0.0;
  bool violated = false;
};

/// B(mu) = sum_b sum_v P_b(v) (x) P_b(v)^*, bound (d + mu - 1)/d.
WitnessValue witness_value(const std::vector<OrthonormalBasis>& bases, const CMatrix& rho);
CMatrix witness_operator(const std::vector<OrthonormalBasis>& bases);

double qrac_probability(const std::vector<OrthonormalBasis>& bases);

struct FourierConstraintReport {
  double e0 = 0.0;
  double f0 = 0.0;
  double max_orth_residual = 0.0;     // sum_r E_j(g + pi_r) - d^2
  double max_orth_sum_residual = 0.0; // sum_r E(g + pi_r) - d^3
  double max_overlap_residual = 0.0;  // d E(g) + sum_{r != t} F(g + pi_r - pi_t) - d^4
  double max_f_minus_de = 0.0;        // max F(g) - d E(g), observed only
  bool holds = false;                 // listed equalities within 1e-8 d^4
};

/// Input: complete set with the standard basis first, followed by d Hadamard bases.
FourierConstraintReport fourier_linear_constraints(const MUBSet& set, const std::vector<std::vector<int>>& gammas);

struct FourierFunctions {
  std::vector<double> e_j;
  double e = 0.0;
  double f = 0.0;
};

/// E_j, E and F at gamma for the unimodular columns of the given Hadamard matrices.
FourierFunctions fourier_functions(const std::vector<CMatrix>& unimodular, const std::vector<int>& gamma);

double delsarte_h0(const CMatrix& u);

}  // namespace mubforge
