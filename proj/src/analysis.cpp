#include "mubforge/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace mubforge {

MUReport check_mu_set(const std::vector<OrthonormalBasis>& bases, const ToleranceProfile& tol) {
  if (bases.size() < 2) throw DomainError("check_mu_set: need at least two bases");
  const int d = bases.front().dim();
  for (const auto& b : bases)
    if (b.dim() != d) throw ShapeError("check_mu_set: dimension mismatch");
  MUReport r;
  r.dim = d;
  r.num_bases = static_cast<int>(bases.size());
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  double dist_sum = 0.0;
  int pairs = 0;
  for (std::size_t a = 0; a < bases.size(); ++a) {
    for (std::size_t b = 0; b < bases.size(); ++b) {
      const CMatrix g = bases[a].matrix().adjoint() * bases[b].matrix();
      const Eigen::ArrayXXd m = g.cwiseAbs().array();
      if (a == b) {
        const CMatrix dev = g - CMatrix::Identity(d, d);
        r.max_orth_deviation = std::max(r.max_orth_deviation, dev.cwiseAbs().maxCoeff());
        const Eigen::ArrayXXd chi = Eigen::MatrixXd::Identity(d, d).array();
        r.f_value += (m - chi).square().sum();
      } else {
        r.max_mu_deviation = std::max(r.max_mu_deviation, (m.square() - 1.0 / d).abs().maxCoeff());
        r.f_value += (m - inv).square().sum();
        if (a < b) {
          dist_sum += 1.0 - (m.square() - 1.0 / d).square().sum() / (d - 1.0);
          ++pairs;
        }
      }
    }
  }
  r.avg_distance = dist_sum / pairs;
  r.is_mu = r.max_mu_deviation < tol.eps_mu && r.max_orth_deviation < tol.eps_unitary;
  return r;
}

std::vector<CVector> all_vectors(const std::vector<OrthonormalBasis>& bases) {
  std::vector<CVector> out;
  for (const auto& b : bases)
    for (int v = 0; v < b.dim(); ++v) out.push_back(b.column(v));
  return out;
}

CMatrix symmetric_projector(int d) {
  const int n = d * d;
  CMatrix p = CMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      p(i * d + j, i * d + j) += 0.5;
      p(j * d + i, i * d + j) += 0.5;
    }
  return p;
}

namespace {

DesignCheckReport design_core(const std::vector<CVector>& vecs, const std::vector<double>& weights, bool weighted) {
  if (vecs.empty()) throw DomainError("welch_and_design_check: no vectors");
  const int d = static_cast<int>(vecs.front().size());
  DesignCheckReport r;
  r.weighted = weighted;
  const std::size_t n = vecs.size();
  CMatrix v(d, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (vecs[i].size() != d) throw ShapeError("welch_and_design_check: dimension mismatch");
    v.col(static_cast<Eigen::Index>(i)) = vecs[i];
  }
  const Eigen::ArrayXXd g2 = (v.adjoint() * v).cwiseAbs2().array();
  r.welch_k1 = g2.sum();
  r.welch_k2 = g2.square().sum();

  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (std::size_t i = 0; i < n; ++i) {
    const CVector vv = kron(vecs[i], vecs[i]);
    s.noalias() += weights[i] * (vv * vv.adjoint());
  }
  const double scale = weighted ? 2.0 / (d * (d + 1.0)) : 2.0;
  r.two_design_deviation = hermitian_norm(s - scale * symmetric_projector(d));
  return r;
}

}  // namespace

DesignCheckReport welch_and_design_check(const std::vector<CVector>& vectors) {
  return design_core(vectors, std::vector<double>(vectors.size(), 1.0), false);
}

DesignCheckReport welch_and_design_check(const MUBSet& set) {
  const auto vecs = all_vectors(set.bases);
  if (!set.weights) return welch_and_design_check(vecs);
  if (set.weights->size() != set.bases.size()) throw ShapeError("welch_and_design_check: weight count mismatch");
  std::vector<double> w;
  for (std::size_t b = 0; b < set.bases.size(); ++b)
    for (int v = 0; v < set.dim; ++v) w.push_back((*set.weights)[b]);
  return design_core(vecs, w, true);
}

EntanglementContent entanglement_content(const MUBSet& set, int d1, int d2) {
  if (d1 * d2 != set.dim) throw ShapeError("entanglement_content: d1*d2 differs from the set dimension");
  EntanglementContent e;
  for (const auto& b : set.bases)
    for (int v = 0; v < b.dim(); ++v) e.content += purity(b.column(v), d1, d2);
  const int mu = set.size();
  const int d = set.dim;
  e.complete = mu == d + 1 && check_mu_set(set.bases).is_mu;
  if (e.complete) {
    e.target = static_cast<double>(d1) * d2 * (d1 + d2);
    e.holds = std::abs(e.content - e.target) < 1e-9;
  } else {
    const int lo = std::min(d1, d2), hi = std::max(d1, d2);
    e.target = static_cast<double>(lo * lo + mu - 1) * hi;
    e.holds = e.content <= e.target + 1e-9;
  }
  return e;
}

CMatrix witness_operator(const std::vector<OrthonormalBasis>& bases) {
  if (bases.empty()) throw DomainError("witness_operator: no bases");
  const int d = bases.front().dim();
  CMatrix w = CMatrix::Zero(d * d, d * d);
  for (const auto& b : bases)
    for (int v = 0; v < d; ++v) {
      const CVector c = b.column(v);
      const CVector vv = kron(c, CVector(c.conjugate()));
      w.noalias() += vv * vv.adjoint();
    }
  return w;
}

WitnessValue witness_value(const std::vector<OrthonormalBasis>& bases, const CMatrix& rho) {
  const int d = bases.front().dim();
  if (rho.rows() != d * d || rho.cols() != d * d) throw ShapeError("witness_value: rho must be d^2 x d^2");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw DomainError("witness_value: rho is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw DomainError("witness_value: rho is not positive semidefinite");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10) throw DomainError("witness_value: rho must have unit trace");
  WitnessValue w;
  w.value = (witness_operator(bases) * rho).trace().real();
  w.bound = (d + static_cast<double>(bases.size()) - 1.0) / d;
  w.violated = w.value > w.bound + 1e-10;
  return w;
}

double qrac_probability(const std::vector<OrthonormalBasis>& bases) {
  if (bases.size() < 2) throw DomainError("qrac_probability: need at least two bases");
  const int d = bases.front().dim();
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t a = 0; a < bases.size(); ++a)
    for (std::size_t b = a + 1; b < bases.size(); ++b) {
      const CMatrix g = bases[a].matrix().adjoint() * bases[b].matrix();
      sum += 0.5 + g.cwiseAbs().sum() / (2.0 * d * d);
      ++pairs;
    }
  return sum / pairs;
}

FourierFunctions fourier_functions(const std::vector<CMatrix>& unimodular, const std::vector<int>& gamma) {
  FourierFunctions out;
  Complex f = 0.0;
  for (const auto& h : unimodular) {
    const int d = static_cast<int>(h.rows());
    if (static_cast<int>(gamma.size()) != d) throw ShapeError("fourier_functions: gamma length differs from d");
    Complex g = 0.0;
    for (int k = 0; k < d; ++k) {
      double phase = 0.0;
      for (int i = 0; i < d; ++i) phase += gamma[static_cast<std::size_t>(i)] * std::arg(h(i, k));
      g += std::polar(1.0, phase);
    }
    out.e_j.push_back(std::norm(g));
    out.e += std::norm(g);
    f += g;
  }
  out.f = std::norm(f);
  return out;
}

FourierConstraintReport fourier_linear_constraints(const MUBSet& set, const std::vector<std::vector<int>>& gammas) {
  const int d = set.dim;
  if (set.size() != d + 1) throw DomainError("fourier_linear_constraints: input must be a complete set");
  const auto mu = check_mu_set(set.bases);
  if (!mu.is_mu) throw DomainError("fourier_linear_constraints: input bases are not mutually unbiased");
  const double sq = std::sqrt(static_cast<double>(d));
  // The standard basis must come first; every other basis is then Hadamard.
  const CMatrix& b0 = set.bases.front().matrix();
  if ((b0.cwiseAbs() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("fourier_linear_constraints: the first basis must be the standard basis");
  }
  std::vector<CMatrix> h;
  for (int j = 1; j <= d; ++j) h.push_back(set.bases[static_cast<std::size_t>(j)].matrix() * sq);

  FourierConstraintReport r;
  const std::vector<int> zero(static_cast<std::size_t>(d), 0);
  const auto f0 = fourier_functions(h, zero);
  r.e0 = f0.e;
  r.f0 = f0.f;
  const double d2 = d * d, d3 = d2 * d, d4 = d3 * d;
  for (const auto& g : gammas) {
    if (static_cast<int>(g.size()) != d) throw ShapeError("fourier_linear_constraints: gamma length differs from d");
    std::vector<double> ej_sum(static_cast<std::size_t>(d), 0.0);
    double e_sum = 0.0;
    for (int rr = 0; rr < d; ++rr) {
      auto gp = g;
      ++gp[static_cast<std::size_t>(rr)];
      const auto ff = fourier_functions(h, gp);
      for (int j = 0; j < d; ++j) ej_sum[static_cast<std::size_t>(j)] += ff.e_j[static_cast<std::size_t>(j)];
      e_sum += ff.e;
    }
    for (double s : ej_sum) r.max_orth_residual = std::max(r.max_orth_residual, std::abs(s - d2));
    r.max_orth_sum_residual = std::max(r.max_orth_sum_residual, std::abs(e_sum - d3));

    const auto base = fourier_functions(h, g);
    double lhs = d * base.e;
    for (int rr = 0; rr < d; ++rr)
      for (int t = 0; t < d; ++t) {
        if (rr == t) continue;
        auto gp = g;
        ++gp[static_cast<std::size_t>(rr)];
        --gp[static_cast<std::size_t>(t)];
        lhs += fourier_functions(h, gp).f;
      }
    r.max_overlap_residual = std::max(r.max_overlap_residual, std::abs(lhs - d4));
    r.max_f_minus_de = std::max(r.max_f_minus_de, base.f - d * base.e);
  }
  const double tol = 1e-8 * d4;
  r.holds = r.max_orth_residual < tol && r.max_orth_sum_residual < tol && r.max_overlap_residual < tol &&
            std::abs(r.e0 - d3) < 1e-10 * d3 && std::abs(r.f0 - d4) < 1e-10 * d4;
  return r;
}

double delsarte_h0(const CMatrix& u) { return -1.0 + u.cwiseAbs2().array().square().sum(); }

}  // namespace mubforge
