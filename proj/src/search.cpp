#include "mubforge/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

namespace mubforge {

std::string to_string(Optimizer o) {
  return o == Optimizer::newton_residual ? "newton_residual" : "quasi_newton_f";
}

Optimizer optimizer_from_string(const std::string& s) {
  if (s == "newton_residual") return Optimizer::newton_residual;
  if (s == "quasi_newton_f") return Optimizer::quasi_newton_f;
  throw DomainError("unknown optimizer '" + s + "'");
}

void SearchConfig::validate() const {
  if (restarts < 1) throw DomainError("SearchConfig: restarts must be at least 1");
  if (newton_max_iter < 1) throw DomainError("SearchConfig: newton_max_iter must be positive");
  if (!(newton_tol > 0.0) || !(dedup_tol > 0.0)) throw DomainError("SearchConfig: tolerances must be positive");
  if (threads < 0) throw DomainError("SearchConfig: threads must be non-negative");
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("MUBFORGE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Runs body(worker, index) for index in [0, n), indices interleaved across workers.
void parallel_restarts(int n, int workers, const std::function<void(int, int)>& body) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(0, i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) body(w, i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (std::abs(a(k).real() - b(k).real()) > 1e-9) return a(k).real() < b(k).real();
    if (std::abs(a(k).imag() - b(k).imag()) > 1e-9) return a(k).imag() < b(k).imag();
  }
  return false;
}

struct Cluster {
  CVector v;
  double residual;
  int first;
};

/// Damped Gauss-Newton with Armijo backtracking for |<h_j|psi>|^2 = 1/d on the phase torus.
class PhaseSolver {
 public:
  PhaseSolver(const CMatrix& h_adj, int max_iter, double tol)
      : ha_(h_adj), d_(static_cast<int>(h_adj.cols())), m_(static_cast<int>(h_adj.rows())),
        max_iter_(max_iter), tol_(tol), psi_(d_), a_(m_), r_(m_), rt_(m_), jac_(m_, d_ - 1),
        jtj_(d_ - 1, d_ - 1), step_(d_ - 1), theta_(d_ - 1), trial_(d_ - 1) {}

  /// Returns the final max |residual|; the solution is left in psi().
  double solve(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int k = 0; k < d_ - 1; ++k) theta_(k) = u(rng);
    double phi = eval(theta_, r_);
    double lambda = 1e-6;
    for (int it = 0; it < max_iter_; ++it) {
      if (r_.cwiseAbs().maxCoeff() < tol_) break;
      jacobian();
      jtj_.noalias() = jac_.transpose() * jac_;
      const Eigen::VectorXd grad = jac_.transpose() * r_;
      jtj_.diagonal().array() += lambda * (1.0 + jtj_.diagonal().array());
      step_ = -jtj_.ldlt().solve(grad);
      double t = 1.0;
      bool accepted = false;
      const double slope = grad.dot(step_);
      for (int ls = 0; ls < 30; ++ls) {
        trial_ = theta_ + t * step_;
        const double phi_t = eval(trial_, rt_);
        if (phi_t <= phi + 1e-4 * t * slope) {
          theta_ = trial_;
          r_ = rt_;
          phi = phi_t;
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        lambda *= 10.0;
        if (lambda > 1e8) break;
      } else if (t == 1.0) {
        lambda = std::max(lambda * 0.1, 1e-12);
      }
    }
    eval(theta_, r_);
    return r_.cwiseAbs().maxCoeff();
  }

  [[nodiscard]] const CVector& psi() const { return psi_; }

 private:
  double eval(const Eigen::VectorXd& th, Eigen::VectorXd& r) {
    const double s = 1.0 / std::sqrt(static_cast<double>(d_));
    psi_(0) = s;
    for (int k = 1; k < d_; ++k) psi_(k) = std::polar(s, th(k - 1));
    a_.noalias() = ha_ * psi_;
    r = a_.cwiseAbs2().array() - 1.0 / d_;
    return 0.5 * r.squaredNorm();
  }

  void jacobian() {
    for (int j = 0; j < m_; ++j) {
      const Complex ca = std::conj(a_(j));
      for (int k = 1; k < d_; ++k) jac_(j, k - 1) = -2.0 * (ca * ha_(j, k) * psi_(k)).imag();
    }
  }

  const CMatrix& ha_;
  int d_, m_, max_iter_;
  double tol_;
  CVector psi_, a_;
  Eigen::VectorXd r_, rt_;
  Eigen::MatrixXd jac_, jtj_;
  Eigen::VectorXd step_, theta_, trial_;
};

bool jacobian_rank_deficient(const CMatrix& h_adj, const CVector& psi) {
  const CVector a = h_adj * psi;
  const int d = static_cast<int>(psi.size());
  Eigen::MatrixXd jac(h_adj.rows(), d - 1);
  for (Eigen::Index j = 0; j < h_adj.rows(); ++j)
    for (int k = 1; k < d; ++k) jac(j, k - 1) = -2.0 * (std::conj(a(j)) * h_adj(j, k) * psi(k)).imag();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) < 1e-4 * sv(0);
}

}  // namespace

std::uint64_t restart_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

VectorSolutionSet mu_vectors_to_bases(const std::vector<CMatrix>& bases, const SearchConfig& cfg,
                                      const std::string& label) {
  cfg.validate();
  if (bases.empty()) throw DomainError("mu_vectors_to_bases: no bases given");
  const int d = static_cast<int>(bases.front().rows());
  for (const auto& b : bases) {
    if (b.rows() != d || b.cols() != d) throw ShapeError("mu_vectors_to_bases: bases must be d x d");
    if (!is_hadamard(b).is_hadamard) {
      throw DomainError("mu_vectors_to_bases: every basis must be unbiased to the standard basis");
    }
  }
  CMatrix stacked(d * static_cast<int>(bases.size()), d);
  for (std::size_t i = 0; i < bases.size(); ++i) stacked.middleRows(static_cast<Eigen::Index>(i) * d, d) = bases[i].adjoint();

  const int workers = worker_count(cfg.threads);
  std::vector<std::vector<Cluster>> local(static_cast<std::size_t>(workers));
  std::vector<int> converged(static_cast<std::size_t>(workers), 0);
  std::vector<std::unique_ptr<PhaseSolver>> solvers;
  for (int w = 0; w < workers; ++w) solvers.push_back(std::make_unique<PhaseSolver>(stacked, cfg.newton_max_iter, cfg.newton_tol));
  const double accept = cfg.newton_tol * 10.0;

  parallel_restarts(cfg.restarts, workers, [&](int w, int idx) {
    std::mt19937_64 rng(restart_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
    auto& solver = *solvers[static_cast<std::size_t>(w)];
    const double res = solver.solve(rng);
    if (!(res < accept)) return;
    ++converged[static_cast<std::size_t>(w)];
    auto& cl = local[static_cast<std::size_t>(w)];
    const CVector& v = solver.psi();
    for (const auto& c : cl)
      if (projective_distance(c.v, v) <= cfg.dedup_tol) return;
    cl.push_back({canonical_phase(v), res, idx});
  });

  std::vector<Cluster> all;
  for (auto& cl : local) all.insert(all.end(), cl.begin(), cl.end());
  std::sort(all.begin(), all.end(), [](const Cluster& a, const Cluster& b) { return a.first < b.first; });
  std::vector<Cluster> merged;
  for (const auto& c : all) {
    bool dup = false;
    for (const auto& m : merged)
      if (projective_distance(m.v, c.v) <= cfg.dedup_tol) {
        dup = true;
        break;
      }
    if (!dup) merged.push_back(c);
  }

  VectorSolutionSet out;
  out.label = label;
  out.dim = d;
  out.restarts = cfg.restarts;
  out.converged = std::accumulate(converged.begin(), converged.end(), 0);
  const int late = static_cast<int>(std::ceil(0.8 * cfg.restarts));
  for (const auto& c : merged)
    if (c.first >= late) out.coverage_warning = true;
  for (std::size_t i = 0; i < merged.size() && !out.continuum_detected; ++i)
    for (std::size_t j = i + 1; j < merged.size(); ++j)
      if (merged[i].residual < 1e-12 && merged[j].residual < 1e-12 &&
          projective_distance(merged[i].v, merged[j].v) < 1e-3) {
        out.continuum_detected = true;
        break;
      }
  std::sort(merged.begin(), merged.end(), [](const Cluster& a, const Cluster& b) { return lex_less(a.v, b.v); });
  for (const auto& c : merged) {
    out.vectors.push_back(c.v);
    // Recheck against every basis from scratch.
    double dev = 0.0;
    for (const auto& b : bases) dev = std::max(dev, ((b.adjoint() * c.v).cwiseAbs2().array() - 1.0 / d).abs().maxCoeff());
    out.residuals.push_back(dev);
    if (jacobian_rank_deficient(stacked, c.v)) ++out.singular;
  }
  return out;
}

VectorSolutionSet mu_vectors_to_pair(const HadamardMatrix& h, const SearchConfig& cfg, const std::string& label) {
  return mu_vectors_to_bases({h.matrix()}, cfg, label);
}

std::vector<OrthonormalBasis> group_into_bases(const std::vector<CVector>& vectors, double eps_orth) {
  const int n = static_cast<int>(vectors.size());
  if (n > 200) throw UnsupportedError("group_into_bases: more than 200 vectors");
  if (n == 0) return {};
  const int d = static_cast<int>(vectors.front().size());
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      adj[i][j] = adj[j][i] = std::abs(vectors[static_cast<std::size_t>(i)].dot(vectors[static_cast<std::size_t>(j)])) < eps_orth;

  std::vector<OrthonormalBasis> out;
  std::vector<int> clique;
  std::function<void(const std::vector<int>&)> extend = [&](const std::vector<int>& cand) {
    if (static_cast<int>(clique.size()) == d) {
      CMatrix m(d, d);
      for (int k = 0; k < d; ++k) m.col(k) = vectors[static_cast<std::size_t>(clique[static_cast<std::size_t>(k)])];
      out.emplace_back(m, 1e-6);
      return;
    }
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (clique.size() + (cand.size() - i) < static_cast<std::size_t>(d)) return;
      const int v = cand[i];
      std::vector<int> next;
      for (std::size_t j = i + 1; j < cand.size(); ++j)
        if (adj[v][cand[j]]) next.push_back(cand[j]);
      clique.push_back(v);
      extend(next);
      clique.pop_back();
    }
  };
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  extend(all);
  return out;
}

ExtensionReport extension_probe(const std::vector<OrthonormalBasis>& bases, const SearchConfig& cfg) {
  if (bases.size() < 2) throw DomainError("extension_probe: need at least two bases");
  const int d = bases.front().dim();
  for (std::size_t a = 0; a < bases.size(); ++a)
    for (std::size_t b = a + 1; b < bases.size(); ++b) {
      const CMatrix g = bases[a].matrix().adjoint() * bases[b].matrix();
      if ((g.cwiseAbs2().array() - 1.0 / d).abs().maxCoeff() > 1e-8) {
        throw DomainError("extension_probe: input bases are not pairwise mutually unbiased");
      }
    }
  const CMatrix rot = bases.front().matrix().adjoint();
  std::vector<CMatrix> rotated;
  for (std::size_t b = 1; b < bases.size(); ++b) rotated.push_back(rot * bases[b].matrix());
  const auto sol = mu_vectors_to_bases(rotated, cfg, "extension");
  std::vector<CVector> back;
  for (const auto& v : sol.vectors) back.push_back(bases.front().matrix() * v);
  ExtensionReport rep;
  rep.extra_vectors = static_cast<int>(back.size());
  rep.extensions = group_into_bases(back);
  rep.bases_found = static_cast<int>(rep.extensions.size());
  rep.extends_to_basis = rep.bases_found > 0;
  return rep;
}

void ConstellationSpec::validate() const {
  if (dim < 2) throw DomainError("ConstellationSpec: dimension must be at least 2");
  if (parts.empty()) throw DomainError("ConstellationSpec: parts must be nonempty");
  for (int x : parts)
    if (x < 1 || x > dim) throw DomainError("ConstellationSpec: every part must lie in [1, d]");
}

int ConstellationSpec::full_basis_param_count(int d, int mu) { return (d - 1) * ((mu - 1) * (d - 1) - 1); }

namespace {

bool standard_first(const ConstellationSpec& s) { return s.parts.front() >= s.dim - 1; }

}  // namespace

int ConstellationSpec::param_count() const {
  validate();
  if (standard_first(*this)) {
    int rest = 0;
    for (std::size_t i = 1; i < parts.size(); ++i) rest += parts[i];
    return rest == 0 ? 0 : (dim - 1) * rest - (dim - 1);
  }
  return 2 * dim * std::accumulate(parts.begin(), parts.end(), 0);
}

std::string ConstellationSpec::label() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  os << "}_" << dim;
  return os.str();
}

double constellation_f(const std::vector<std::vector<CVector>>& parts) {
  std::vector<CVector> v;
  std::vector<int> owner;
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (const auto& x : parts[p]) {
      v.push_back(x);
      owner.push_back(static_cast<int>(p));
    }
  if (v.empty()) return 0.0;
  const double c = 1.0 / std::sqrt(static_cast<double>(v.front().size()));
  double f = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double a = std::abs(v[i].dot(v[j]));
      const double chi = owner[i] == owner[j] ? (i == j ? 1.0 : 0.0) : c;
      f += (a - chi) * (a - chi);
    }
  return f;
}

namespace {

/// Constellation objective on the free vectors. Vectors in the standard-basis layout are
/// unimodular phase vectors; otherwise they are normalized complex vectors.
class ConstellationProblem {
 public:
  explicit ConstellationProblem(const ConstellationSpec& spec) : d_(spec.dim), phase_(standard_first(spec)) {
    const std::size_t first = phase_ ? 1 : 0;
    for (std::size_t p = first; p < spec.parts.size(); ++p)
      for (int k = 0; k < spec.parts[p]; ++k) part_.push_back(static_cast<int>(p));
    n_ = static_cast<int>(part_.size());
    if (phase_) {
      for (int i = 0; i < n_; ++i) {
        if (i == 0) continue;  // first free vector fixed to the uniform vector
        for (int k = 1; k < d_; ++k) params_.push_back({i, k, 0});
      }
    } else {
      for (int i = 0; i < n_; ++i)
        for (int k = 0; k < d_; ++k) {
          params_.push_back({i, k, 0});
          params_.push_back({i, k, 1});
        }
    }
    u_.resize(d_, n_);
    z_.resize(d_, n_);
    a_.resize(n_, n_);
    g_.resize(d_, n_);
    target_.resize(n_, n_);
    const double c = 1.0 / std::sqrt(static_cast<double>(d_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) target_(i, j) = part_[static_cast<std::size_t>(i)] == part_[static_cast<std::size_t>(j)] ? 0.0 : c;
  }

  [[nodiscard]] int size() const { return static_cast<int>(params_.size()); }
  [[nodiscard]] int vectors() const { return n_; }

  void random_start(std::mt19937_64& rng, Eigen::VectorXd& x) const {
    x.resize(size());
    if (phase_) {
      std::uniform_real_distribution<double> u(0.0, kTwoPi);
      for (int i = 0; i < size(); ++i) x(i) = u(rng);
    } else {
      std::normal_distribution<double> n(0.0, 1.0);
      for (int i = 0; i < size(); ++i) x(i) = n(rng);
    }
  }

  /// F over ordered pairs of free vectors (fixed standard-basis pairs vanish identically).
  double value(const Eigen::VectorXd& x) {
    build(x);
    a_.noalias() = u_.adjoint() * u_;
    double f = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (i == j) continue;
        const double e = std::abs(a_(i, j)) - target_(i, j);
        f += e * e;
      }
    return f;
  }

  double value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const double f = value(x);
    // g_i = dF/d conj(u_i) = sum_j 2 (1 - c_ij/|a_ij|) conj(a_ij) u_j
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (i == j) continue;
        const double m = std::abs(a_(i, j));
        const double c = target_(i, j);
        if (c > 0.0 && m < 1e-300) continue;
        const double fac = c > 0.0 ? 1.0 - c / m : 1.0;
        w(j, i) = 2.0 * fac * std::conj(a_(i, j));
      }
    g_.noalias() = u_ * w;
    grad.resize(size());
    for (int p = 0; p < size(); ++p) {
      const auto& pr = params_[static_cast<std::size_t>(p)];
      if (phase_) {
        grad(p) = -2.0 * (std::conj(g_(pr.comp, pr.vec)) * u_(pr.comp, pr.vec)).imag();
      } else {
        const CVector z = z_.col(pr.vec);
        const double n = z.norm();
        const CVector gi = g_.col(pr.vec);
        const Complex h = gi(pr.comp) / n - z(pr.comp) * z.dot(gi).real() / (n * n * n);
        grad(p) = 2.0 * (pr.imag ? h.imag() : h.real());
      }
    }
    return f;
  }

  /// Residuals with sum r^2 = F: real and imaginary parts within a part, moduli across parts.
  void residuals(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    value(x);
    int count = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) count += target_(i, j) > 0.0 ? 1 : 2;
    r.resize(count);
    if (jac) jac->setZero(count, size());
    const double s2 = std::sqrt(2.0);
    // du_i/dp as dense vectors, indexed by parameter.
    std::vector<CVector> du;
    if (jac) {
      du.reserve(static_cast<std::size_t>(size()));
      for (int p = 0; p < size(); ++p) du.push_back(derivative(p));
    }
    std::vector<std::vector<int>> by_vec(static_cast<std::size_t>(n_));
    if (jac)
      for (int p = 0; p < size(); ++p) by_vec[static_cast<std::size_t>(params_[static_cast<std::size_t>(p)].vec)].push_back(p);
    int row = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        const Complex a = a_(i, j);
        const bool same = target_(i, j) == 0.0;
        if (same) {
          r(row) = s2 * a.real();
          r(row + 1) = s2 * a.imag();
        } else {
          r(row) = s2 * (std::abs(a) - target_(i, j));
        }
        if (jac) {
          auto put = [&](int p, Complex da) {
            if (same) {
              (*jac)(row, p) += s2 * da.real();
              (*jac)(row + 1, p) += s2 * da.imag();
            } else {
              const double m = std::abs(a);
              if (m > 1e-300) (*jac)(row, p) += s2 * (std::conj(a) * da).real() / m;
            }
          };
          for (int p : by_vec[static_cast<std::size_t>(i)]) put(p, du[static_cast<std::size_t>(p)].dot(u_.col(j)));
          for (int p : by_vec[static_cast<std::size_t>(j)]) put(p, u_.col(i).dot(du[static_cast<std::size_t>(p)]));
        }
        row += same ? 2 : 1;
      }
  }

 private:
  struct Param {
    int vec, comp, imag;
  };

  void build(const Eigen::VectorXd& x) {
    if (phase_) {
      const double s = 1.0 / std::sqrt(static_cast<double>(d_));
      u_.setConstant(s);
      for (int p = 0; p < size(); ++p) {
        const auto& pr = params_[static_cast<std::size_t>(p)];
        u_(pr.comp, pr.vec) = std::polar(s, x(p));
      }
    } else {
      for (int p = 0; p < size(); ++p) {
        const auto& pr = params_[static_cast<std::size_t>(p)];
        Complex& z = z_(pr.comp, pr.vec);
        z = pr.imag ? Complex(z.real(), x(p)) : Complex(x(p), z.imag());
      }
      for (int i = 0; i < n_; ++i) u_.col(i) = z_.col(i) / z_.col(i).norm();
    }
  }

  [[nodiscard]] CVector derivative(int p) const {
    const auto& pr = params_[static_cast<std::size_t>(p)];
    CVector du = CVector::Zero(d_);
    if (phase_) {
      du(pr.comp) = Complex(0.0, 1.0) * u_(pr.comp, pr.vec);
    } else {
      const CVector z = z_.col(pr.vec);
      const double n = z.norm();
      du(pr.comp) = (pr.imag ? Complex(0.0, 1.0) : Complex(1.0, 0.0)) / n;
      const double dn = (pr.imag ? z(pr.comp).imag() : z(pr.comp).real()) / (n * n * n);
      du -= z * dn;
    }
    return du;
  }

  int d_;
  bool phase_;
  int n_ = 0;
  std::vector<int> part_;
  std::vector<Param> params_;
  CMatrix u_, z_, a_, g_;
  Eigen::MatrixXd target_;
};

double run_bfgs(ConstellationProblem& prob, Eigen::VectorXd& x, int max_iter) {
  const int n = prob.size();
  Eigen::VectorXd g, gn, xn, s, y, dir;
  double f = prob.value_and_gradient(x, g);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  double f_mark = f;
  for (int it = 0; it < max_iter && f > 1e-24; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < 1e-14) break;
    // Stalled above the success threshold: a local minimum.
    if (it > 0 && it % 100 == 0) {
      if (f > 1e-10 && f > 0.999 * f_mark) break;
      f_mark = f;
    }
    dir = -hinv * g;
    double slope = g.dot(dir);
    if (slope >= 0.0) {
      hinv.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    if (slope > -1e-300) break;
    double t = 1.0, fn = 0.0;
    bool ok = false;
    for (int ls = 0; ls < 50; ++ls) {
      xn = x + t * dir;
      fn = prob.value_and_gradient(xn, gn);
      if (fn <= f + 1e-4 * t * slope) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) {
      if (hinv.isIdentity()) break;
      hinv.setIdentity();
      continue;
    }
    s = xn - x;
    y = gn - g;
    const double sy = s.dot(y);
    if (it == 0 && sy > 0.0) hinv *= sy / y.squaredNorm();
    if (sy > 1e-300) {
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = hinv * y;
      hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
    }
    x = xn;
    g = gn;
    f = fn;
  }
  return prob.value(x);
}

double run_lm(ConstellationProblem& prob, Eigen::VectorXd& x, int max_iter) {
  Eigen::VectorXd r, rt, step, xt;
  Eigen::MatrixXd jac;
  prob.residuals(x, r, &jac);
  double phi = r.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < max_iter && phi > 1e-24; ++it) {
    Eigen::MatrixXd a = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    a.diagonal().array() += lambda * (1.0 + a.diagonal().array());
    step = -a.ldlt().solve(grad);
    xt = x + step;
    prob.residuals(xt, rt, nullptr);
    const double phit = rt.squaredNorm();
    if (phit < phi) {
      x = xt;
      prob.residuals(x, r, &jac);
      phi = phit;
      lambda = std::max(lambda * 0.3, 1e-15);
    } else {
      lambda *= 4.0;
      if (lambda > 1e12) break;
    }
  }
  return prob.value(x);
}

}  // namespace

ConstellationResult constellation_search(const ConstellationSpec& spec, const SearchConfig& cfg) {
  spec.validate();
  cfg.validate();
  ConstellationResult res;
  res.attempts = cfg.restarts;
  {
    ConstellationProblem probe(spec);
    if (probe.size() == 0) {
      Eigen::VectorXd x;
      res.best_residual = probe.value(x);
      res.found = res.best_residual < 1e-16;
      res.successes = res.found ? cfg.restarts : 0;
      return res;
    }
  }
  const int workers = worker_count(cfg.threads);
  std::vector<double> finals(static_cast<std::size_t>(cfg.restarts), 0.0);
  std::vector<std::unique_ptr<ConstellationProblem>> probs;
  for (int w = 0; w < workers; ++w) probs.push_back(std::make_unique<ConstellationProblem>(spec));
  parallel_restarts(cfg.restarts, workers, [&](int w, int idx) {
    auto& prob = *probs[static_cast<std::size_t>(w)];
    std::mt19937_64 rng(restart_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
    Eigen::VectorXd x;
    prob.random_start(rng, x);
    const int iters = std::max(cfg.newton_max_iter, 40 * prob.size());
    finals[static_cast<std::size_t>(idx)] =
        cfg.optimizer == Optimizer::quasi_newton_f ? run_bfgs(prob, x, iters) : run_lm(prob, x, iters);
  });
  res.best_residual = *std::min_element(finals.begin(), finals.end());
  res.successes = static_cast<int>(std::count_if(finals.begin(), finals.end(), [](double f) { return f < 1e-16; }));
  res.found = res.successes > 0;
  return res;
}

}  // namespace mubforge
