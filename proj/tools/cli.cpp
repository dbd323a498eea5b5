#include "cli.hpp"

#include "mubforge/analysis.hpp"
#include "mubforge/constructions.hpp"
#include "mubforge/document.hpp"
#include "mubforge/finite_algebra.hpp"
#include "mubforge/hadamard_catalogue.hpp"
#include "mubforge/search.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace mubforge::cli {

using nlohmann::json;

namespace {

struct Options {
  std::string method;
  std::string family;
  int d = 0;
  std::string params;
  std::string in;
  std::string other;
  std::string out;
  std::string checks = "mu";
  std::string pair;
  std::string constellation;
  std::string format = "json";
  std::string optimizer = "quasi_newton_f";
  int restarts = 0;
  std::uint64_t seed = 1;
  int threads = 0;
  bool extend = false;
};

Params parse_params(const std::string& text) {
  Params p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw DomainError("--params entries must look like key=value");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) throw DomainError("--params value for '" + key + "' is not a number");
    p[key] = v;
  }
  return p;
}

std::vector<int> parse_parts(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) throw DomainError("--constellation expects comma-separated integers");
    parts.push_back(v);
  }
  return parts;
}

void maybe_write(const Options& o, const MatrixDocument& doc) {
  if (!o.out.empty()) write_document(doc, o.out);
}

MUBSet build_set(const Options& o, std::ostream& out) {
  if (o.method.empty()) throw DomainError("construct: --method is required");
  if (o.d < 2) throw DomainError("construct: --d must be at least 2");
  const Method m = method_from_string(o.method);
  const Params params = parse_params(o.params);
  switch (m) {
    case Method::ivanovic:
    case Method::wootters_fields:
    case Method::klappenecker_rotteler:
    case Method::alltop:
    case Method::heisenberg_weyl:
      return construct_complete(m, o.d);
    case Method::tensor_product: {
      std::vector<MUBSet> factors;
      for (const auto& [p, n] : factorize(o.d)) {
        int q = 1;
        for (int i = 0; i < n; ++i) q *= p;
        const auto methods = applicable_complete_methods(q);
        factors.push_back(construct_complete(methods.front(), q));
      }
      if (factors.size() < 2) throw DomainError("tensor_product: --d must have at least two distinct prime factors");
      return tensor_product_mubs(factors);
    }
    case Method::latin_square: {
      int s = 1;
      while ((s + 1) * (s + 1) <= o.d) ++s;
      if (s * s != o.d) throw DomainError("latin_square: --d must be a perfect square");
      const MolsSet mols = mols_generate(s);
      return latin_square_mubs(s, mols.latin, HadamardMatrix(fourier_matrix(s)));
    }
    case Method::weighted_design:
      return weighted_design(o.d);
    case Method::approx: {
      const auto it = params.find("p");
      const auto rep = approx_mub(o.d, it == params.end() ? 0 : static_cast<int>(it->second));
      out << "approx: p = " << rep.p << ", max |<u|v>|^2 = " << rep.max_overlap_sq << ", bound sqrt(p)/d = "
          << rep.bound << (rep.within_bound ? " (within bound)" : " (exceeds bound)") << '\n';
      return rep.set;
    }
    case Method::product_family_d6: {
      if (o.d != 6) throw DomainError("product_family_d6: --d must be 6");
      if (o.family.empty()) throw DomainError("product_family_d6: --family P0..P3, T0 or T1 is required");
      return product_family_d6(product_family_from_string(o.family), params);
    }
  }
  throw DomainError("unsupported method");
}

int cmd_construct(const Options& o, std::ostream& out) {
  const MUBSet set = build_set(o, out);
  const double dev = set.size() > 1 ? max_mu_deviation(set.bases) : 0.0;
  out << "method " << to_string(set.method) << ", d = " << set.dim << ", bases = " << set.size()
      << ", max MU deviation = " << dev << '\n';
  maybe_write(o, to_document(set));
  return kOk;
}

int cmd_catalogue(const Options& o, std::ostream& out) {
  if (o.family.empty()) {
    out << std::left << std::setw(18) << "family" << std::setw(7) << "order" << "parameters\n";
    for (const auto& e : catalogue()) {
      std::string names;
      for (const auto& n : e.param_names) names += (names.empty() ? "" : ",") + n;
      out << std::setw(18) << to_string(e.family) << std::setw(7) << (e.order ? std::to_string(e.order) : "d")
          << (names.empty() ? "-" : names) << '\n';
    }
    return kOk;
  }
  const Family f = family_from_string(o.family);
  const Params params = parse_params(o.params);
  const HadamardMatrix h = generate(f, params);
  const auto flags = structure_flags(h);
  const auto def = defect(h);
  const auto haag = haagerup_set(h);
  out << "family " << to_string(f) << ", order " << h.dim() << '\n'
      << "  defect            " << def.defect << '\n'
      << "  haagerup set size " << haag.size() << '\n'
      << "  butson order      " << (flags.butson_order ? std::to_string(*flags.butson_order) : "-") << '\n'
      << "  real              " << (flags.is_real ? "yes" : "no") << '\n'
      << "  circulant         " << (flags.is_circulant ? "yes" : "no") << '\n';
  if (flags.h2_reducible) out << "  h2 reducible      " << (*flags.h2_reducible ? "yes" : "no") << '\n';
  if (flags.has_subunitary_3x3) out << "  3x3 subunitary    " << (*flags.has_subunitary_3x3 ? "yes" : "no") << '\n';
  auto doc = to_document(h, to_string(f), params);
  doc.metadata["defect"] = def.defect;
  maybe_write(o, doc);
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.in.empty()) throw DomainError("verify: --in is required");
  const MatrixDocument doc = read_document(o.in);
  const MUBSet set = mubset_from_document(doc);
  const Params params = parse_params(o.params);
  std::vector<std::string> checks;
  {
    std::stringstream ss(o.checks);
    std::string c;
    while (std::getline(ss, c, ','))
      if (!c.empty()) checks.push_back(c);
  }
  const int d = set.dim;
  json report;
  report["dim"] = d;
  report["bases"] = set.size();
  bool ok = true;
  auto line = [&](const std::string& name, bool pass, const std::string& detail) {
    out << std::left << std::setw(14) << name << (pass ? "PASS  " : "FAIL  ") << detail << '\n';
    ok = ok && pass;
  };
  std::ostringstream tmp;
  tmp << std::setprecision(12);
  for (const auto& c : checks) {
    tmp.str("");
    if (c == "mu") {
      const auto r = check_mu_set(set.bases);
      report["mu"] = {{"max_mu_deviation", r.max_mu_deviation}, {"max_orth_deviation", r.max_orth_deviation},
                      {"f_value", r.f_value}, {"avg_distance", r.avg_distance}, {"is_mu", r.is_mu}};
      tmp << "max_mu_deviation = " << r.max_mu_deviation << ", f_value = " << r.f_value;
      line("mu", r.is_mu, tmp.str());
    } else if (c == "welch") {
      const auto r = welch_and_design_check(all_vectors(set.bases));
      const double n = static_cast<double>(d) * set.size();
      const double t1 = n * n / d, t2 = 2.0 * n * n / (d * (d + 1.0));
      const bool pass = std::abs(r.welch_k1 - t1) < 1e-9 * t1 && std::abs(r.welch_k2 - t2) < 1e-9 * t2;
      report["welch"] = {{"welch_k1", r.welch_k1}, {"welch_k2", r.welch_k2}, {"bound_k1", t1}, {"bound_k2", t2}, {"saturated", pass}};
      tmp << "welch_k1 = " << r.welch_k1 << " (bound " << t1 << "), welch_k2 = " << r.welch_k2 << " (bound " << t2 << ")";
      line("welch", pass, tmp.str());
    } else if (c == "design") {
      const auto r = welch_and_design_check(set);
      const bool pass = r.two_design_deviation < 1e-9;
      report["design"] = {{"two_design_deviation", r.two_design_deviation}, {"weighted", r.weighted}, {"holds", pass}};
      tmp << (r.weighted ? "weighted " : "") << "two_design_deviation = " << r.two_design_deviation;
      line("design", pass, tmp.str());
    } else if (c == "entanglement") {
      const auto d1 = params.find("d1"), d2 = params.find("d2");
      if (d1 == params.end() || d2 == params.end()) throw DomainError("entanglement check needs --params d1=..,d2=..");
      const auto r = entanglement_content(set, static_cast<int>(d1->second), static_cast<int>(d2->second));
      report["entanglement"] = {{"content", r.content}, {"target", r.target}, {"complete", r.complete}, {"holds", r.holds}};
      tmp << "content = " << r.content << (r.complete ? " target " : " bound ") << r.target;
      line("entanglement", r.holds, tmp.str());
    } else if (c == "qrac") {
      const double p = qrac_probability(set.bases);
      report["qrac"] = p;
      tmp << "average success probability = " << p;
      line("qrac", true, tmp.str());
    } else if (c == "fourier") {
      std::mt19937_64 rng(o.seed);
      std::uniform_int_distribution<int> g(-3, 3);
      std::vector<std::vector<int>> gammas(20, std::vector<int>(static_cast<std::size_t>(d)));
      for (auto& v : gammas)
        for (auto& x : v) x = g(rng);
      const auto r = fourier_linear_constraints(set, gammas);
      report["fourier"] = {{"e0", r.e0}, {"f0", r.f0}, {"max_orth_residual", r.max_orth_residual},
                           {"max_overlap_residual", r.max_overlap_residual}, {"holds", r.holds}};
      tmp << "E(0) = " << r.e0 << ", F(0) = " << r.f0 << ", max residual = "
          << std::max(r.max_orth_residual, r.max_overlap_residual);
      line("fourier", r.holds, tmp.str());
    } else {
      throw DomainError("unknown check '" + c + "'");
    }
  }
  report["verified"] = ok;
  maybe_write(o, report_document(d, report));
  return ok ? kOk : kFailed;
}

HadamardMatrix pair_matrix(const Options& o) {
  const Params params = parse_params(o.params);
  const std::string& p = o.pair;
  if (p == "fourier6" || p == "F6") return generate(Family::fourier, {{"d", 6}});
  if (p == "fourier") return generate(Family::fourier, {{"d", static_cast<double>(o.d)}});
  if (p == "tao_s6" || p == "S6") return tao_s6();
  if (p == "bjorck_c6" || p == "C6") return bjorck_c6();
  if (p == "dita" || p == "D6") return dita_slice(params.count("lambda") ? params.at("lambda") : 0.0);
  return generate(family_from_string(p), params);
}

int cmd_search(const Options& o, std::ostream& out) {
  SearchConfig cfg;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.optimizer = optimizer_from_string(o.optimizer);
  if (o.restarts > 0) cfg.restarts = o.restarts;

  if (!o.constellation.empty()) {
    if (o.d < 2) throw DomainError("search: --constellation needs --d");
    if (o.restarts <= 0) cfg.restarts = 10000;
    const ConstellationSpec spec{o.d, parse_parts(o.constellation)};
    const auto r = constellation_search(spec, cfg);
    out << spec.label() << ": parameters " << spec.param_count() << ", successes " << r.successes << "/" << r.attempts
        << ", best F = " << r.best_residual << (r.found ? "  found" : "  not found") << '\n';
    maybe_write(o, report_document(o.d, {{"constellation", spec.label()}, {"parameters", spec.param_count()},
                                         {"successes", r.successes}, {"attempts", r.attempts},
                                         {"best_residual", r.best_residual}, {"found", r.found}, {"seed", o.seed}}));
    return r.found ? kOk : kFailed;
  }

  if (o.extend) {
    if (o.in.empty()) throw DomainError("search --extend needs --in with a mubset or matrix document");
    const MUBSet set = mubset_from_document(read_document(o.in));
    const auto r = extension_probe(set.bases, cfg);
    out << "extension: " << r.extra_vectors << " vectors, " << r.bases_found << " bases"
        << (r.extends_to_basis ? "  extends" : "  does not extend") << '\n';
    maybe_write(o, report_document(set.dim, {{"extra_vectors", r.extra_vectors}, {"bases_found", r.bases_found},
                                             {"extends_to_basis", r.extends_to_basis}, {"seed", o.seed}}));
    return r.extra_vectors > 0 ? kOk : kFailed;
  }

  HadamardMatrix h = [&] {
    if (!o.in.empty()) return HadamardMatrix(matrix_from_document(read_document(o.in)));
    if (o.pair.empty()) throw DomainError("search: one of --pair, --in or --constellation is required");
    return pair_matrix(o);
  }();
  if (o.restarts <= 0) cfg.restarts = 200000;
  const std::string label = o.pair.empty() ? o.in : o.pair;
  const auto sols = mu_vectors_to_pair(h, cfg, label);
  int bases = -1;
  if (sols.vectors.size() <= 200) bases = static_cast<int>(group_into_bases(sols.vectors).size());
  out << "pair {I, " << label << "}: " << sols.vectors.size() << " vectors";
  if (bases >= 0) out << ", " << bases << " bases";
  out << " (restarts " << sols.restarts << ", converged " << sols.converged << ")\n";
  if (sols.singular) out << "note: " << sols.singular << " solutions are singular roots\n";
  if (sols.coverage_warning) out << "warning: new solutions still appearing late; raise --restarts\n";
  if (sols.continuum_detected) out << "warning: solutions form a continuum; the count is not meaningful\n";
  auto doc = to_document(sols, o.seed);
  if (bases >= 0) doc.metadata["bases"] = bases;
  maybe_write(o, doc);
  return sols.vectors.empty() ? kFailed : kOk;
}

int cmd_equiv(const Options& o, std::ostream& out) {
  if (o.in.empty() || o.other.empty()) throw DomainError("equiv: --in and --other are required");
  const HadamardMatrix a(matrix_from_document(read_document(o.in)));
  const HadamardMatrix b(matrix_from_document(read_document(o.other)));
  if (a.dim() != b.dim()) {
    out << "orders differ: inequivalent\n";
    return kFailed;
  }
  const bool same_set = same_haagerup_set(haagerup_set(a), haagerup_set(b));
  const int da = defect(a).defect, db = defect(b).defect;
  const bool same = same_set && da == db;
  out << "haagerup sets " << (same_set ? "agree" : "differ") << ", defects " << da << " and " << db << '\n'
      << (same ? "invariants agree: possibly equivalent\n" : "invariants differ: inequivalent\n");
  maybe_write(o, report_document(a.dim(), {{"haagerup_agree", same_set}, {"defects", {da, db}}, {"invariants_agree", same}}));
  return same ? kOk : kFailed;
}

int cmd_export(const Options& o, std::ostream& out) {
  if (o.in.empty()) throw DomainError("export: --in is required");
  const MatrixDocument doc = read_document(o.in);
  if (o.format == "json") {
    if (o.out.empty()) {
      out << serialize(doc) << '\n';
    } else {
      write_document(doc, o.out);
    }
    return kOk;
  }
  if (o.format != "text") throw DomainError("export: --format must be json or text");
  std::ostringstream s;
  s << std::setprecision(17);
  s << "# " << doc.kind << " d=" << doc.dim << '\n';
  for (std::size_t b = 0; b < doc.payload.size(); ++b) {
    s << "# block " << b << '\n';
    const CMatrix& m = doc.payload[b];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) s << (c ? "  " : "") << m(r, c).real() << ' ' << m(r, c).imag();
      s << '\n';
    }
  }
  if (o.out.empty()) {
    out << s.str();
  } else {
    std::ofstream f(o.out);
    if (!f) throw DomainError("cannot open '" + o.out + "' for writing");
    f << s.str();
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mutually unbiased bases toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* construct = app.add_subcommand("construct", "Build a set of MU bases");
  construct->add_option("--method", o.method, "Construction method")->required();
  construct->add_option("--d", o.d, "Dimension")->required();
  construct->add_option("--params", o.params, "key=value,... parameters");
  construct->add_option("--family", o.family, "Product family for product_family_d6");
  construct->add_option("--out", o.out, "Output document");

  auto* cat = app.add_subcommand("catalogue", "List or generate Hadamard matrices");
  cat->add_option("--family", o.family, "Family name");
  cat->add_option("--params", o.params, "key=value,... parameters");
  cat->add_option("--out", o.out, "Output document");

  auto* verify = app.add_subcommand("verify", "Check a stored set");
  verify->add_option("--in", o.in, "Input document")->required();
  verify->add_option("--checks", o.checks, "mu,welch,design,entanglement,qrac,fourier");
  verify->add_option("--params", o.params, "Check parameters, e.g. d1=2,d2=3");
  verify->add_option("--seed", o.seed, "Seed for random gamma vectors");
  verify->add_option("--out", o.out, "Report document");

  auto* search = app.add_subcommand("search", "Numerical searches");
  search->add_option("--pair", o.pair, "fourier6, tao_s6, bjorck_c6, dita, fourier or a catalogue family");
  search->add_option("--in", o.in, "Matrix document for the pair, or bases with --extend");
  search->add_flag("--extend", o.extend, "Probe extensions of the bases in --in");
  search->add_option("--constellation", o.constellation, "Comma-separated part sizes");
  search->add_option("--d", o.d, "Dimension");
  search->add_option("--params", o.params, "Family parameters");
  search->add_option("--restarts", o.restarts, "Random restarts");
  search->add_option("--seed", o.seed, "Seed");
  search->add_option("--threads", o.threads, "Worker threads (0 = automatic)");
  search->add_option("--optimizer", o.optimizer, "quasi_newton_f or newton_residual");
  search->add_option("--out", o.out, "Output document");

  auto* equiv = app.add_subcommand("equiv", "Compare equivalence invariants of two Hadamard matrices");
  equiv->add_option("--in", o.in, "First matrix document")->required();
  equiv->add_option("--other", o.other, "Second matrix document")->required();
  equiv->add_option("--out", o.out, "Report document");

  auto* exp = app.add_subcommand("export", "Re-emit a document");
  exp->add_option("--in", o.in, "Input document")->required();
  exp->add_option("--out", o.out, "Output path (stdout when omitted)");
  exp->add_option("--format", o.format, "json or text");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (construct->parsed()) return cmd_construct(o, out);
    if (cat->parsed()) return cmd_catalogue(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (search->parsed()) return cmd_search(o, out);
    if (equiv->parsed()) return cmd_equiv(o, out);
    if (exp->parsed()) return cmd_export(o, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace mubforge::cli
