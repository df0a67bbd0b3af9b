#include "taubethe/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "taubethe/abaoracle.hpp"
#include "taubethe/fockvev.hpp"
#include "taubethe/grasskp.hpp"
#include "taubethe/report.hpp"
#include "taubethe/symcore.hpp"
#include "taubethe/xxzcore.hpp"

namespace taubethe::cli {

namespace {

const std::vector<std::pair<std::string, Command>>& command_table() {
  static const std::vector<std::pair<std::string, Command>> t = {
      {"bethe-solve", Command::BetheSolve},         {"scalar-product", Command::ScalarProduct},
      {"tau-check", Command::TauCheck},             {"dwpf", Command::Dwpf},
      {"fermion-vev", Command::FermionVev},         {"grassmann-point", Command::GrassmannPoint},
      {"identity-check", Command::IdentityCheck},
  };
  return t;
}

int get_int(const json& doc, const char* key, std::optional<int> fallback = std::nullopt) {
  if (!doc.contains(key)) {
    if (fallback) return *fallback;
    throw Error(ErrorKind::InvalidInput, std::string("missing field '") + key + "'");
  }
  if (!doc[key].is_number_integer()) throw Error(ErrorKind::InvalidInput, std::string("'") + key + "' must be an integer");
  return doc[key].get<int>();
}

std::string scalar_text(const json& v, const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(ErrorKind::InvalidInput, what + " must be a string (\"p/r\" or \"a+bi\") or an integer");
}

std::vector<std::string> scalar_list(const json& doc, const char* key) {
  std::vector<std::string> out;
  if (!doc.contains(key)) return out;
  if (!doc[key].is_array()) throw Error(ErrorKind::InvalidInput, std::string("'") + key + "' must be a list");
  for (const auto& v : doc[key]) out.push_back(scalar_text(v, key));
  return out;
}

// ---------------------------------------------------------------------------

template <unsigned Bits>
struct Runner {
  using C = ComplexOf<Bits>;
  using R = RealOf<Bits>;

  const RunConfig& cfg;
  const RunOptions& opt;
  xxz::ChainParams<C> params;
  std::vector<C> x;
  json results = json::object();
  json verdicts = json::object();
  int exit_code = kPass;

  Runner(const RunConfig& c, const RunOptions& o) : cfg(c), opt(o) {
    params.M = cfg.M;
    params.N = cfg.N;
    params.q = report::parse_complex<Bits>(cfg.q);
    for (const auto& s : cfg.z) params.z.push_back(report::parse_complex<Bits>(s));
    params.validate();
    if (!cfg.x.empty()) {
      if (static_cast<int>(cfg.x.size()) != cfg.N) throw Error(ErrorKind::InvalidInput, "need exactly N values in 'x'");
      for (const auto& s : cfg.x) x.push_back(report::parse_complex<Bits>(s));
    } else {
      std::mt19937_64 rng(cfg.seed ^ 0x5bd1e995ULL);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (int i = 0; i < cfg.N; ++i) x.push_back(C(R(u(rng)), R(u(rng))) + C(R(1.5 * i)));
    }
  }

  void verdict(const std::string& name, bool ok) {
    verdicts[name] = ok;
    if (!ok && exit_code == kPass) exit_code = kMathFailure;
  }

  std::vector<xxz::BetheSolution<C>> solutions(bool allow_partial) {
    auto search = xxz::solve_bethe(params, cfg.num_solutions, cfg.seed);
    results["solver"] = {{"requested", cfg.num_solutions},
                         {"found", search.solutions.size()},
                         {"complete", search.complete},
                         {"starts_used", search.starts_used},
                         {"nonisolated_rejected", search.nonisolated_rejected},
                         {"diverged", search.diverged},
                         {"inadmissible", search.inadmissible},
                         {"threshold", report::real_entry(xxz::certification_threshold<C>())}};
    if (!search.complete) {
      if (search.solutions.empty() || !allow_partial)
        throw Error(ErrorKind::NoConvergence, "found " + std::to_string(search.solutions.size()) + " of " +
                                                  std::to_string(cfg.num_solutions) + " Bethe solutions");
      exit_code = kNoConvergence;
    }
    return search.solutions;
  }

  json solution_entry(const xxz::BetheSolution<C>& s) const {
    return {{"y", report::complex_list(s.y)}, {"residual", report::real_entry(s.residual)},
            {"multiplicity_flag", s.multiplicity_flag}};
  }

  static json expansion_entry(const grasskp::SchurExpansion<C>& e) {
    json a = json::array();
    for (const auto& [lambda, c] : e.coeffs) a.push_back({{"partition", lambda.to_string()}, {"value", report::complex_entry(c)}});
    return a;
  }

  static json tau_entry(const grasskp::TauVerdict& v) {
    json j = {{"is_tau", v.is_tau},
              {"max_relative_residual", report::real_entry(v.max_relative_residual)},
              {"relations_checked", v.relations_checked}};
    j["witness"] = v.witness ? json(v.witness->to_string()) : json(nullptr);
    return j;
  }

  void bethe_solve() {
    auto sols = solutions(true);
    const double thr = xxz::certification_threshold<C>();
    json list = json::array();
    bool certified = true, eigen = true;
    for (const auto& s : sols) {
      auto e = solution_entry(s);
      certified = certified && s.residual < thr;
      if (params.M <= aba::kMaxSites) {
        const double r = aba::bethe_eigenstate_residual(s, C(R(0.3), R(0.17)), params);
        e["eigenstate_residual"] = report::real_entry(r);
        eigen = eigen && r < cfg.tolerance("eigenstate", 1e-10);
      }
      list.push_back(e);
    }
    results["solutions"] = list;
    verdict("residuals_certified", certified);
    verdict("eigenstates", eigen);
  }

  void scalar_product() {
    const double tol = cfg.tolerance("cross_check", 1e-9);
    results["x"] = report::complex_list(x);
    json list = json::array();
    bool ok = true;
    for (const auto& s : solutions(true)) {
      const C kappa = xxz::scalar_product_kappa(x, s, params);
      const C slav = xxz::slavnov_normalized(x, s, params);
      const C brute = aba::scalar_product_bruteforce_mult(x, s.y, params);
      const double e1 = relative_difference(kappa, slav);
      const double e2 = relative_difference(kappa, brute);
      const double e3 = relative_difference(slav, brute);
      ok = ok && e1 < tol && e2 < tol && e3 < tol;
      list.push_back({{"solution", solution_entry(s)},
                      {"multiplicative_kappa", report::complex_entry(kappa)},
                      {"additive_slavnov_normalized", report::complex_entry(slav)},
                      {"bruteforce", report::complex_entry(brute)},
                      {"rel_kappa_slavnov", report::real_entry(e1)},
                      {"rel_kappa_bruteforce", report::real_entry(e2)},
                      {"rel_slavnov_bruteforce", report::real_entry(e3)}});
    }
    results["values"] = list;
    verdict("cross_form_agreement", ok);
  }

  std::vector<C> perturbed(const std::vector<C>& y, double eps, std::uint64_t salt) const {
    std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + salt);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    std::vector<C> out;
    for (const auto& v : y) {
      const double a = ph(rng);
      out.push_back(v * (C(1) + C(R(eps * std::cos(a)), R(eps * std::sin(a)))));
    }
    return out;
  }

  void tau_check() {
    const double tol = cfg.tolerance("tau", 1e-8);
    const double eps = opt.perturb.value_or(0.0);
    results["perturb"] = report::real_entry(eps);
    json list = json::array();
    bool all_tau = true;
    std::uint64_t salt = 0;
    for (const auto& s : solutions(true)) {
      json entry = {{"solution", solution_entry(s)}};
      const auto kexp = xxz::scalar_product_tau_expansion(s, params);
      const auto kv = grasskp::tau_check(kexp, tol);
      if (eps == 0.0) {
        entry["coefficients"] = expansion_entry(kexp);
        entry["verdict"] = tau_entry(kv);
        all_tau = all_tau && kv.is_tau;
      } else {
        const auto yp = perturbed(s.y, eps, salt++);
        const auto bexp = aba::scalar_product_expansion_bruteforce(yp, params);
        const auto bv = grasskp::tau_check(bexp, tol);
        entry["perturbed_y"] = report::complex_list(yp);
        entry["perturbed_bethe_residual"] = report::real_entry(xxz::bethe_residual(yp, params));
        entry["coefficients"] = expansion_entry(bexp);
        entry["verdict"] = tau_entry(bv);
        entry["kappa_path_verdict"] = tau_entry(kv);
        all_tau = all_tau && bv.is_tau;
      }
      list.push_back(entry);
    }
    results["expansions"] = list;
    results["is_tau"] = all_tau;
    verdict("is_tau", all_tau);
  }

  void dwpf() {
    if (params.M != params.N) throw Error(ErrorKind::DimensionMismatch, "dwpf needs M = N");
    const double tol = cfg.tolerance("cross_check", 1e-9);
    results["x"] = report::complex_list(x);
    json list = json::array();
    bool ok = true;
    for (const auto& s : solutions(true)) {
      const auto f = xxz::dwpf_factorization(x, s, params);
      const double e = relative_difference(f.lhs, f.rhs);
      ok = ok && e < tol;
      list.push_back({{"solution", solution_entry(s)},
                      {"lhs", report::complex_entry(f.lhs)},
                      {"rhs", report::complex_entry(f.rhs)},
                      {"relative_error", report::real_entry(e)}});
    }
    results["factorizations"] = list;
    verdict("factorization", ok);
  }

  void fermion_vev() {
    const double tol = cfg.tolerance("cross_check", 1e-9);
    results["x"] = report::complex_list(x);
    json list = json::array();
    bool ok = true;
    for (const auto& s : solutions(true)) {
      const auto kappa = xxz::kappa_matrix(s, params);
      const C vev = fock::lemma4_vev(x, kappa);
      const C direct = grasskp::evaluate_expansion(grasskp::cauchy_binet_expand(kappa), x);
      const C sp = xxz::scalar_product_kappa(x, s, params);
      const C full = xxz::kappa_prefactor(s, params) * vev;
      const double e1 = relative_difference(vev, direct);
      const double e2 = relative_difference(full, sp);
      ok = ok && e1 < tol && e2 < tol;
      list.push_back({{"solution", solution_entry(s)},
                      {"vev", report::complex_entry(vev)},
                      {"schur_sum", report::complex_entry(direct)},
                      {"normalized_vev", report::complex_entry(full)},
                      {"scalar_product", report::complex_entry(sp)},
                      {"rel_vev_schur", report::real_entry(e1)},
                      {"rel_vev_scalar_product", report::real_entry(e2)}});
    }
    results["values"] = list;
    verdict("vev_expansion", ok);
  }

  void grassmann_point() {
    const double tol = cfg.tolerance("cross_check", 1e-9);
    json list = json::array();
    bool ok = true;
    for (const auto& s : solutions(true)) {
      const auto g = fock::grassmannian_point(s, params);
      json table = json::array();
      for (const auto& row : g.d) table.push_back(report::complex_list(row));
      const auto kappa = xxz::kappa_matrix(s, params);
      const double e = relative_difference(fock::lemma4_vev(x, kappa),
                                           grasskp::evaluate_expansion(grasskp::cauchy_binet_expand(kappa), x));
      ok = ok && e < tol;
      list.push_back({{"solution", solution_entry(s)},
                      {"c_empty", report::complex_entry(g.c_empty)},
                      {"d_table", table},
                      {"vev_consistency", report::real_entry(e)}});
    }
    results["points"] = list;
    verdict("vev_consistency", ok);
  }
};

// ---------------------------------------------------------------------------
// Exact identity suite over seeded random rationals.

struct IdentitySuite {
  std::mt19937_64 rng;
  json checks = json::object();
  bool all = true;

  explicit IdentitySuite(std::uint64_t seed) : rng(seed) {}

  Rational rational() {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    return Rational(num(rng), den(rng));
  }

  std::vector<Rational> distinct(int n) {
    std::vector<Rational> v;
    while (static_cast<int>(v.size()) < n) {
      Rational r = rational();
      if (std::find(v.begin(), v.end(), r) == v.end()) v.push_back(r);
    }
    return v;
  }

  void record(const std::string& name, int instances, bool ok) {
    checks[name] = {{"instances", instances}, {"pass", ok}};
    all = all && ok;
  }

  void run() {
    using symcore::gen_complete;
    {
      bool ok = true;
      int count = 0;
      for (int n = 1; n <= 5; ++n) {
        const auto x = distinct(n);
        for (int i = 0; i <= 8; ++i)
          for (int m = 0; m < n; ++m) {
            auto hat = x;
            hat.erase(hat.begin() + m);
            ok = ok && gen_complete(hat, i) + x[static_cast<std::size_t>(m)] * gen_complete(x, i - 1) == gen_complete(x, i);
            ++count;
          }
      }
      record("i1", count, ok);
    }
    {
      bool ok = true;
      int count = 0;
      for (int n = 2; n <= 5; ++n) {
        const auto x = distinct(n);
        for (int i = 0; i <= 8; ++i)
          for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
              auto hl = x, hm = x;
              hl.erase(hl.begin() + l);
              hm.erase(hm.begin() + m);
              ok = ok && gen_complete(hl, i) - gen_complete(hm, i) ==
                             (x[static_cast<std::size_t>(m)] - x[static_cast<std::size_t>(l)]) * gen_complete(x, i - 1);
              ++count;
            }
      }
      record("i2", count, ok);
    }
    {
      bool ok = true;
      int count = 0;
      const auto x = distinct(3);
      const auto t = symcore::times_from_powersums(x, 9);
      for (const auto& lam : partitions_in_box(3, 3)) {
        ok = ok && symcore::char_partition(t, lam) == symcore::schur_jacobi_trudi(x, lam);
        ++count;
      }
      record("character_restriction", count, ok);
    }
    {
      bool ok = true;
      int count = 0;
      const auto x = distinct(3);
      for (const auto& lam : partitions_in_box(3, 4)) {
        ok = ok && symcore::schur_bialternant(x, lam) == symcore::schur_jacobi_trudi(x, lam);
        ++count;
      }
      record("bialternant_jacobi_trudi", count, ok);
    }
    {
      bool jt = true, cb = true, plucker = true;
      int count = 0;
      for (int n = 1; n <= 4; ++n)
        for (int m = 1; m <= 5; ++m) {
          grasskp::KappaMatrix<Rational> k(n, m);
          for (int r = 0; r < k.rows(); ++r)
            for (int c = 0; c < n; ++c) k(r, c) = rational();
          const auto x = distinct(n);
          const Rational rhs = grasskp::jt_rhs(x, k);
          jt = jt && grasskp::jt_lhs(x, k) == rhs;
          const auto e = grasskp::cauchy_binet_expand(k);
          cb = cb && grasskp::evaluate_expansion(e, x) == rhs;
          plucker = plucker && grasskp::tau_check(e).is_tau;
          ++count;
        }
      record("jacobi_trudi_type", count, jt);
      record("cauchy_binet", count, cb);
      record("plucker_of_minors", count, plucker);
    }
    {
      // Yang-Baxter with variables (e^lambda, e^mu, e^nu, e^gamma).
      const auto r12 = aba::laurent_r_matrix(4, 0, 1, 3);
      const auto r13 = aba::laurent_r_matrix(4, 0, 2, 3);
      const auto r23 = aba::laurent_r_matrix(4, 1, 2, 3);
      const auto d = aba::yang_baxter_difference(r12, r13, r23);
      bool ok = std::all_of(d.data().begin(), d.data().end(), [](const auto& p) { return p.is_zero(); });
      record("yang_baxter_exact", 1, ok);
    }
    {
      bool ok = true;
      for (int m = 1; m <= 2; ++m) {
        const auto d = aba::laurent_intertwining_difference(m);
        ok = ok && std::all_of(d.data().begin(), d.data().end(), [](const auto& p) { return p.is_zero(); });
      }
      record("intertwining_exact", 2, ok);
    }
  }
};

template <unsigned Bits>
void dispatch(Command command, const RunConfig& cfg, const RunOptions& opt, json& out, int& code) {
  Runner<Bits> r(cfg, opt);
  try {
    switch (command) {
      case Command::BetheSolve: r.bethe_solve(); break;
      case Command::ScalarProduct: r.scalar_product(); break;
      case Command::TauCheck: r.tau_check(); break;
      case Command::Dwpf: r.dwpf(); break;
      case Command::FermionVev: r.fermion_vev(); break;
      case Command::GrassmannPoint: r.grassmann_point(); break;
      case Command::IdentityCheck: break;
    }
  } catch (const Error&) {
    out["results"] = r.results;
    throw;
  }
  out["results"] = r.results;
  out["verdicts"] = r.verdicts;
  code = r.exit_code;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  for (const auto& [n, c] : command_table())
    if (n == name) return c;
  return std::nullopt;
}

std::string command_name(Command c) {
  for (const auto& [n, cc] : command_table())
    if (cc == c) return n;
  return "unknown";
}

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& [n, c] : command_table()) out.push_back(n);
  return out;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
  RunConfig c;
  c.raw = doc;
  c.M = get_int(doc, "M");
  c.N = get_int(doc, "N");
  if (c.M < 1) throw Error(ErrorKind::InvalidInput, "M must be >= 1");
  if (c.N < 1 || c.N > c.M) throw Error(ErrorKind::InvalidInput, "need 1 <= N <= M");
  if (!doc.contains("q")) throw Error(ErrorKind::InvalidInput, "missing field 'q'");
  c.q = scalar_text(doc["q"], "q");
  c.z = scalar_list(doc, "z");
  if (static_cast<int>(c.z.size()) != c.M) throw Error(ErrorKind::InvalidInput, "'z' must list exactly M values");
  c.precision_bits = get_int(doc, "precision_bits", 128);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      throw Error(ErrorKind::InvalidInput, "'seed' must be a nonnegative integer");
    if (doc["seed"].is_number_integer() && doc["seed"].get<long long>() < 0)
      throw Error(ErrorKind::InvalidInput, "'seed' must be a nonnegative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tolerances")) {
    if (!doc["tolerances"].is_object()) throw Error(ErrorKind::InvalidInput, "'tolerances' must be an object");
    for (const auto& [k, v] : doc["tolerances"].items()) {
      if (!v.is_number() || v.get<double>() <= 0) throw Error(ErrorKind::InvalidInput, "tolerance '" + k + "' must be positive");
      c.tolerances[k] = v.get<double>();
    }
  }
  c.x = scalar_list(doc, "x");
  c.num_solutions = get_int(doc, "num_solutions", 1);
  if (c.num_solutions < 1) throw Error(ErrorKind::InvalidInput, "num_solutions must be >= 1");
  return c;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::DegenerateInput:
    case ErrorKind::InsufficientTimes:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::SizeLimit: return kInputError;
    case ErrorKind::NoConvergence: return kNoConvergence;
    case ErrorKind::NotSymmetric:
    case ErrorKind::SumRuleViolation:
    case ErrorKind::ZeroState:
    case ErrorKind::EmptyCoefficientZero: return kMathFailure;
  }
  return kMathFailure;
}

RunResult run(Command command, const json& config_doc, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  json& rep = res.report;
  rep["schema"] = kSchema;
  rep["version"] = kVersion;
  rep["command"] = command_name(command);
  rep["config"] = config_doc;
  json o = json::object();
  if (options.perturb) o["perturb"] = *options.perturb;
  if (options.precision_bits) o["precision"] = *options.precision_bits;
  if (options.seed) o["seed"] = *options.seed;
  rep["options"] = o;
  try {
    RunConfig cfg = parse_config(config_doc);
    if (options.precision_bits) cfg.precision_bits = *options.precision_bits;
    if (options.seed) cfg.seed = *options.seed;
    if (options.perturb && (!std::isfinite(*options.perturb) || *options.perturb < 0))
      throw Error(ErrorKind::InvalidInput, "--perturb must be a nonnegative number");
    if (options.perturb && command != Command::TauCheck)
      throw Error(ErrorKind::InvalidInput, "--perturb applies only to tau-check");
    rep["precision_bits"] = cfg.precision_bits;
    rep["seed"] = cfg.seed;
    if (command == Command::IdentityCheck) {
      IdentitySuite suite(cfg.seed);
      suite.run();
      rep["results"] = suite.checks;
      rep["verdicts"] = {{"exact_identities", suite.all}};
      res.exit_code = suite.all ? kPass : kMathFailure;
    } else if (cfg.precision_bits == 128) {
      dispatch<128>(command, cfg, options, rep, res.exit_code);
    } else if (cfg.precision_bits == 256) {
      dispatch<256>(command, cfg, options, rep, res.exit_code);
    } else {
      throw Error(ErrorKind::InvalidInput, "precision_bits must be 128 or 256");
    }
  } catch (const Error& e) {
    res.exit_code = exit_code_for(e.kind());
    rep["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  } catch (const std::exception& e) {
    res.exit_code = kInputError;
    rep["error"] = {{"kind", "InvalidInput"}, {"message", e.what()}};
  }
  rep["passed"] = res.exit_code == kPass;
  rep["exit_code"] = res.exit_code;
  rep["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

}  // namespace taubethe::cli
