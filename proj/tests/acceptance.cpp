#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "taubethe/abaoracle.hpp"
#include "taubethe/fockvev.hpp"
#include "taubethe/symcore.hpp"
#include "taubethe/xxzcore.hpp"
#include "test_common.hpp"

using namespace tbt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Sector {
  int n;
  int m;
};

std::vector<double> emitted_residuals;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

xxz::ChainParams<C> draw_chain(int n, int m, int draw) {
  std::mt19937_64 rng(9000 + 100 * n + 10 * m + draw);
  return random_chain(rng, n, m);
}

xxz::BetheSearch<C> solve_all(const xxz::ChainParams<C>& p, std::uint64_t seed) {
  auto s = xxz::solve_bethe(p, binomial(p.M, p.N), seed);
  for (const auto& sol : s.solutions) emitted_residuals.push_back(sol.residual);
  return s;
}

std::vector<C> offset_points(std::mt19937_64& rng, int n) {
  std::vector<C> x;
  for (int i = 0; i < n; ++i) x.push_back(random_complex(rng) + C(R(1.5 * i)));
  return x;
}

bool all_zero(const Matrix<aba::LaurentPoly>& d) {
  return std::all_of(d.data().begin(), d.data().end(), [](const auto& p) { return p.is_zero(); });
}

void note(Outcome& o, const std::string& s) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += s;
}

std::string sector_name(int n, int m) { return "(" + std::to_string(n) + "," + std::to_string(m) + ")"; }

Outcome criterion_cross_forms() {
  Outcome o;
  double worst = 0.0;
  int solutions = 0;
  for (const Sector s : {Sector{1, 2}, Sector{1, 3}, Sector{2, 3}, Sector{2, 4}, Sector{3, 4}})
    for (int draw = 0; draw < 3; ++draw) {
      const auto p = draw_chain(s.n, s.m, draw);
      const auto search = solve_all(p, static_cast<std::uint64_t>(draw + 1));
      if (search.solutions.empty()) {
        o.pass = false;
        note(o, sector_name(s.n, s.m) + " draw " + std::to_string(draw) + ": no Bethe solution");
        continue;
      }
      std::mt19937_64 rng(77 + draw);
      for (const auto& sol : search.solutions) {
        const auto x = offset_points(rng, s.n);
        const auto lambda = xxz::to_additive(x);
        const C slav = xxz::slavnov_additive(lambda, sol, p);
        const C brute = aba::scalar_product_bruteforce(lambda, xxz::to_additive(sol.y), p);
        const C kappa = xxz::scalar_product_kappa(x, sol, p) / xxz::normalization(x, sol.y, p);
        const double e = std::max({relative_difference(slav, brute), relative_difference(kappa, brute),
                                   relative_difference(kappa, slav)});
        worst = std::max(worst, e);
        if (!(e < 1e-9)) o.pass = false;
        ++solutions;
      }
    }
  note(o, std::to_string(solutions) + " solutions, max rel " + sci(worst) + " (tol 1e-9)");
  return o;
}

Outcome criterion_jacobi_trudi() {
  Outcome o;
  std::mt19937_64 rng(202);
  int instances = 0;
  while (instances < 50) {
    const int n = 1 + instances % 4, m = 1 + (instances / 4) % 5;
    const auto k = random_kappa(rng, n, m);
    const auto x = distinct_rationals(rng, n);
    if (grasskp::jt_lhs(x, k) != grasskp::jt_rhs(x, k)) o.pass = false;
    ++instances;
  }
  int specialised = 0;
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 5; ++m)
      for (const auto& lam : partitions_in_box(n, m - 1)) {
        grasskp::KappaMatrix<Rational> k(n, m);
        for (int j = 1; j <= n; ++j) k(lam[j - 1] - j + n, j - 1) = 1;
        const auto x = distinct_rationals(rng, n);
        const Rational s = symcore::schur_bialternant(x, lam);
        if (grasskp::jt_lhs(x, k) != s || grasskp::jt_rhs(x, k) != s) o.pass = false;
        ++specialised;
      }
  note(o, std::to_string(instances) + " random + " + std::to_string(specialised) + " Jacobi-Trudi instances, exact");
  return o;
}

Outcome criterion_tau() {
  Outcome o;
  double worst_tau = 0.0, weakest_violation = 1e300;
  int solutions = 0, trials = 0, weak = 0;
  for (const Sector s : {Sector{2, 3}, Sector{2, 4}, Sector{3, 4}}) {
    const auto p = draw_chain(s.n, s.m, 0);
    const auto search = solve_all(p, 1);
    if (search.solutions.empty()) {
      o.pass = false;
      note(o, sector_name(s.n, s.m) + ": no Bethe solution");
      continue;
    }
    std::mt19937_64 rng(303 + s.m);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    for (const auto& sol : search.solutions) {
      const auto v = grasskp::tau_check(xxz::scalar_product_tau_expansion(sol, p), 1e-8);
      worst_tau = std::max(worst_tau, v.max_relative_residual);
      if (!v.is_tau) o.pass = false;
      ++solutions;
      for (int t = 0; t < 3; ++t) {
        std::vector<C> y;
        for (const auto& r : sol.y) {
          const double a = phase(rng);
          y.push_back(r * (C(1) + C(R(1e-2 * std::cos(a)), R(1e-2 * std::sin(a)))));
        }
        const auto pv = grasskp::tau_check(aba::scalar_product_expansion_bruteforce(y, p), 1e-8);
        weakest_violation = std::min(weakest_violation, pv.max_relative_residual);
        if (!(pv.max_relative_residual > 1e-3)) {
          o.pass = false;
          ++weak;
        }
        ++trials;
      }
    }
  }
  note(o, std::to_string(solutions) + " solutions, max tau residual " + sci(worst_tau) + " (tol 1e-8)");
  note(o, std::to_string(trials) + " perturbed trials, weakest violation " + sci(weakest_violation) + " (need > 1e-3), " +
              std::to_string(weak) + " below");
  return o;
}

Outcome criterion_dwpf() {
  Outcome o;
  double worst = 0.0;
  int solutions = 0;
  for (int n = 1; n <= 3; ++n) {
    const auto p = draw_chain(n, n, 0);
    const auto search = solve_all(p, 1);
    if (search.solutions.empty()) {
      o.pass = false;
      note(o, "N=M=" + std::to_string(n) + ": no Bethe solution");
      continue;
    }
    std::mt19937_64 rng(404 + n);
    for (const auto& sol : search.solutions) {
      const auto f = xxz::dwpf_factorization(offset_points(rng, n), sol, p);
      const double e = relative_difference(f.lhs, f.rhs);
      worst = std::max(worst, e);
      if (!(e < 1e-9)) o.pass = false;
      ++solutions;
    }
  }
  note(o, std::to_string(solutions) + " solutions, max rel " + sci(worst) + " (tol 1e-9)");
  return o;
}

Outcome criterion_fermions() {
  Outcome o;
  std::mt19937_64 rng(505);
  std::vector<Rational> tv;
  for (int i = 0; i < 8; ++i) tv.push_back(random_rational(rng));
  const symcore::TimeVector<Rational> t(tv);
  const auto x = distinct_rationals(rng, 4);
  int states = 0;
  for (int n = 0; n <= 8; ++n)
    for (const auto& lam : partitions_of(n)) {
      const auto v = fock::FockVector<Rational>::basis(fock::MayaState::from_partition(lam));
      if (fock::vev_character(t, v) != symcore::char_partition(t, lam)) o.pass = false;
      if (fock::vev_character(x, v) != symcore::schur_jacobi_trudi(x, lam)) o.pass = false;
      ++states;
    }
  int kappas = 0;
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 4; ++m)
      for (int draw = 0; draw < 2; ++draw) {
        const auto k = random_kappa(rng, n, m);
        const auto e = grasskp::cauchy_binet_expand(k);
        if (e.coefficient(Partition()) == 0) continue;
        const auto xr = distinct_rationals(rng, n);
        if (fock::lemma4_vev(xr, k) != grasskp::evaluate_expansion(e, xr)) o.pass = false;
        ++kappas;
      }
  double worst = 0.0;
  int solutions = 0;
  for (int draw = 0; draw < 3; ++draw) {
    const auto p = draw_chain(2, 3, draw);
    const auto search = solve_all(p, 1);
    if (search.solutions.empty()) {
      o.pass = false;
      note(o, "(2,3) draw " + std::to_string(draw) + ": no Bethe solution");
      continue;
    }
    for (const auto& sol : search.solutions) {
      const auto xc = offset_points(rng, 2);
      const C full = xxz::kappa_prefactor(sol, p) * fock::lemma4_vev(xc, xxz::kappa_matrix(sol, p));
      const double e = std::max(relative_difference(full, aba::scalar_product_bruteforce_mult(xc, sol.y, p)),
                                relative_difference(full, xxz::scalar_product_kappa(xc, sol, p)));
      worst = std::max(worst, e);
      if (!(e < 1e-9)) o.pass = false;
      ++solutions;
    }
  }
  note(o, std::to_string(states) + " partitions exact, " + std::to_string(kappas) + " kappa exact, " +
              std::to_string(solutions) + " solutions max rel " + sci(worst) + " (tol 1e-9)");
  return o;
}

Outcome criterion_structure() {
  Outcome o;
  if (!all_zero(aba::yang_baxter_difference(aba::laurent_r_matrix(4, 0, 1, 3), aba::laurent_r_matrix(4, 0, 2, 3),
                                            aba::laurent_r_matrix(4, 1, 2, 3)))) {
    o.pass = false;
    note(o, "Yang-Baxter not exact");
  }
  for (int m = 1; m <= 2; ++m)
    if (!all_zero(aba::laurent_intertwining_difference(m))) {
      o.pass = false;
      note(o, "intertwining not exact at M=" + std::to_string(m));
    }
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int draw = 0; draw < 3; ++draw) {
    const auto p = draw_chain(1, 3, draw);
    worst = std::max(worst, aba::intertwining_residual(random_complex(rng), random_complex(rng), p));
    worst = std::max(worst, aba::yang_baxter_residual(random_complex(rng), random_complex(rng), random_complex(rng),
                                                      random_complex(rng)));
  }
  if (!(worst < 1e-12)) o.pass = false;
  using symcore::gen_complete;
  int identities = 0;
  for (int n = 1; n <= 5; ++n) {
    const auto x = distinct_rationals(rng, n);
    for (int i = 0; i <= 8; ++i)
      for (int m = 0; m < n; ++m) {
        auto hm = x;
        hm.erase(hm.begin() + m);
        if (gen_complete(hm, i) + x[m] * gen_complete(x, i - 1) != gen_complete(x, i)) o.pass = false;
        for (int l = 0; l < n; ++l) {
          auto hl = x;
          hl.erase(hl.begin() + l);
          if (gen_complete(hl, i) - gen_complete(hm, i) != (x[m] - x[l]) * gen_complete(x, i - 1)) o.pass = false;
          ++identities;
        }
      }
  }
  int restricted = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto x = distinct_rationals(rng, n);
    const auto t = symcore::times_from_powersums(x, 12);
    for (const auto& lam : partitions_in_box(n, 3)) {
      if (symcore::char_partition(t, lam) != symcore::schur_jacobi_trudi(x, lam)) o.pass = false;
      ++restricted;
    }
  }
  note(o, "exact Laurent checks for M<=2, numeric M=3 max " + sci(worst) + " (tol 1e-12), " + std::to_string(identities) +
              " i1/i2 and " + std::to_string(restricted) + " restriction instances exact");
  return o;
}

Outcome criterion_certification() {
  Outcome o;
  std::mt19937_64 rng(707);
  double closed = 0.0;
  for (int draw = 0; draw < 5; ++draw) {
    const auto p = random_chain(rng, 1, 1);
    const auto search = solve_all(p, 1);
    if (search.solutions.size() != 1u) {
      o.pass = false;
      note(o, "N=M=1 solver returned " + std::to_string(search.solutions.size()) + " solutions");
      continue;
    }
    const C expect = -p.z[0] / p.q;
    closed = std::max(closed, relative_difference(search.solutions[0].y[0], expect));
    closed = std::max(closed, xxz::bethe_residual(std::vector<C>{expect}, p));
  }
  if (!(closed < 1e-20)) o.pass = false;
  double worst = 0.0;
  for (double r : emitted_residuals) worst = std::max(worst, r);
  if (!(worst < 1e-20)) o.pass = false;
  note(o, std::to_string(emitted_residuals.size()) + " emitted solutions, max residual " + sci(worst) +
              ", closed form deviation " + sci(closed) + " (tol 1e-20)");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 cross-form scalar products", 60.0, criterion_cross_forms},
      {"2 Jacobi-Trudi-type identity", 30.0, criterion_jacobi_trudi},
      {"3 tau dichotomy", 120.0, criterion_tau},
      {"4 domain-wall factorization", 0.0, criterion_dwpf},
      {"5 boson-fermion and vacuum expectation", 0.0, criterion_fermions},
      {"6 structural exactness", 0.0, criterion_structure},
      {"7 solver certification", 0.0, criterion_certification},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      note(o, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream timing;
    timing.precision(2);
    timing << std::fixed << dt << " s";
    if (c.limit_s > 0) {
      timing << " (limit " << c.limit_s << " s)";
      if (dt > c.limit_s) {
        o.pass = false;
        note(o, "over time limit");
      }
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << o.detail << ", " << timing.str() << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
