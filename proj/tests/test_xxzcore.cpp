#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "taubethe/abaoracle.hpp"
#include "taubethe/xxzcore.hpp"
#include "test_common.hpp"

using namespace tbt;
using namespace taubethe::xxz;

namespace {

/// Entry (i, j) of the multiplicative Omega matrix, evaluated directly.
C omega_direct(const C& x, std::size_t j, const std::vector<C>& y, const ChainParams<C>& p) {
  const C q = p.q, qi = C(1) / p.q;
  C t1(1), t2(1);
  for (const auto& z : p.z) {
    t1 *= (x - z) * (y[j] * q - z * qi);
    t2 *= (x * q - z * qi) * (y[j] - z);
  }
  for (std::size_t l = 0; l < y.size(); ++l) {
    if (l == j) continue;
    t1 *= (x * q - y[l] * qi) * (y[j] * qi - y[l] * q);
    t2 *= (x * qi - y[l] * q) * (y[j] * q - y[l] * qi);
  }
  return (t1 - t2) / (x - y[j]);
}

/// The scalar product straight from det Omega over the Vandermonde factors.
C kappa_direct(const std::vector<C>& x, const std::vector<C>& y, const ChainParams<C>& p) {
  const std::size_t n = x.size();
  Matrix<C> om(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) om(i, j) = omega_direct(x[i], j, y, p);
  C den(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i < j) den *= (x[i] - x[j]) * (y[j] - y[i]);
      if (i != j) den *= y[i] * p.q - y[j] / p.q;
    }
  return power(C(p.q - C(1) / p.q), static_cast<int>(n)) * determinant(om) / den;
}

BetheSearch<C> solve_all(const ChainParams<C>& p, unsigned long long seed = 1) {
  return solve_bethe(p, binomial(p.M, p.N), seed);
}

std::vector<C> random_x(std::mt19937_64& rng, int n) {
  std::vector<C> x;
  for (int i = 0; i < n; ++i) x.push_back(random_complex(rng) + C(R(1.3 * i)));
  return x;
}

ChainParams<C> fixed_chain(int n, int m) {
  std::mt19937_64 rng(1000 + 10 * n + m);
  return random_chain(rng, n, m);
}

}  // namespace

TEST_CASE("bracket") {
  CHECK(bracket(C(0)) == C(0));
  const C q(R("0.7"), R("0.4"));
  const C g = log(q);
  CHECK(relative_difference(bracket(g), C(q - C(1) / q)) < 1e-35);
  const C u(R("0.31"), R("-1.2"));
  CHECK(relative_difference(bracket(u), C(-bracket(C(-u)))) < 1e-35);
}

TEST_CASE("a and d vanish at their zeros") {
  const auto p = fixed_chain(1, 3);
  const auto add = additive_chain(p);
  const double scale = magnitude(d_eval(C(R("0.2")), p));
  CHECK(magnitude(d_eval(add.nu[0], p)) < 1e-35 * scale);
  CHECK(magnitude(a_eval(C(add.nu[1] - add.gamma), p)) < 1e-35 * scale);
}

TEST_CASE("Bethe residual: closed form for N = M = 1") {
  for (int draw = 0; draw < 5; ++draw) {
    auto p = fixed_chain(1, 1);
    std::mt19937_64 rng(draw);
    p.z[0] = random_complex(rng, 0.3, 1.4);
    const std::vector<C> y = {C(-p.z[0] / p.q)};
    CHECK(bethe_residual(y, p) < 1e-35);
    // Additive form: mu = nu + (i pi - gamma) / 2 solves [mu - nu + gamma] = [mu - nu].
    const auto add = additive_chain(p);
    const C mu = add.nu[0] + (C(R(0), boost::math::constants::pi<R>()) - add.gamma) / C(2);
    CHECK(relative_difference(a_eval(mu, p), d_eval(mu, p)) < 1e-30);
  }
}

TEST_CASE("Bethe residual: random points and permutations") {
  std::mt19937_64 rng(5);
  for (int draw = 0; draw < 10; ++draw) {
    const auto p = random_chain(rng, 2, 3);
    std::vector<C> y = {random_complex(rng), random_complex(rng)};
    CHECK(bethe_residual(y, p) > 0.01);
  }
  const auto p = fixed_chain(2, 4);
  const auto s = solve_all(p);
  REQUIRE_FALSE(s.solutions.empty());
  auto y = s.solutions[0].y;
  std::swap(y[0], y[1]);
  CHECK(bethe_residual(y, p) < certification_threshold<C>());
  CHECK(bethe_residual(y, p) == doctest::Approx(bethe_residual(s.solutions[0].y, p)).epsilon(1e-6));
}

TEST_CASE("solver: N = M = 1 recovers the closed form") {
  const auto p = fixed_chain(1, 1);
  const auto s = solve_bethe(p, 1, 3);
  REQUIRE(s.solutions.size() == 1u);
  CHECK(relative_difference(s.solutions[0].y[0], C(-p.z[0] / p.q)) < 1e-30);
  CHECK(s.solutions[0].residual < 1e-20);
}

TEST_CASE("solver: N = 1, M = 2 matches the quadratic") {
  std::mt19937_64 rng(7);
  for (int draw = 0; draw < 3; ++draw) {
    const auto p = random_chain(rng, 1, 2);
    // prod (y q - z/q) - prod (y - z) = a2 y^2 + a1 y + a0.
    const C q = p.q, qi = C(1) / p.q;
    const C a2 = q * q - C(1);
    const C a1 = -(p.z[0] + p.z[1]) * (q * qi) + (p.z[0] + p.z[1]);
    const C a0 = p.z[0] * p.z[1] * (qi * qi - C(1));
    const C disc = sqrt(C(a1 * a1 - C(4) * a2 * a0));
    const std::vector<C> roots = {(-a1 + disc) / (C(2) * a2), (-a1 - disc) / (C(2) * a2)};
    const auto s = solve_bethe(p, 2, 11);
    REQUIRE(s.solutions.size() == 2u);
    CHECK(s.complete);
    for (const auto& sol : s.solutions) {
      double best = 1.0;
      for (const auto& r : roots) best = std::min(best, relative_difference(sol.y[0], r));
      CHECK(best < 1e-30);
    }
  }
}

TEST_CASE("solver: full enumeration and certification on generic sectors") {
  for (auto [n, m] : {std::pair{2, 3}, {2, 4}, {3, 5}, {3, 3}}) {
    const auto p = fixed_chain(n, m);
    const auto s = solve_all(p);
    CAPTURE(n);
    CAPTURE(m);
    CHECK(s.complete);
    CHECK(static_cast<int>(s.solutions.size()) == binomial(m, n));
    for (std::size_t a = 0; a < s.solutions.size(); ++a) {
      CHECK(s.solutions[a].residual < certification_threshold<C>());
      CHECK(bethe_residual(s.solutions[a].y, p) < 1e-20);
      CHECK(aba::bethe_eigenstate_residual(s.solutions[a], C(R("0.3"), R("0.17")), p) < 1e-10);
      for (std::size_t b = a + 1; b < s.solutions.size(); ++b)
        CHECK(xxz::detail::set_distance(s.solutions[a].y, s.solutions[b].y) > 1e-6);
    }
  }
}

TEST_CASE("solver: deterministic for a fixed seed") {
  const auto p = fixed_chain(2, 4);
  const auto a = solve_all(p, 9);
  const auto b = solve_all(p, 9);
  REQUIRE(a.solutions.size() == b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i)
    for (std::size_t k = 0; k < a.solutions[i].y.size(); ++k) CHECK(a.solutions[i].y[k] == b.solutions[i].y[k]);
}

TEST_CASE("solver: sectors with 2N - M = 2 have no isolated finite solutions") {
  // Genuine eigenstates there need roots at 0 and infinity; the finite
  // solutions form a positive-dimensional family where the Bethe vector vanishes.
  for (auto [n, m] : {std::pair{2, 2}, {3, 4}}) {
    const auto p = fixed_chain(n, m);
    const auto s = solve_all(p);
    CAPTURE(n);
    CHECK_FALSE(s.complete);
    CHECK(s.solutions.empty());
    CHECK(s.nonisolated_rejected + s.inadmissible > 0);
  }
}

TEST_CASE("solver: isolated solutions clear the isolation threshold") {
  const auto p = fixed_chain(2, 3);
  for (const auto& sol : solve_all(p).solutions) CHECK(xxz::detail::isolation_ratio(sol.y, p) > isolation_threshold<C>());
}

TEST_CASE("solver: input errors") {
  auto p = fixed_chain(2, 3);
  CHECK_THROWS_AS(solve_bethe(p, 0, 1), Error);
  p.N = 4;
  CHECK_THROWS_AS(solve_bethe(p, 1, 1), Error);
  p.N = 2;
  p.q = C(1);
  CHECK_THROWS_AS(solve_bethe(p, 1, 1), Error);
  p.q = C(2);
  p.z[0] = C(0);
  CHECK_THROWS_AS(solve_bethe(p, 1, 1), Error);
}

TEST_CASE("rho: sum rule, top row and numerator reconstruction") {
  std::mt19937_64 rng(13);
  for (auto [n, m] : {std::pair{1, 1}, {1, 3}, {2, 3}, {3, 4}}) {
    const auto p = random_chain(rng, n, m);
    BetheSolution<C> sol;
    for (int i = 0; i < n; ++i) sol.y.push_back(random_complex(rng) + C(R(1.7 * i)));
    const auto rho = rho_matrix(sol, p);
    REQUIRE(rho.rows() == static_cast<std::size_t>(n + m));
    const C q = p.q, qi = C(1) / q;
    for (int j = 0; j < n; ++j) {
      const C& yj = sol.y[j];
      C sum(0), yp(1);
      double scale = 0.0;
      for (int k = 0; k < n + m; ++k) {
        sum += yp * rho(k, j);
        scale += magnitude(C(yp * rho(k, j)));
        yp *= yj;
      }
      CHECK(magnitude(sum) < 1e-30 * scale);
      C f1(1), f2(1);
      for (const auto& z : p.z) {
        f1 *= yj * q - z * qi;
        f2 *= yj * q - z * q;
      }
      for (int l = 0; l < n; ++l) {
        if (l == j) continue;
        f1 *= yj - sol.y[l] * q * q;
        f2 *= yj - sol.y[l] * qi * qi;
      }
      CHECK(relative_difference(rho(n + m - 1, j), C(f1 - f2)) < 1e-30);
      for (int trial = 0; trial < n + m + 1; ++trial) {
        const C x = random_complex(rng, -2.0, 2.0);
        C poly(0), xp(1);
        for (int k = 0; k < n + m; ++k) {
          poly += xp * rho(k, j);
          xp *= x;
        }
        CHECK(relative_difference(poly, C(omega_direct(x, j, sol.y, p) * (x - yj))) < 1e-28);
      }
    }
  }
}

TEST_CASE("rho: N = M = 1 symbolic expansion") {
  const auto p = fixed_chain(1, 1);
  BetheSolution<C> sol{{C(R("0.4"), R("-0.9"))}};
  const C q = p.q, qi = C(1) / q, z = p.z[0], y = sol.y[0];
  const auto rho = rho_matrix(sol, p);
  CHECK(relative_difference(rho(0, 0), C(-z * (y * q - z * qi) + z * qi * (y - z))) < 1e-30);
  CHECK(relative_difference(rho(1, 0), C((y * q - z * qi) - q * (y - z))) < 1e-30);
  const auto kappa = kappa_from_rho(rho, sol, p);
  const C x(R("1.3"), R("0.2"));
  CHECK(relative_difference(kappa(0, 0), omega_direct(x, 0, sol.y, p)) < 1e-30);
}

TEST_CASE("kappa reproduces Omega and its removable pole") {
  std::mt19937_64 rng(17);
  for (auto [n, m] : {std::pair{1, 2}, {2, 3}, {2, 4}, {3, 5}}) {
    const auto p = fixed_chain(n, m);
    const auto s = solve_all(p);
    REQUIRE_FALSE(s.solutions.empty());
    const auto& sol = s.solutions.front();
    const auto kappa = kappa_matrix(sol, p);
    for (int j = 0; j < n; ++j) {
      for (int trial = 0; trial < 3; ++trial) {
        const C x = random_complex(rng, -2.0, 2.0);
        C v(0), xp(1);
        for (int k = 0; k < kappa.rows(); ++k) {
          v += xp * kappa(k, j);
          xp *= x;
        }
        CHECK(relative_difference(v, omega_direct(x, j, sol.y, p)) < 1e-25);
      }
      // At x = y_j the polynomial is the limit of Omega.
      const C yj = sol.y[j];
      C at(0), yp(1);
      for (int k = 0; k < kappa.rows(); ++k) {
        at += yp * kappa(k, j);
        yp *= yj;
      }
      const C near = omega_direct(C(yj * C(R(1) + R("1e-15"))), j, sol.y, p);
      CHECK(relative_difference(at, near) < 1e-9);
    }
  }
}

TEST_CASE("kappa: sum rule holds off the Bethe locus") {
  std::mt19937_64 rng(19);
  const auto p = random_chain(rng, 2, 3);
  BetheSolution<C> sol{{random_complex(rng), random_complex(rng) + C(2)}};
  CHECK_NOTHROW(kappa_matrix(sol, p));
  auto rho = rho_matrix(sol, p);
  rho(0, 0) += C(1);
  try {
    kappa_from_rho(rho, sol, p);
    FAIL("expected a sum-rule violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SumRuleViolation);
  }
}

TEST_CASE("scalar product: kappa form equals the determinant formula and Slavnov") {
  std::mt19937_64 rng(23);
  for (auto [n, m] : {std::pair{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 5}}) {
    const auto p = fixed_chain(n, m);
    for (const auto& sol : solve_all(p).solutions) {
      const auto x = random_x(rng, n);
      const C k = scalar_product_kappa(x, sol, p);
      CHECK(relative_difference(k, kappa_direct(x, sol.y, p)) < 1e-25);
      CHECK(relative_difference(k, slavnov_normalized(x, sol, p)) < 1e-9);
      CHECK(relative_difference(k, aba::scalar_product_bruteforce_mult(x, sol.y, p)) < 1e-9);
    }
  }
}

TEST_CASE("scalar product: N = 1, M = 2 additive Slavnov equals brute force") {
  const auto p = fixed_chain(1, 2);
  for (const auto& sol : solve_all(p).solutions) {
    const std::vector<C> lam = {C(R("0.21"), R("0.33"))};
    CHECK(relative_difference(slavnov_additive(lam, sol, p), aba::scalar_product_bruteforce(lam, to_additive(sol.y), p)) <
          1e-9);
  }
}

TEST_CASE("scalar product: symmetry and coincident arguments") {
  std::mt19937_64 rng(29);
  const auto p = fixed_chain(2, 3);
  const auto sols = solve_all(p).solutions;
  REQUIRE_FALSE(sols.empty());
  auto x = random_x(rng, 2);
  const auto& sol = sols.front();
  const C v = scalar_product_kappa(x, sol, p);
  auto xs = x;
  std::swap(xs[0], xs[1]);
  CHECK(relative_difference(v, scalar_product_kappa(xs, sol, p)) < 1e-30);
  auto ys = sol;
  std::swap(ys.y[0], ys.y[1]);
  CHECK(relative_difference(v, scalar_product_kappa(x, ys, p)) < 1e-30);
  const auto lam = to_additive(x);
  auto lams = lam;
  std::swap(lams[0], lams[1]);
  CHECK(relative_difference(slavnov_additive(lam, sol, p), slavnov_additive(lams, sol, p)) < 1e-25);

  const std::vector<C> same = {x[0], x[0]};
  const C finite = scalar_product_kappa(same, sol, p);
  CHECK(std::isfinite(magnitude(finite)));
  CHECK_THROWS_AS(slavnov_additive(to_additive(same), sol, p), Error);
  const std::vector<C> nearby = {x[0], C(x[0] * C(R(1) + R("1e-14")))};
  CHECK(relative_difference(finite, scalar_product_kappa(nearby, sol, p)) < 1e-9);
}

TEST_CASE("scalar product: removable poles at x = y") {
  const auto p = fixed_chain(2, 3);
  for (const auto& sol : solve_all(p).solutions) {
    const std::vector<C> at = {sol.y[0], C(R("1.7"), R("0.4"))};
    const std::vector<C> near = {C(sol.y[0] * C(R(1) + R("1e-12"))), at[1]};
    const C k = scalar_product_kappa(at, sol, p);
    CHECK(std::isfinite(magnitude(k)));
    CHECK_THROWS_AS(slavnov_additive(to_additive(at), sol, p), Error);
    CHECK(relative_difference(k, slavnov_normalized(near, sol, p)) < 1e-9);
  }
}

TEST_CASE("scalar product: polynomial of degree N+M-2 in each variable after the Vandermonde") {
  std::mt19937_64 rng(31);
  for (auto [n, m] : {std::pair{2, 3}, {2, 4}, {3, 4}}) {
    const auto p = random_chain(rng, n, m);
    BetheSolution<C> sol;
    // The kappa form is polynomial for any y; use generic points where Bethe roots may not exist.
    for (int i = 0; i < n; ++i) sol.y.push_back(random_complex(rng) + C(R(1.5 * i)));
    const auto base = random_x(rng, n);
    auto f = [&](const C& x1) {
      auto x = base;
      x[0] = x1;
      return scalar_product_kappa(x, sol, p) * symcore::vandermonde(x);
    };
    const int deg = n + m - 2;
    std::vector<C> nodes, values;
    for (int k = 0; k <= deg; ++k) {
      nodes.push_back(C(R(k) / R(3) - R(1), R(k % 3) / R(5)));
      values.push_back(f(nodes.back()));
    }
    const C held(R("0.77"), R("-0.61"));
    C interp(0);
    for (int a = 0; a <= deg; ++a) {
      C l(1);
      for (int b = 0; b <= deg; ++b)
        if (b != a) l *= (held - nodes[b]) / (nodes[a] - nodes[b]);
      interp += values[a] * l;
    }
    CHECK(relative_difference(interp, f(held)) < 1e-25);
  }
}

TEST_CASE("tau expansion: Bethe solutions give tau functions") {
  for (auto [n, m] : {std::pair{1, 3}, {2, 3}, {2, 4}, {3, 5}}) {
    const auto p = fixed_chain(n, m);
    for (const auto& sol : solve_all(p).solutions) {
      const auto v = grasskp::tau_check(scalar_product_tau_expansion(sol, p), 1e-8);
      CHECK(v.is_tau);
    }
  }
}

TEST_CASE("tau expansion: agrees with the brute-force expansion on Bethe roots") {
  const auto p = fixed_chain(2, 3);
  for (const auto& sol : solve_all(p).solutions) {
    const auto k = scalar_product_tau_expansion(sol, p);
    const auto b = aba::scalar_product_expansion_bruteforce(sol.y, p);
    const C pref = kappa_prefactor(sol, p);
    double biggest = 0.0;
    for (const auto& [lam, c] : b.coeffs) biggest = std::max(biggest, magnitude(c));
    for (const auto& [lam, c] : k.coeffs) CHECK(magnitude(C(pref * c - b.coefficient(lam))) < 1e-20 * biggest);
  }
}

TEST_CASE("tau expansion: perturbed roots violate Plucker relations") {
  const auto p = fixed_chain(2, 3);
  std::mt19937_64 rng(37);
  for (const auto& sol : solve_all(p).solutions) {
    auto y = sol.y;
    for (auto& v : y) v *= C(1) + C(R("1e-2")) * random_complex(rng);
    const auto v = grasskp::tau_check(aba::scalar_product_expansion_bruteforce(y, p), 1e-8);
    CHECK_FALSE(v.is_tau);
  }
}

TEST_CASE("domain-wall factorisation") {
  std::mt19937_64 rng(41);
  for (int n : {1, 3}) {
    const auto p = fixed_chain(n, n);
    const auto s = solve_all(p);
    REQUIRE_FALSE(s.solutions.empty());
    const auto x = random_x(rng, n);
    for (const auto& sol : s.solutions) {
      const auto f = dwpf_factorization(x, sol, p);
      CHECK(relative_difference(f.lhs, f.rhs) < 1e-9);
      auto xz = p.z;
      std::reverse(xz.begin(), xz.end());
      const auto g = dwpf_factorization(xz, sol, p);
      const double scale = magnitude(f.rhs) + magnitude(f.lhs);
      CHECK(magnitude(C(g.lhs - g.rhs)) <= 1e-9 * std::max(scale, magnitude(g.lhs) + magnitude(g.rhs)));
    }
  }
  const auto p = fixed_chain(2, 3);
  BetheSolution<C> sol{{C(1), C(2)}};
  CHECK_THROWS_AS(dwpf_factorization(std::vector<C>{C(1), C(2)}, sol, p), Error);
}

TEST_CASE("domain-wall: M = N = 1 closed form") {
  const auto p = fixed_chain(1, 1);
  const auto sol = solve_bethe(p, 1, 1).solutions.at(0);
  const std::vector<C> x = {C(R("0.5"), R("0.5"))};
  const auto f = dwpf_factorization(x, sol, p);
  const C gq = p.q - C(1) / p.q;
  // <0|C(lambda)B(mu)|0> = [gamma]^2 on one site, times the multiplicative normalisation.
  CHECK(relative_difference(f.rhs, C(normalization(x, sol.y, p) * gq * gq)) < 1e-30);
  CHECK(relative_difference(f.lhs, f.rhs) < 1e-9);
}

TEST_CASE("precision: 256-bit solve certifies at the tighter threshold") {
  const auto p128 = fixed_chain(2, 3);
  const auto p = xxz::detail::convert_chain<Complex256>(p128);
  const auto s = solve_bethe(p, 3, 1);
  CHECK(s.complete);
  for (const auto& sol : s.solutions) CHECK(sol.residual < certification_threshold<Complex256>());
}
