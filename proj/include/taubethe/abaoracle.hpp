#pragma once

// Brute-force algebraic Bethe ansatz on (C^2)^{tensor M}. Everything here
// works in additive variables with [u] = e^u - e^{-u}; it shares no code
// with the Slavnov / kappa routes beyond the scalar types.
//
// Basis conventions: a state index is an M-bit integer, site 1 is the most
// significant bit, bit value 0 is spin up. |0> is index 0, |1> the all-down
// state. Auxiliary spaces carry the same 0 = up convention.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "taubethe/chain.hpp"
#include "taubethe/grasskp.hpp"
#include "taubethe/matrix.hpp"
#include "taubethe/polynomial.hpp"

namespace taubethe::aba {

inline constexpr int kDenseLimit = 8;
inline constexpr int kMaxSites = 12;

/// The three Boltzmann weights of the R-matrix block structure.
template <class T>
struct Weights {
  T a;  // [lambda - mu + gamma]
  T b;  // [lambda - mu]
  T c;  // [gamma]
};

template <class T>
Weights<T> weights(const T& lambda, const T& mu, const T& gamma) {
  return {xxz::bracket(T(lambda - mu + gamma)), xxz::bracket(T(lambda - mu)), xxz::bracket(gamma)};
}

/// 4x4 matrix on V_a (x) V_b, row/column index 2*s_a + s_b.
template <class T>
Matrix<T> r_matrix(const Weights<T>& w) {
  Matrix<T> r(4, 4);
  r(0, 0) = w.a;
  r(3, 3) = w.a;
  r(1, 1) = w.b;
  r(2, 2) = w.b;
  r(1, 2) = w.c;
  r(2, 1) = w.c;
  return r;
}

template <class T>
Matrix<T> r_matrix(const T& lambda, const T& mu, const T& gamma) {
  return r_matrix(weights(lambda, mu, gamma));
}

/// Lifts a two-site operator acting on (site_i, site_j) to n sites.
template <class T>
Matrix<T> embed(const Matrix<T>& op, int site_i, int site_j, int n_sites) {
  const std::size_t dim = std::size_t{1} << n_sites;
  const int shift_i = n_sites - 1 - site_i;
  const int shift_j = n_sites - 1 - site_j;
  Matrix<T> out(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t ci = (col >> shift_i) & 1u;
    const std::size_t cj = (col >> shift_j) & 1u;
    const std::size_t rest = col & ~((std::size_t{1} << shift_i) | (std::size_t{1} << shift_j));
    for (std::size_t ri = 0; ri < 2; ++ri) {
      for (std::size_t rj = 0; rj < 2; ++rj) {
        const T& v = op(2 * ri + rj, 2 * ci + cj);
        if (ScalarTraits<T>::is_zero(v)) continue;
        out(rest | (ri << shift_i) | (rj << shift_j), col) = v;
      }
    }
  }
  return out;
}

template <class T>
double max_norm(const Matrix<T>& m) {
  double r = 0.0;
  for (const auto& v : m.data()) r = std::max(r, magnitude(v));
  return r;
}

/// R12 R13 R23 - R23 R13 R12 on three sites.
template <class T>
Matrix<T> yang_baxter_difference(const Matrix<T>& r12, const Matrix<T>& r13, const Matrix<T>& r23) {
  const auto a12 = embed(r12, 0, 1, 3);
  const auto a13 = embed(r13, 0, 2, 3);
  const auto a23 = embed(r23, 1, 2, 3);
  return a12 * a13 * a23 - a23 * a13 * a12;
}

/// Max-norm of the Yang-Baxter difference relative to the norm of one side.
template <class T>
double yang_baxter_residual(const T& lambda, const T& mu, const T& nu, const T& gamma) {
  const auto r12 = r_matrix(lambda, mu, gamma);
  const auto r13 = r_matrix(lambda, nu, gamma);
  const auto r23 = r_matrix(mu, nu, gamma);
  const auto lhs = embed(r12, 0, 1, 3) * embed(r13, 0, 2, 3) * embed(r23, 1, 2, 3);
  const double scale = max_norm(lhs);
  const double diff = max_norm(yang_baxter_difference(r12, r13, r23));
  return scale == 0.0 ? diff : diff / scale;
}

// ---------------------------------------------------------------------------
// Exact Laurent-polynomial weights. Each additive argument u is a linear
// combination of the formal exponentials; [u] = e^u - e^{-u} becomes a
// two-term Laurent polynomial.

using LaurentPoly = MultivariatePolynomial<Rational>;

/// e^{sum_v coeff_v * u_v} - e^{-...} for an integer linear form.
inline LaurentPoly laurent_bracket(const std::vector<int>& linear_form) {
  LaurentPoly p(linear_form.size());
  std::vector<int> neg(linear_form.size());
  for (std::size_t i = 0; i < linear_form.size(); ++i) neg[i] = -linear_form[i];
  p.add_term(linear_form, Rational(1));
  p.add_term(neg, Rational(-1));
  return p;
}

/// Weights of R(u_l, u_r) with variables indexed by position in a vector of
/// num_vars formal exponentials; `gamma_var` is the index of e^gamma.
inline Weights<LaurentPoly> laurent_weights(std::size_t num_vars, std::size_t left, std::size_t right,
                                            std::size_t gamma_var) {
  std::vector<int> diff(num_vars, 0);
  diff[left] += 1;
  diff[right] -= 1;
  auto shifted = diff;
  shifted[gamma_var] += 1;
  std::vector<int> g(num_vars, 0);
  g[gamma_var] = 1;
  return {laurent_bracket(shifted), laurent_bracket(diff), laurent_bracket(g)};
}

inline Matrix<LaurentPoly> laurent_r_matrix(std::size_t num_vars, std::size_t left, std::size_t right,
                                            std::size_t gamma_var) {
  return r_matrix(laurent_weights(num_vars, left, right, gamma_var));
}

// ---------------------------------------------------------------------------
// Monodromy matrix as a full operator on auxiliary spaces (x) chain.
// Used for the intertwining relation, where auxiliary spaces must be explicit.

/// T_aux(lambda) = L_{aux,1} ... L_{aux,M} on `n_sites` sites; chain sites are
/// chain_first .. chain_first + M - 1. `site_weights[k]` are the weights of L_{aux,k+1}.
template <class T>
Matrix<T> monodromy_full(const std::vector<Weights<T>>& site_weights, int aux, int chain_first, int n_sites) {
  const std::size_t dim = std::size_t{1} << n_sites;
  Matrix<T> t = Matrix<T>::identity(dim);
  for (std::size_t k = 0; k < site_weights.size(); ++k)
    t = t * embed(r_matrix(site_weights[k]), aux, chain_first + static_cast<int>(k), n_sites);
  return t;
}

/// R_ab(lambda, mu) T_a(lambda) T_b(mu) - T_b(mu) T_a(lambda) R_ab(lambda, mu)
/// with a = site 0, b = site 1 and the chain on sites 2..M+1.
template <class T>
Matrix<T> intertwining_difference(const Weights<T>& r_ab, const std::vector<Weights<T>>& ta,
                                  const std::vector<Weights<T>>& tb) {
  const int m = static_cast<int>(ta.size());
  const int n_sites = m + 2;
  const auto r = embed(r_matrix(r_ab), 0, 1, n_sites);
  const auto a = monodromy_full(ta, 0, 2, n_sites);
  const auto b = monodromy_full(tb, 1, 2, n_sites);
  return r * a * b - b * a * r;
}

template <class C>
std::vector<Weights<C>> site_weights(const C& lambda, const xxz::ChainParams<C>& p) {
  const auto add = xxz::additive_chain(p);
  std::vector<Weights<C>> w;
  for (const auto& nu : add.nu) w.push_back(weights(lambda, nu, add.gamma));
  return w;
}

template <class C>
double intertwining_residual(const C& lambda, const C& mu, const xxz::ChainParams<C>& p) {
  const auto add = xxz::additive_chain(p);
  const auto ta = site_weights(lambda, p);
  const auto tb = site_weights(mu, p);
  const auto diff = intertwining_difference(weights(lambda, mu, add.gamma), ta, tb);
  const int n_sites = p.M + 2;
  const auto lhs = embed(r_matrix(weights(lambda, mu, add.gamma)), 0, 1, n_sites) *
                   monodromy_full(ta, 0, 2, n_sites) * monodromy_full(tb, 1, 2, n_sites);
  const double scale = max_norm(lhs);
  return scale == 0.0 ? max_norm(diff) : max_norm(diff) / scale;
}

/// Intertwining difference for an M-site chain in exact Laurent arithmetic,
/// variables (e^lambda, e^mu, e^nu_1, ..., e^nu_M, e^gamma).
inline Matrix<LaurentPoly> laurent_intertwining_difference(int m) {
  const std::size_t nv = static_cast<std::size_t>(m) + 3;
  const std::size_t g = nv - 1;
  std::vector<Weights<LaurentPoly>> ta, tb;
  for (int k = 0; k < m; ++k) {
    ta.push_back(laurent_weights(nv, 0, static_cast<std::size_t>(k) + 2, g));
    tb.push_back(laurent_weights(nv, 1, static_cast<std::size_t>(k) + 2, g));
  }
  return intertwining_difference(laurent_weights(nv, 0, 1, g), ta, tb);
}

// ---------------------------------------------------------------------------
// Matrix-free action of monodromy entries on chain vectors.

enum class Entry { A, B, C, D };

inline std::pair<int, int> aux_indices(Entry e) {
  switch (e) {
    case Entry::A: return {0, 0};
    case Entry::B: return {0, 1};
    case Entry::C: return {1, 0};
    case Entry::D: return {1, 1};
  }
  return {0, 0};
}

/// <row_a| T(lambda) |col_a> applied to v. L_{aM} acts first.
template <class T>
std::vector<T> apply_entry(Entry e, const std::vector<Weights<T>>& sw, const std::vector<T>& v) {
  const int m = static_cast<int>(sw.size());
  const std::size_t dim = std::size_t{1} << m;
  if (v.size() != dim) throw Error(ErrorKind::DimensionMismatch, "state has wrong dimension");
  const auto [row_a, col_a] = aux_indices(e);
  std::vector<T> up(dim, T(0)), down(dim, T(0));
  (col_a == 0 ? up : down) = v;
  for (int k = m - 1; k >= 0; --k) {
    const auto& w = sw[static_cast<std::size_t>(k)];
    const std::size_t bit = std::size_t{1} << (m - 1 - k);
    std::vector<T> nu(dim, T(0)), nd(dim, T(0));
    for (std::size_t s = 0; s < dim; ++s) {
      if (s & bit) continue;
      const std::size_t t = s | bit;  // site k down
      // (aux, site): (0,0)->a (1,1)->a, (0,1)<->(1,0) via c, diagonal b.
      nu[s] = w.a * up[s];
      nd[t] = w.a * down[t];
      nu[t] = w.b * up[t] + w.c * down[s];
      nd[s] = w.c * up[t] + w.b * down[s];
    }
    up = std::move(nu);
    down = std::move(nd);
  }
  return row_a == 0 ? up : down;
}

template <class T>
std::vector<T> basis_state(int m, std::size_t index) {
  std::vector<T> v(std::size_t{1} << m, T(0));
  v[index] = T(1);
  return v;
}

inline std::size_t all_down_index(int m) { return (std::size_t{1} << m) - 1; }

inline void check_size(int m) {
  if (m > kMaxSites) throw Error(ErrorKind::SizeLimit, "brute force limited to M <= 12");
}

/// Operator on (C^2)^{tensor M}: dense for M <= 8, row-sparse beyond.
template <class T>
class QuantumOperator {
 public:
  explicit QuantumOperator(int m) : m_(m), dim_(std::size_t{1} << m) {
    check_size(m);
    if (dense()) dense_ = Matrix<T>(dim_, dim_);
    else rows_.resize(dim_);
  }

  /// Materializes <row|T|col> by applying it to every basis vector.
  static QuantumOperator from_entry(Entry e, const std::vector<Weights<T>>& sw) {
    QuantumOperator op(static_cast<int>(sw.size()));
    for (std::size_t col = 0; col < op.dim_; ++col) {
      const auto image = apply_entry(e, sw, basis_state<T>(op.m_, col));
      for (std::size_t row = 0; row < op.dim_; ++row)
        if (!ScalarTraits<T>::is_zero(image[row])) op.set(row, col, image[row]);
    }
    return op;
  }

  int sites() const { return m_; }
  std::size_t dim() const { return dim_; }
  bool dense() const { return m_ <= kDenseLimit; }

  T at(std::size_t r, std::size_t c) const {
    if (dense()) return dense_(r, c);
    auto it = rows_[r].find(c);
    return it == rows_[r].end() ? T(0) : it->second;
  }

  void set(std::size_t r, std::size_t c, const T& v) {
    if (dense()) dense_(r, c) = v;
    else if (ScalarTraits<T>::is_zero(v)) rows_[r].erase(c);
    else rows_[r][c] = v;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    std::vector<T> out(dim_, T(0));
    for (std::size_t r = 0; r < dim_; ++r) {
      if (dense()) {
        for (std::size_t c = 0; c < dim_; ++c) out[r] += dense_(r, c) * v[c];
      } else {
        for (const auto& [c, x] : rows_[r]) out[r] += x * v[c];
      }
    }
    return out;
  }

  QuantumOperator operator*(const QuantumOperator& o) const {
    QuantumOperator out(m_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t k = 0; k < dim_; ++k) {
        const T x = at(r, k);
        if (ScalarTraits<T>::is_zero(x)) continue;
        for (std::size_t c = 0; c < dim_; ++c) {
          const T y = o.at(k, c);
          if (!ScalarTraits<T>::is_zero(y)) out.set(r, c, out.at(r, c) + x * y);
        }
      }
    return out;
  }

  QuantumOperator operator-(const QuantumOperator& o) const {
    QuantumOperator out(m_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out.set(r, c, at(r, c) - o.at(r, c));
    return out;
  }

  double max_norm() const {
    double best = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) best = std::max(best, magnitude(at(r, c)));
    return best;
  }

 private:
  int m_;
  std::size_t dim_;
  Matrix<T> dense_;
  std::vector<std::map<std::size_t, T>> rows_;
};

template <class T>
struct MonodromyEntries {
  QuantumOperator<T> A, B, C, D;
};

template <class C>
MonodromyEntries<C> monodromy_entries(const C& lambda, const xxz::ChainParams<C>& p) {
  check_size(p.M);
  const auto sw = site_weights(lambda, p);
  return {QuantumOperator<C>::from_entry(Entry::A, sw), QuantumOperator<C>::from_entry(Entry::B, sw),
          QuantumOperator<C>::from_entry(Entry::C, sw), QuantumOperator<C>::from_entry(Entry::D, sw)};
}

/// Applies entry(args[0]) ... entry(args[n-1]) to v; the last one acts first.
template <class C>
std::vector<C> apply_string(Entry e, const std::vector<C>& args, const xxz::ChainParams<C>& p, std::vector<C> v) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) v = apply_entry(e, site_weights(*it, p), v);
  return v;
}

/// B(mu_1) ... B(mu_N)|0>.
template <class C>
std::vector<C> bethe_state(const std::vector<C>& mu, const xxz::ChainParams<C>& p) {
  check_size(p.M);
  return apply_string(Entry::B, mu, p, basis_state<C>(p.M, 0));
}

/// Relative norm of the part of (A + D)(lambda)|Psi> orthogonal to |Psi>,
/// with |Psi> built from mu_i = (1/2) log y_i.
template <class C>
double bethe_eigenstate_residual(const xxz::BetheSolution<C>& sol, const C& lambda_probe,
                                 const xxz::ChainParams<C>& p) {
  using std::conj;
  const auto psi = bethe_state(xxz::to_additive(sol.y), p);
  const auto sw = site_weights(lambda_probe, p);
  const auto av = apply_entry(Entry::A, sw, psi);
  const auto dv = apply_entry(Entry::D, sw, psi);
  C pp(0), pv(0);
  std::vector<C> v(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    v[i] = av[i] + dv[i];
    pp += conj(psi[i]) * psi[i];
    pv += conj(psi[i]) * v[i];
  }
  if (ScalarTraits<C>::is_zero(pp) || magnitude(pp) < 1e-200) throw Error(ErrorKind::ZeroState, "Bethe vector vanishes");
  const C ratio = pv / pp;
  double vnorm = 0.0, perp = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double a = magnitude(v[i]);
    const double b = magnitude(C(v[i] - ratio * psi[i]));
    vnorm += a * a;
    perp += b * b;
  }
  return vnorm == 0.0 ? 0.0 : std::sqrt(perp / vnorm);
}

/// <0| C(lambda_1)...C(lambda_N) B(mu_1)...B(mu_N) |0>, additive arguments.
template <class C>
C scalar_product_bruteforce(const std::vector<C>& lambda, const std::vector<C>& mu, const xxz::ChainParams<C>& p) {
  check_size(p.M);
  if (lambda.size() != mu.size()) throw Error(ErrorKind::DimensionMismatch, "need as many lambdas as mus");
  const auto ket = apply_string(Entry::C, lambda, p, bethe_state(mu, p));
  return ket[0];
}

/// Brute-force value of the normalized multiplicative scalar product <{x}|{y}>.
template <class C>
C scalar_product_bruteforce_mult(const std::vector<C>& x, const std::vector<C>& y, const xxz::ChainParams<C>& p) {
  return xxz::normalization(x, y, p) * scalar_product_bruteforce(xxz::to_additive(x), xxz::to_additive(y), p);
}

/// <0| C(lambda_1)...C(lambda_N) |1>, requires M = N.
template <class C>
C dwpf_bruteforce(const std::vector<C>& lambda, const xxz::ChainParams<C>& p) {
  if (p.M != static_cast<int>(lambda.size())) throw Error(ErrorKind::DimensionMismatch, "domain wall needs M = N");
  check_size(p.M);
  return apply_string(Entry::C, lambda, p, basis_state<C>(p.M, all_down_index(p.M)))[0];
}

/// <1| B(mu_1)...B(mu_N) |0>, requires M = N.
template <class C>
C dwpf_bruteforce_ket(const std::vector<C>& mu, const xxz::ChainParams<C>& p) {
  if (p.M != static_cast<int>(mu.size())) throw Error(ErrorKind::DimensionMismatch, "domain wall needs M = N");
  return bethe_state(mu, p)[all_down_index(p.M)];
}

/// <{x}|{y}> of the brute-force oracle as a polynomial in x (degree <= M-1 in
/// each variable), recovered by a DFT over an M^N grid of roots of unity.
template <class C>
MultivariatePolynomial<C> scalar_product_polynomial_bruteforce(const std::vector<C>& y, const xxz::ChainParams<C>& p) {
  using R = typename ScalarTraits<C>::Real;
  const int n = static_cast<int>(y.size());
  const int m = p.M;
  const R pi = boost::math::constants::pi<R>();
  std::vector<C> omega(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const R angle = R(2) * pi * R(k) / R(m);
    omega[static_cast<std::size_t>(k)] = C(cos(angle), sin(angle));
  }
  std::size_t grid = 1;
  for (int i = 0; i < n; ++i) grid *= static_cast<std::size_t>(m);

  std::vector<C> values(grid);
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (std::size_t g = 0; g < grid; ++g) {
    std::size_t rem = g;
    std::vector<C> x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % static_cast<std::size_t>(m));
      rem /= static_cast<std::size_t>(m);
      x[static_cast<std::size_t>(i)] = omega[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    }
    values[g] = scalar_product_bruteforce_mult(x, y, p);
  }

  MultivariatePolynomial<C> out(static_cast<std::size_t>(n));
  const C inv_grid = C(1) / C(static_cast<double>(grid));
  for (std::size_t e = 0; e < grid; ++e) {
    std::vector<int> expo(static_cast<std::size_t>(n));
    std::size_t rem = e;
    for (int i = n - 1; i >= 0; --i) {
      expo[static_cast<std::size_t>(i)] = static_cast<int>(rem % static_cast<std::size_t>(m));
      rem /= static_cast<std::size_t>(m);
    }
    C acc(0);
    for (std::size_t g = 0; g < grid; ++g) {
      std::size_t r2 = g;
      int phase = 0;
      for (int i = n - 1; i >= 0; --i) {
        phase += static_cast<int>(r2 % static_cast<std::size_t>(m)) * expo[static_cast<std::size_t>(i)];
        r2 /= static_cast<std::size_t>(m);
      }
      acc += values[g] * omega[static_cast<std::size_t>((m - phase % m) % m)];
    }
    out.add_term(expo, C(acc * inv_grid));
  }
  return out;
}

/// Schur expansion of the brute-force scalar product in x; y need not be Bethe roots.
template <class C>
grasskp::SchurExpansion<C> scalar_product_expansion_bruteforce(const std::vector<C>& y, const xxz::ChainParams<C>& p) {
  return grasskp::schur_expand_alternant(scalar_product_polynomial_bruteforce(y, p), p.M - 1);
}

}  // namespace taubethe::aba
