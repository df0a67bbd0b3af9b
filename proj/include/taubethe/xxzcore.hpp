#pragma once

// Bethe equations, their numerical solution, and the three determinant forms
// of the Bethe scalar product: Slavnov's additive formula, the multiplicative
// kappa form (singularity-free in x), and the domain-wall factorization.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "taubethe/abaoracle.hpp"
#include "taubethe/chain.hpp"
#include "taubethe/grasskp.hpp"
#include "taubethe/matrix.hpp"
#include "taubethe/symcore.hpp"

namespace taubethe::xxz {

// ---------------------------------------------------------------------------
// Bethe equations in multiplicative form:
//   F_i = prod_k (y_i q - z_k/q) prod_{j!=i} (y_j q - y_i/q)
//         - (-1)^{N-1} prod_k (y_i - z_k) prod_{j!=i} (y_i q - y_j/q).

template <class C>
struct BetheTerms {
  C first;
  C second;
};

template <class C>
BetheTerms<C> bethe_terms(const std::vector<C>& y, const ChainParams<C>& p, std::size_t i) {
  const C qi = C(1) / p.q;
  C t1(1), t2(1);
  for (const auto& z : p.z) {
    t1 *= y[i] * p.q - z * qi;
    t2 *= y[i] - z;
  }
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (j == i) continue;
    t1 *= y[j] * p.q - y[i] * qi;
    t2 *= y[i] * p.q - y[j] * qi;
  }
  if (y.size() % 2 == 0) t2 = -t2;  // (-1)^{N-1} folded in
  return {t1, t2};
}

/// max_i |F_i| / (|first| + |second|).
template <class C>
double bethe_residual(const std::vector<C>& y, const ChainParams<C>& p) {
  double worst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto t = bethe_terms(y, p, i);
    const double scale = magnitude(t.first) + magnitude(t.second);
    const double f = magnitude(C(t.first - t.second));
    worst = std::max(worst, scale == 0.0 ? 0.0 : f / scale);
  }
  return worst;
}

namespace detail {

/// Value and gradient of a product of linear factors alpha_l . y + beta_l,
/// with the gradient from prefix/suffix products (no division).
template <class S>
struct LinearFactor {
  S value;
  std::vector<std::pair<std::size_t, S>> slope;  // (variable, d factor / d y_v)
};

template <class S>
void accumulate_product(const std::vector<LinearFactor<S>>& f, std::size_t n, S sign, S& value, std::vector<S>& grad) {
  const std::size_t L = f.size();
  std::vector<S> prefix(L + 1, S(1)), suffix(L + 1, S(1));
  for (std::size_t l = 0; l < L; ++l) prefix[l + 1] = prefix[l] * f[l].value;
  for (std::size_t l = L; l-- > 0;) suffix[l] = suffix[l + 1] * f[l].value;
  value += sign * prefix[L];
  grad.resize(n, S(0));
  for (std::size_t l = 0; l < L; ++l) {
    const S others = prefix[l] * suffix[l + 1];
    for (const auto& [v, s] : f[l].slope) grad[v] += sign * s * others;
  }
}

/// F(y) and its Jacobian.
template <class S>
void bethe_system(const std::vector<S>& y, const S& q, const std::vector<S>& z, std::vector<S>& f, Matrix<S>& jac) {
  const std::size_t n = y.size();
  const S qi = S(1) / q;
  const S sign2 = (n % 2 == 0) ? S(1) : S(-1);
  f.assign(n, S(0));
  jac = Matrix<S>(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<LinearFactor<S>> a, b;
    for (const auto& zk : z) {
      a.push_back({y[i] * q - zk * qi, {{i, q}}});
      b.push_back({y[i] - zk, {{i, S(1)}}});
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      a.push_back({y[j] * q - y[i] * qi, {{j, q}, {i, S(-qi)}}});
      b.push_back({y[i] * q - y[j] * qi, {{i, q}, {j, S(-qi)}}});
    }
    std::vector<S> grad(n, S(0));
    accumulate_product(a, n, S(1), f[i], grad);
    accumulate_product(b, n, sign2, f[i], grad);
    for (std::size_t v = 0; v < n; ++v) jac(i, v) = grad[v];
  }
}

template <class S>
double norm2(const std::vector<S>& v) {
  double s = 0.0;
  for (const auto& x : v) {
    const double m = magnitude(x);
    s += m * m;
  }
  return s;
}

/// Distance between two root sets up to reordering (max-norm, best permutation).
template <class S>
double set_distance(const std::vector<S>& a, const std::vector<S>& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, magnitude(S(a[i] - b[perm[i]])));
    best = std::min(best, d);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Lexicographic (re, im) order used for roots and for solution lists.
template <class S>
bool lex_less(const S& a, const S& b) {
  using std::imag;
  using std::real;
  if (real(a) != real(b)) return real(a) < real(b);
  return imag(a) < imag(b);
}

template <class S>
void sort_roots(std::vector<S>& y) {
  std::sort(y.begin(), y.end(), [](const S& a, const S& b) { return lex_less(a, b); });
}

template <class To, class From>
ChainParams<To> convert_chain(const ChainParams<From>& p) {
  ChainParams<To> out;
  out.M = p.M;
  out.N = p.N;
  out.q = convert_complex<To>(p.q);
  for (const auto& z : p.z) out.z.push_back(convert_complex<To>(z));
  return out;
}

template <class To, class From>
std::vector<To> convert_vector(const std::vector<From>& v) {
  std::vector<To> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(convert_complex<To>(x));
  return out;
}

/// Directional derivative along `step` of log m, m(y) = prod_r (||y - r||^{-2} + 1),
/// the Farrell deflation factor of the known roots r.
inline double deflation_dlog(const std::vector<ComplexD>& y, const std::vector<ComplexD>& step,
                             const std::vector<std::vector<ComplexD>>& deflated) {
  double dlog = 0.0;
  for (const auto& r : deflated) {
    double dist2 = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const ComplexD d = y[i] - r[i];
      dist2 += std::norm(d);
      dot += std::real(std::conj(d) * step[i]);
    }
    if (dist2 == 0.0) continue;
    const double inv = 1.0 / dist2;
    dlog += (-2.0 * dot * inv * inv) / (inv + 1.0);
  }
  return dlog;
}

/// log(first / second) - log_twist per equation, wrapped to the principal
/// strip, and its Jacobian in the variables u = log y.
inline void log_bethe_system(const std::vector<ComplexD>& y, const ChainParams<ComplexD>& p, std::vector<ComplexD>& g,
                             Matrix<ComplexD>& jac, ComplexD log_twist = 0.0) {
  const std::size_t n = y.size();
  const ComplexD q = p.q, qi = 1.0 / p.q;
  g.assign(n, 0.0);
  jac = Matrix<ComplexD>(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& z : p.z) {
      const ComplexD a = y[i] * q - z * qi, b = y[i] - z;
      g[i] += std::log(a) - std::log(b);
      jac(i, i) += y[i] * q / a - y[i] / b;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const ComplexD c1 = y[j] * q - y[i] * qi, c2 = y[i] * q - y[j] * qi;
      g[i] += std::log(c1) - std::log(c2);
      jac(i, j) += y[j] * q / c1 + y[j] * qi / c2;
      jac(i, i) -= y[i] * qi / c1 + y[i] * q / c2;
    }
    if (n % 2 == 0) g[i] -= ComplexD(0.0, M_PI);
    g[i] -= log_twist;
    const double im = std::remainder(g[i].imag(), 2.0 * M_PI);
    g[i] = ComplexD(g[i].real(), im);
  }
}

inline double max_abs(const std::vector<ComplexD>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return std::isfinite(m) ? m : INFINITY;
}

/// Damped Newton on the logarithmic form in double precision, with optional
/// deflation of known roots.
inline bool newton_double(std::vector<ComplexD>& y, const ChainParams<ComplexD>& p,
                          const std::vector<std::vector<ComplexD>>& deflated, int max_iter, double target) {
  std::vector<ComplexD> g, trial_g;
  Matrix<ComplexD> jac, unused;
  for (int it = 0; it < max_iter; ++it) {
    log_bethe_system(y, p, g, jac);
    const double gn = max_abs(g);
    if (!std::isfinite(gn)) return false;
    if (gn < target) return true;
    std::vector<ComplexD> rhs(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = -g[i];
    std::vector<ComplexD> step;
    try {
      step = solve_linear(jac, rhs);
    } catch (const Error&) {
      return false;
    }
    std::vector<ComplexD> dy(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) dy[i] = y[i] * step[i];
    const double denom = 1.0 - deflation_dlog(y, dy, deflated);
    const double tau = std::abs(denom) < 1e-12 ? 1.0 : 1.0 / denom;
    double alpha = tau;
    std::vector<ComplexD> trial;
    for (int ls = 0; ls < 12; ++ls) {
      trial = y;
      for (std::size_t i = 0; i < y.size(); ++i) trial[i] *= std::exp(alpha * step[i]);
      log_bethe_system(trial, p, trial_g, unused);
      if (max_abs(trial_g) < gn) break;
      alpha *= 0.5;
    }
    y = std::move(trial);
  }
  log_bethe_system(y, p, g, jac);
  return max_abs(g) < target;
}

/// Roots of sum_k c_k t^k (Durand-Kerner), trailing zero leading terms dropped.
inline std::vector<ComplexD> polynomial_roots(std::vector<ComplexD> c) {
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= 1e-13 * scale) c.pop_back();
  if (c.size() < 2) return {};
  const std::size_t deg = c.size() - 1;
  const ComplexD lead = c.back();
  for (auto& v : c) v /= lead;
  auto eval = [&c](ComplexD t) {
    ComplexD r = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) r = r * t + c[k];
    return r;
  };
  double radius = 0.0;
  for (std::size_t k = 0; k < deg; ++k) radius = std::max(radius, std::abs(c[k]));
  radius = 1.0 + radius;
  std::vector<ComplexD> r(deg);
  for (std::size_t k = 0; k < deg; ++k) r[k] = std::polar(0.5 * radius, 0.4 + 2.0 * M_PI * k / deg);
  for (int it = 0; it < 1000; ++it) {
    double moved = 0.0;
    for (std::size_t k = 0; k < deg; ++k) {
      ComplexD den = 1.0;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != k) den *= r[k] - r[j];
      const ComplexD d = eval(r[k]) / den;
      r[k] -= d;
      moved = std::max(moved, std::abs(d) / (1.0 + std::abs(r[k])));
    }
    if (moved < 1e-15) break;
  }
  return r;
}

/// Homotopy from the twisted free-fermion point (q = i, twist e^{w}) to the
/// target q without twist.
struct HomotopyPath {
  ComplexD target;
  ComplexD bend;
  ComplexD twist;
  ComplexD at(double s) const { return ComplexD(0.0, 1.0) + (target - ComplexD(0.0, 1.0)) * s + bend * s * (1.0 - s); }
  ComplexD log_twist(double s) const { return (1.0 - s) * twist; }
};

/// At q = i the equations decouple: every root solves the one-particle
/// equation prod (y q - z/q) = e^{w} (-1)^{N-1} prod (y - z). Returns its roots.
inline std::vector<ComplexD> free_fermion_roots(const ChainParams<ComplexD>& p, ComplexD twist) {
  const ComplexD q(0.0, 1.0), qi = 1.0 / q;
  std::vector<ComplexD> a{1.0}, b{1.0};
  auto times_linear = [](std::vector<ComplexD>& poly, ComplexD slope, ComplexD offset) {
    std::vector<ComplexD> out(poly.size() + 1, 0.0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      out[k] += poly[k] * offset;
      out[k + 1] += poly[k] * slope;
    }
    poly = std::move(out);
  };
  for (const auto& z : p.z) {
    times_linear(a, q, -z * qi);
    times_linear(b, 1.0, -z);
  }
  const ComplexD factor = std::exp(twist) * ((p.N % 2 == 0) ? -1.0 : 1.0);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= factor * b[k];
  return polynomial_roots(a);
}

/// Tracks roots from s = 0 to s = 1 with an Euler predictor and Newton
/// corrector in u = log y; empty when the path diverges to 0 or infinity.
inline std::optional<std::vector<ComplexD>> track_path(std::vector<ComplexD> y, const ChainParams<ComplexD>& base,
                                                        const HomotopyPath& path) {
  auto params_at = [&base, &path](double s) {
    ChainParams<ComplexD> p = base;
    p.q = path.at(s);
    return p;
  };
  std::vector<ComplexD> g, gp, gm;
  Matrix<ComplexD> jac, unused;
  double s = 0.0, ds = 0.02;
  while (s < 1.0) {
    ds = std::min(ds, 1.0 - s);
    if (ds < 1e-9) return std::nullopt;
    const double h = 1e-6, sp = std::min(s + h, 1.0), sm = std::max(s - h, 0.0);
    log_bethe_system(y, params_at(sp), gp, unused, path.log_twist(sp));
    log_bethe_system(y, params_at(sm), gm, unused, path.log_twist(sm));
    log_bethe_system(y, params_at(s), g, jac, path.log_twist(s));
    std::vector<ComplexD> rhs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      const ComplexD d = gp[i] - gm[i];
      rhs[i] = -ComplexD(d.real(), std::remainder(d.imag(), 2.0 * M_PI)) / (sp - sm);
    }
    bool ok = false;
    std::vector<ComplexD> trial = y;
    try {
      const auto tangent = solve_linear(jac, rhs);
      for (std::size_t i = 0; i < y.size(); ++i) trial[i] *= std::exp(ds * tangent[i]);
      const auto p = params_at(s + ds);
      for (int it = 0; it < 6 && !ok; ++it) {
        log_bethe_system(trial, p, g, jac, path.log_twist(s + ds));
        std::vector<ComplexD> neg(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) neg[i] = -g[i];
        const auto step = solve_linear(jac, neg);
        if (it == 0 && max_abs(step) > 0.02) break;  // predictor strayed; shrink ds
        for (std::size_t i = 0; i < y.size(); ++i) trial[i] *= std::exp(step[i]);
        ok = max_abs(step) < 1e-10;
      }
    } catch (const Error&) {
      ok = false;
    }
    for (const auto& v : trial)
      if (!(std::abs(v) > 1e-8 && std::abs(v) < 1e8)) ok = false;
    if (ok) {
      y = std::move(trial);
      s += ds;
      ds = std::min(1.5 * ds, 0.1);
    } else {
      ds *= 0.5;
    }
  }
  return y;
}

/// Undamped Newton polish at working precision; returns the final residual.
template <class S>
double newton_polish(std::vector<S>& y, const ChainParams<S>& p, int max_iter, double target) {
  std::vector<S> f;
  Matrix<S> jac;
  double res = bethe_residual(y, p);
  int stalls = 0;
  for (int it = 0; it < max_iter && res >= target; ++it) {
    detail::bethe_system(y, p.q, p.z, f, jac);
    std::vector<S> rhs(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = -f[i];
    std::vector<S> step;
    try {
      step = solve_linear(jac, rhs);
    } catch (const Error&) {
      break;
    }
    std::vector<S> trial = y;
    for (std::size_t i = 0; i < y.size(); ++i) trial[i] += step[i];
    const double r = bethe_residual(trial, p);
    if (!(r < res)) {
      if (++stalls >= 3) break;
    } else {
      stalls = 0;
    }
    if (r <= res) {
      y = std::move(trial);
      res = r;
    }
  }
  return res;
}

/// Rejects limits where the algebraic Bethe vector degenerates: coincident
/// roots, y_i = z_k, y_i q^2 = z_k, y_i q^2 = y_j, or roots at 0 / infinity.
template <class S>
bool admissible(const std::vector<S>& y, const ChainParams<S>& p, double tol) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double my = magnitude(y[i]);
    if (!(my > 1e-8 && my < 1e8)) return false;
    for (const auto& z : p.z) {
      const double sz = magnitude(z) + my;
      if (magnitude(S(y[i] - z)) < tol * sz) return false;
      if (magnitude(S(y[i] * p.q * p.q - z)) < tol * (sz * magnitude(S(p.q * p.q)) + magnitude(z))) return false;
    }
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (j == i) continue;
      const double sy = my + magnitude(y[j]);
      if (magnitude(S(y[i] - y[j])) < tol * sy) return false;
      if (magnitude(S(y[i] * p.q * p.q - y[j])) < tol * (sy * (1.0 + magnitude(S(p.q * p.q))))) return false;
    }
  }
  return true;
}

/// |det J| / prod_k ||J e_k|| after row equilibration: near 1 for well-separated roots, vanishing on a
/// positive-dimensional solution component (where the Bethe vector is zero).
template <class S>
double isolation_ratio(const std::vector<S>& y, const ChainParams<S>& p) {
  std::vector<S> f;
  Matrix<S> jac;
  bethe_system(y, p.q, p.z, f, jac);
  for (std::size_t r = 0; r < jac.rows(); ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < jac.cols(); ++c) row = std::max(row, magnitude(jac(r, c)));
    if (row == 0.0) return 0.0;
    for (std::size_t c = 0; c < jac.cols(); ++c) jac(r, c) /= S(row);
  }
  double scale = 1.0;
  for (std::size_t c = 0; c < jac.cols(); ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < jac.rows(); ++r) col += magnitude(jac(r, c)) * magnitude(jac(r, c));
    if (col == 0.0) return 0.0;
    scale *= std::sqrt(col);
  }
  return magnitude(determinant(jac)) / scale;
}

}  // namespace detail

/// Solutions found by solve_bethe; `complete` is false when fewer than the
/// requested number were certified within the start budget.
template <class C>
struct BetheSearch {
  std::vector<BetheSolution<C>> solutions;
  bool complete = true;
  int starts_used = 0;
  int nonisolated_rejected = 0;
  int diverged = 0;
  int inadmissible = 0;
};

/// Isolation ratio below which a certified root is treated as non-isolated.
template <class C>
double isolation_threshold() {
  return std::pow(10.0, -0.1 * static_cast<double>(ScalarTraits<C>::kBits));
}

/// Residual threshold 10^{-0.2 * bits} certified for every returned solution.
template <class C>
double certification_threshold() {
  return std::pow(10.0, -0.2 * static_cast<double>(ScalarTraits<C>::kBits));
}

/// Multi-start deflated Newton in double precision, polished at the precision
/// of C (escalating to 256 bits on stagnation). Solutions are sorted
/// lexicographically; deterministic for a fixed seed.
template <class C>
BetheSearch<C> solve_bethe(const ChainParams<C>& params, int num_solutions, unsigned long long seed) {
  params.validate();
  if (num_solutions < 1) throw Error(ErrorKind::InvalidInput, "num_solutions must be >= 1");
  const auto pd = detail::convert_chain<ComplexD>(params);
  const auto p256 = detail::convert_chain<Complex256>(params);
  const int n = params.N;
  const int m = params.M;
  const double target = certification_threshold<C>();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

  std::vector<double> zmag;
  for (const auto& z : pd.z) zmag.push_back(std::abs(z));
  std::sort(zmag.begin(), zmag.end());
  const double zscale = zmag[zmag.size() / 2] / std::abs(pd.q);

  BetheSearch<C> out;
  std::vector<std::vector<ComplexD>> found, deflated;
  // Deflate every ordering of a converged point, admissible or not.
  auto deflate = [&deflated](std::vector<ComplexD> perm) {
    const auto less = [](const ComplexD& a, const ComplexD& b) { return detail::lex_less(a, b); };
    std::sort(perm.begin(), perm.end(), less);
    do deflated.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end(), less));
  };
  // Homotopy starts: N-subsets of the free-fermion roots, over up to three
  // independently randomized paths.
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<detail::HomotopyPath> paths;
  std::vector<std::pair<std::size_t, std::vector<ComplexD>>> tracked_starts;
  for (int round = 0; round < 3; ++round) {
    const ComplexD bend(gauss(rng), gauss(rng));
    const ComplexD twist(gauss(rng), gauss(rng));
    paths.push_back({pd.q, 0.5 * std::abs(pd.q - ComplexD(0.0, 1.0)) * bend, 0.5 * twist});
    const auto roots = detail::free_fermion_roots(pd, paths.back().twist);
    const int r = static_cast<int>(roots.size());
    if (r < n) continue;
    std::vector<int> pick(static_cast<std::size_t>(n));
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<ComplexD> y;
      for (int k : pick) y.push_back(roots[static_cast<std::size_t>(k)]);
      tracked_starts.emplace_back(paths.size() - 1, std::move(y));
      int k = n - 1;
      while (k >= 0 && pick[static_cast<std::size_t>(k)] == r - n + k) --k;
      if (k < 0) break;
      ++pick[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < n; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  const int max_starts = static_cast<int>(tracked_starts.size()) + 50 + 30 * num_solutions;
  int start = 0;
  for (; start < max_starts && static_cast<int>(out.solutions.size()) < num_solutions; ++start) {
    std::vector<ComplexD> y(static_cast<std::size_t>(n));
    if (start < static_cast<int>(tracked_starts.size())) {
      const auto& [which, y0] = tracked_starts[static_cast<std::size_t>(start)];
      auto end = detail::track_path(y0, pd, paths[which]);
      if (!end) {
        ++out.diverged;
        continue;
      }
      y = std::move(*end);
    } else if (start % 3 == 2) {
      for (auto& v : y) {
        const double r = zscale * std::exp(std::log(3.0) * unit(rng));
        v = std::polar(r, phase(rng));
      }
    } else {
      std::vector<int> idx(static_cast<std::size_t>(m));
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      for (int i = 0; i < n; ++i) {
        const ComplexD noise(unit(rng), unit(rng));
        y[static_cast<std::size_t>(i)] = -pd.z[static_cast<std::size_t>(idx[static_cast<std::size_t>(i) % idx.size()])] /
                                         pd.q * (1.0 + 0.25 * noise);
      }
    }
    if (!detail::newton_double(y, pd, deflated, 200, 1e-11)) {
      ++out.diverged;
      continue;
    }
    if (!detail::admissible(y, pd, 1e-7)) {
      ++out.inadmissible;
      deflate(y);
      continue;
    }

    bool duplicate = false;
    for (const auto& f : found)
      if (detail::set_distance(y, f) < 1e-6 * (1.0 + std::sqrt(detail::norm2(f)))) duplicate = true;
    if (duplicate) continue;

    auto yc = detail::convert_vector<C>(y);
    double res = detail::newton_polish(yc, params, 60, target);
    if (!(res < target) && ScalarTraits<C>::kBits < 256) {
      auto y256 = detail::convert_vector<Complex256>(y);
      detail::newton_polish(y256, p256, 80, certification_threshold<Complex256>());
      yc = detail::convert_vector<C>(y256);
      res = bethe_residual(yc, params);
      if (!(res < target)) res = detail::newton_polish(yc, params, 20, target);
    }
    if (!(res < target)) continue;
    if (!detail::admissible(yc, params, 1e-7)) continue;
    if (detail::isolation_ratio(yc, params) < isolation_threshold<C>()) {
      ++out.nonisolated_rejected;
      deflate(y);
      continue;
    }

    detail::sort_roots(yc);
    found.push_back(detail::convert_vector<ComplexD>(yc));
    deflate(found.back());
    out.solutions.push_back({yc, res, false});
  }
  out.starts_used = start;
  out.complete = static_cast<int>(out.solutions.size()) >= num_solutions;
  std::sort(out.solutions.begin(), out.solutions.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.y.begin(), a.y.end(), b.y.begin(), b.y.end(),
                                        [](const C& u, const C& v) { return detail::lex_less(u, v); });
  });
  return out;
}

// ---------------------------------------------------------------------------
// Slavnov's formula in additive variables.

namespace detail {

template <class C>
void require_nonzero(const C& v, const char* what) {
  if (magnitude(v) < 1e-30) throw Error(ErrorKind::DegenerateInput, std::string("slavnov_additive: ") + what);
}

}  // namespace detail

/// Slavnov's determinant with additive lambda, mu = (1/2) log y (principal branch).
template <class C>
C slavnov_additive(const std::vector<C>& lambda, const BetheSolution<C>& sol, const ChainParams<C>& p) {
  const std::size_t n = lambda.size();
  if (sol.y.size() != n) throw Error(ErrorKind::DimensionMismatch, "need N lambdas");
  if (sol.multiplicity_flag) throw Error(ErrorKind::DegenerateInput, "coincident Bethe roots");
  const auto mu = to_additive(sol.y);
  const auto add = additive_chain(p);
  const C& g = add.gamma;

  C denom(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const C bl = bracket(C(lambda[i] - lambda[j]));
      const C bm = bracket(C(mu[j] - mu[i]));
      detail::require_nonzero(bl, "coincident lambda");
      detail::require_nonzero(bm, "coincident mu");
      denom *= bl * bm;
    }

  C pref = power(bracket(g), static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pref *= bracket(C(lambda[i] - mu[j] + g));
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& nu : add.nu) pref *= bracket(C(lambda[k] - nu)) * bracket(C(mu[k] - nu));

  const C sign = (n % 2 == 0) ? C(1) : C(-1);
  Matrix<C> omega(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    C ratio(1);
    for (const auto& nu : add.nu) {
      const C dn = bracket(C(lambda[i] - nu));
      detail::require_nonzero(dn, "lambda at an inhomogeneity");
      ratio *= bracket(C(lambda[i] - nu + g)) / dn;
    }
    for (std::size_t l = 0; l < n; ++l) {
      const C dn = bracket(C(lambda[i] - mu[l] + g));
      detail::require_nonzero(dn, "lambda - mu + gamma vanishes");
      ratio *= bracket(C(mu[l] - lambda[i] + g)) / dn;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const C d1 = bracket(C(lambda[i] - mu[j]));
      detail::require_nonzero(d1, "lambda coincides with mu");
      const C d2 = bracket(C(mu[j] - lambda[i]));
      omega(i, j) = C(1) / (d1 * bracket(C(lambda[i] - mu[j] + g))) -
                    sign * ratio / (d2 * bracket(C(mu[j] - lambda[i] + g)));
    }
  }
  return pref * determinant(omega) / denom;
}

/// Slavnov's value after the normalization to multiplicative variables.
template <class C>
C slavnov_normalized(const std::vector<C>& x, const BetheSolution<C>& sol, const ChainParams<C>& p) {
  return normalization(x, sol.y, p) * slavnov_additive(to_additive(x), sol, p);
}

// ---------------------------------------------------------------------------
// rho / kappa construction.

/// (N+M) x N matrix rho; row k-1 holds rho_{k j}.
template <class C>
Matrix<C> rho_matrix(const BetheSolution<C>& sol, const ChainParams<C>& p) {
  const int n = static_cast<int>(sol.y.size());
  const int m = p.M;
  const C q = p.q;
  const C q2 = q * q;
  const C qi = C(1) / q;
  const C qi2 = qi * qi;
  Matrix<C> rho(static_cast<std::size_t>(n + m), static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const C& yj = sol.y[static_cast<std::size_t>(j)];
    C pref1(1), pref2(1);
    std::vector<C> set1, set2;
    for (const auto& z : p.z) {
      pref1 *= yj * q - z * qi;
      pref2 *= yj * q - z * q;
      set1.push_back(-z);
      set2.push_back(-z * qi2);
    }
    for (int l = 0; l < n; ++l) {
      if (l == j) continue;
      const C& yl = sol.y[static_cast<std::size_t>(l)];
      pref1 *= yj - yl * q2;
      pref2 *= yj - yl * qi2;
      set1.push_back(-yl * qi2);
      set2.push_back(-yl * q2);
    }
    const auto e1 = symcore::elementary_series(set1);
    const auto e2 = symcore::elementary_series(set2);
    for (int k = 1; k <= n + m; ++k) {
      const std::size_t idx = static_cast<std::size_t>(m + n - k);
      rho(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(j)) = pref1 * e1[idx] - pref2 * e2[idx];
    }
  }
  return rho;
}

/// Sum-rule tolerance for the removable pole at x = y_j.
template <class C>
double sum_rule_tolerance() {
  if constexpr (ScalarTraits<C>::kExact) return 0.0;
  else return std::ldexp(1.0, -static_cast<int>(ScalarTraits<C>::kBits) / 2);
}

/// kappa_{kj} = -sum_{l<=k} y_j^{l-k-1} rho_{lj}, k = 1..N+M-1, after
/// checking sum_k y_j^{k-1} rho_{kj} = 0.
template <class C>
grasskp::KappaMatrix<C> kappa_from_rho(const Matrix<C>& rho, const BetheSolution<C>& sol, const ChainParams<C>& p) {
  const int n = static_cast<int>(sol.y.size());
  const int m = p.M;
  if (rho.rows() != static_cast<std::size_t>(n + m) || rho.cols() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::DimensionMismatch, "rho must be (N+M) x N");
  grasskp::KappaMatrix<C> kappa(n, m);
  for (int j = 0; j < n; ++j) {
    const C& yj = sol.y[static_cast<std::size_t>(j)];
    C total(0);
    double scale = 0.0;
    C yp(1);
    for (int k = 0; k < n + m; ++k) {
      const C term = yp * rho(static_cast<std::size_t>(k), static_cast<std::size_t>(j));
      total += term;
      scale += magnitude(term);
      yp *= yj;
    }
    const double tol = sum_rule_tolerance<C>();
    if (magnitude(total) > tol * scale)
      throw Error(ErrorKind::SumRuleViolation, "removable-pole condition fails for column " + std::to_string(j + 1));
    // Synthetic division by (x - y_j): kappa_k = -(rho_1 y^{-k} + ... + rho_k y^{-1}).
    const C yinv = C(1) / yj;
    C acc(0);
    for (int k = 1; k <= n + m - 1; ++k) {
      acc = (acc + rho(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(j))) * yinv;
      kappa(k - 1, j) = -acc;
    }
  }
  return kappa;
}

template <class C>
grasskp::KappaMatrix<C> kappa_matrix(const BetheSolution<C>& sol, const ChainParams<C>& p) {
  return kappa_from_rho(rho_matrix(sol, p), sol, p);
}

/// (q - 1/q)^N / [prod_{i<j}(y_j - y_i) prod_{i!=j}(y_i q - y_j/q)].
template <class C>
C kappa_prefactor(const BetheSolution<C>& sol, const ChainParams<C>& p) {
  const std::size_t n = sol.y.size();
  const C qi = C(1) / p.q;
  C den(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i < j) den *= sol.y[j] - sol.y[i];
      if (i != j) den *= sol.y[i] * p.q - sol.y[j] * qi;
    }
  if (ScalarTraits<C>::is_zero(den) || magnitude(den) < 1e-300)
    throw Error(ErrorKind::DegenerateInput, "coincident Bethe roots in the kappa prefactor");
  return power(C(p.q - qi), static_cast<int>(n)) / den;
}

/// <{x}|{y}> = prefactor * jt_rhs(x, kappa); no poles in x.
template <class C>
C scalar_product_kappa(const std::vector<C>& x, const BetheSolution<C>& sol, const ChainParams<C>& p) {
  if (x.size() != sol.y.size()) throw Error(ErrorKind::DimensionMismatch, "need N x values");
  return kappa_prefactor(sol, p) * grasskp::jt_rhs(x, kappa_matrix(sol, p));
}

template <class C>
grasskp::SchurExpansion<C> scalar_product_tau_expansion(const BetheSolution<C>& sol, const ChainParams<C>& p) {
  return grasskp::cauchy_binet_expand(kappa_matrix(sol, p));
}

template <class C>
struct Factorization {
  C lhs;
  C rhs;
};

/// For M = N: <{x}|{y}> against Z_N({x},{z}) Z_N({y},{z}) from the brute-force oracle.
template <class C>
Factorization<C> dwpf_factorization(const std::vector<C>& x, const BetheSolution<C>& sol, const ChainParams<C>& p) {
  if (p.M != p.N || static_cast<int>(x.size()) != p.N)
    throw Error(ErrorKind::DimensionMismatch, "domain-wall factorization needs M = N");
  const C lhs = scalar_product_kappa(x, sol, p);
  const C rhs = normalization(x, sol.y, p) * aba::dwpf_bruteforce(to_additive(x), p) *
                aba::dwpf_bruteforce_ket(to_additive(sol.y), p);
  return {lhs, rhs};
}

}  // namespace taubethe::xxz
