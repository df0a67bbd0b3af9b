#pragma once

// XXZ chain data shared by the Slavnov/kappa pipeline and the brute-force
// oracle. Production code uses the multiplicative variables
//   x = e^{2 lambda}, y = e^{2 mu}, z = e^{2 nu}, q = e^{gamma};
// additive rapidities appear only on cross-check paths (principal branch).

#include <string>
#include <vector>

#include "taubethe/error.hpp"
#include "taubethe/scalar.hpp"

namespace taubethe::xxz {

/// Threshold on |q^2 - 1| below which the crossing parameter is rejected.
inline constexpr double kCrossingDegeneracy = 1e-6;

template <class C>
struct ChainParams {
  int M = 1;
  int N = 1;
  C q = C(2);
  std::vector<C> z;

  /// Throws InvalidInput when an invariant fails.
  void validate() const {
    if (M < 1) throw Error(ErrorKind::InvalidInput, "chain length M must be >= 1");
    if (N < 1 || N > M) throw Error(ErrorKind::InvalidInput, "need 1 <= N <= M (got N=" + std::to_string(N) + ", M=" + std::to_string(M) + ")");
    if (static_cast<int>(z.size()) != M) throw Error(ErrorKind::InvalidInput, "need exactly M inhomogeneities");
    if (ScalarTraits<C>::is_zero(q)) throw Error(ErrorKind::InvalidInput, "q must be nonzero");
    if (magnitude(C(q * q - C(1))) <= kCrossingDegeneracy)
      throw Error(ErrorKind::InvalidInput, "|q^2 - 1| too small: crossing parameter degenerate");
    for (const auto& zi : z)
      if (ScalarTraits<C>::is_zero(zi)) throw Error(ErrorKind::InvalidInput, "inhomogeneities must be nonzero");
  }
};

/// Multiplicative Bethe roots y_i = e^{2 mu_i}.
template <class C>
struct BetheSolution {
  std::vector<C> y;
  double residual = 0.0;
  bool multiplicity_flag = false;
};

/// [u] = e^u - e^{-u}.
template <class C>
C bracket(const C& u) {
  using std::exp;
  return C(exp(u) - exp(C(-u)));
}

/// Additive data (gamma, nu_i) recovered with principal logarithms.
template <class C>
struct AdditiveChain {
  C gamma;
  std::vector<C> nu;
};

template <class C>
AdditiveChain<C> additive_chain(const ChainParams<C>& p) {
  using std::log;
  AdditiveChain<C> a;
  a.gamma = log(p.q);
  for (const auto& zi : p.z) a.nu.push_back(C(log(zi) / C(2)));
  return a;
}

/// lambda = (1/2) log x, principal branch.
template <class C>
std::vector<C> to_additive(const std::vector<C>& x) {
  using std::log;
  std::vector<C> out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(C(log(v) / C(2)));
  return out;
}

/// prod_i e^{(M-1)(lambda_i + mu_i)} prod_j z_j^N, the factor taking the
/// additive scalar product to the multiplicative one. For odd M the first
/// product is the single-valued (x_i y_i)^{(M-1)/2}; for even M it is taken in
/// additive variables with lambda = (1/2) log x on the principal branch.
template <class C>
C normalization(const std::vector<C>& x, const std::vector<C>& y, const ChainParams<C>& p) {
  using std::exp;
  C r(1);
  for (const auto& zj : p.z) r *= power(zj, static_cast<int>(x.size()));
  if (p.M % 2 == 1) {
    for (std::size_t i = 0; i < x.size(); ++i) r *= power(C(x[i] * y[i]), (p.M - 1) / 2);
  } else {
    const auto lam = to_additive(x);
    const auto mu = to_additive(y);
    for (std::size_t i = 0; i < x.size(); ++i) r *= exp(C(C(p.M - 1) * (lam[i] + mu[i])));
  }
  return r;
}

/// a(mu) = prod_i [mu - nu_i + gamma].
template <class C>
C a_eval(const C& mu, const ChainParams<C>& p) {
  const auto add = additive_chain(p);
  C r(1);
  for (const auto& nu : add.nu) r *= bracket(C(mu - nu + add.gamma));
  return r;
}

/// d(mu) = prod_i [mu - nu_i].
template <class C>
C d_eval(const C& mu, const ChainParams<C>& p) {
  const auto add = additive_chain(p);
  C r(1);
  for (const auto& nu : add.nu) r *= bracket(C(mu - nu));
  return r;
}

}  // namespace taubethe::xxz
