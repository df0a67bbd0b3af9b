#pragma once

// Charged free fermions on Maya diagrams. A basis state is the ordered
// semi-infinite wedge of its occupied modes, listed in decreasing order; the
// vacuum fills every mode m < 0. psi_m / psi*_m insert / remove mode m with
// sign (-1)^{#occupied modes > m}.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "taubethe/error.hpp"
#include "taubethe/grasskp.hpp"
#include "taubethe/partition.hpp"
#include "taubethe/scalar.hpp"
#include "taubethe/symcore.hpp"
#include "taubethe/xxzcore.hpp"

namespace taubethe::fock {

class MayaState {
 public:
  MayaState() = default;
  MayaState(std::set<int> added, std::set<int> removed);

  /// Neutral state of a partition: occupied modes lambda_i - i.
  static MayaState from_partition(const Partition& lambda);

  const std::set<int>& added() const { return added_; }
  const std::set<int>& removed() const { return removed_; }
  int charge() const { return static_cast<int>(added_.size()) - static_cast<int>(removed_.size()); }
  bool occupied(int mode) const;
  int occupied_above(int mode) const;
  /// Sum of added modes plus sum of |removed modes|; |lambda| for neutral states.
  int energy() const;
  /// Throws InvalidInput unless charge() == 0.
  Partition to_partition() const;
  std::string to_string() const;

  MayaState with(int mode) const;
  MayaState without(int mode) const;

  auto operator<=>(const MayaState&) const = default;

 private:
  std::set<int> added_;
  std::set<int> removed_;
};

struct SignedState {
  int sign;
  MayaState state;
};

/// psi_mode |s>; empty when the mode is already filled.
std::optional<SignedState> apply_psi(const MayaState& s, int mode);
/// psi*_mode |s>; empty when the mode is empty.
std::optional<SignedState> apply_psi_star(const MayaState& s, int mode);
/// H_m |s> for m >= 1 as a list of signed basis states.
std::vector<SignedState> apply_heisenberg(const MayaState& s, int m);

template <class T>
class FockVector {
 public:
  using Terms = std::map<MayaState, T>;

  FockVector() = default;
  static FockVector vacuum() {
    FockVector v;
    v.terms_.emplace(MayaState(), T(1));
    return v;
  }
  static FockVector basis(const MayaState& s, const T& c = T(1)) {
    FockVector v;
    v.add(s, c);
    return v;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  T coefficient(const MayaState& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? T(0) : it->second;
  }

  void add(const MayaState& s, const T& c) {
    if (ScalarTraits<T>::is_zero(c)) return;
    auto it = terms_.find(s);
    if (it == terms_.end()) {
      terms_.emplace(s, c);
    } else {
      it->second += c;
      if (ScalarTraits<T>::is_zero(it->second)) terms_.erase(it);
    }
  }

  FockVector& operator+=(const FockVector& o) {
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
  }

  friend bool operator==(const FockVector& a, const FockVector& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

template <class T>
FockVector<T> psi(const FockVector<T>& v, int mode) {
  FockVector<T> out;
  for (const auto& [s, c] : v.terms())
    if (auto r = apply_psi(s, mode)) out.add(r->state, r->sign > 0 ? c : T(-c));
  return out;
}

template <class T>
FockVector<T> psi_star(const FockVector<T>& v, int mode) {
  FockVector<T> out;
  for (const auto& [s, c] : v.terms())
    if (auto r = apply_psi_star(s, mode)) out.add(r->state, r->sign > 0 ? c : T(-c));
  return out;
}

/// <0| e^{H{t}} |v> = sum_n <0| H{t}^n |v> / n!, H{t} = sum_m t_m H_m.
template <class T>
T vev_character(const symcore::TimeVector<T>& t, const FockVector<T>& v) {
  int top = 0;
  for (const auto& [s, c] : v.terms()) {
    if (s.charge() != 0) return T(0);
    top = std::max(top, s.energy());
  }
  T total = v.coefficient(MayaState());
  FockVector<T> w = v;
  for (int n = 1; n <= top; ++n) {
    FockVector<T> next;
    for (const auto& [s, c] : w.terms()) {
      for (int m = 1; m <= s.energy(); ++m) {
        const T cm = c * t[m];
        if (ScalarTraits<T>::is_zero(cm)) continue;
        for (const auto& r : apply_heisenberg(s, m)) next.add(r.state, r.sign > 0 ? cm : T(-cm));
      }
    }
    FockVector<T> scaled;
    for (const auto& [s, c] : next.terms()) scaled.add(s, c / T(n));
    w = std::move(scaled);
    total += w.coefficient(MayaState());
  }
  return total;
}

/// The same pairing with the power-sum times t_m = (1/m) sum_i x_i^m.
template <class T>
T vev_character(const std::vector<T>& x, const FockVector<T>& v) {
  int top = 1;
  for (const auto& [s, c] : v.terms()) top = std::max(top, s.energy());
  return vev_character(symcore::times_from_powersums(x, top), v);
}

/// X_j = sum_k (-1)^k coeffs[k-1] psi*_{-k} psi_j.
template <class T>
struct BilinearX {
  int j = 0;
  std::vector<T> coeffs;
};

template <class T>
FockVector<T> apply_X(const FockVector<T>& v, const BilinearX<T>& X) {
  FockVector<T> out;
  const auto pv = psi(v, X.j);
  for (std::size_t k = 1; k <= X.coeffs.size(); ++k) {
    const T& d = X.coeffs[k - 1];
    if (ScalarTraits<T>::is_zero(d)) continue;
    const T c = (k % 2 == 0) ? d : T(-d);
    const auto moved = psi_star(pv, -static_cast<int>(k));
    for (const auto& [s, a] : moved.terms()) out.add(s, a * c);
  }
  return out;
}

/// e^X v = (1 + X) v since X^2 = 0.
template <class T>
FockVector<T> apply_exp_X(const FockVector<T>& v, const BilinearX<T>& X) {
  FockVector<T> out = v;
  out += apply_X(v, X);
  return out;
}

template <class T>
struct GrassmannPoint {
  int N = 0;
  int M = 0;
  T c_empty;
  /// d[j][k-1] = d_{[j+1, 1^{k-1}]}, j = 0..M-2, k = 1..N.
  std::vector<std::vector<T>> d;
};

template <class T>
GrassmannPoint<T> grassmann_point_from_expansion(const grasskp::SchurExpansion<T>& e) {
  GrassmannPoint<T> g;
  g.N = e.box_rows;
  g.M = e.box_cols + 1;
  g.c_empty = e.coefficient(Partition());
  if (ScalarTraits<T>::is_zero(g.c_empty) || (ScalarTraits<T>::kFloat && magnitude(g.c_empty) < 1e-300))
    throw Error(ErrorKind::EmptyCoefficientZero, "c_empty vanishes; hook coefficients undefined");
  if constexpr (ScalarTraits<T>::kFloat) {
    double biggest = 0.0;
    for (const auto& [l, c] : e.coeffs) biggest = std::max(biggest, magnitude(c));
    if (magnitude(g.c_empty) <= 1e-14 * biggest)
      throw Error(ErrorKind::EmptyCoefficientZero, "c_empty negligible relative to the expansion");
  }
  for (int j = 0; j + 1 < g.M; ++j) {
    std::vector<T> row;
    for (int k = 1; k <= g.N; ++k) row.push_back(e.coefficient(Partition::hook(j, k - 1)) / g.c_empty);
    g.d.push_back(std::move(row));
  }
  return g;
}

/// e^{X_0} ... e^{X_{M-2}} |0>.
template <class T>
FockVector<T> grassmann_state(const GrassmannPoint<T>& g) {
  FockVector<T> v = FockVector<T>::vacuum();
  for (int j = g.M - 2; j >= 0; --j) v = apply_exp_X(v, BilinearX<T>{j, g.d[static_cast<std::size_t>(j)]});
  return v;
}

/// c_empty <0| e^{H{x}} e^{X_0} ... e^{X_{M-2}} |0>.
template <class T>
T lemma4_vev(const std::vector<T>& x, const grasskp::KappaMatrix<T>& kappa) {
  if (static_cast<int>(x.size()) != kappa.N()) throw Error(ErrorKind::DimensionMismatch, "need N x values");
  const auto g = grassmann_point_from_expansion(grasskp::cauchy_binet_expand(kappa));
  return g.c_empty * vev_character(x, grassmann_state(g));
}

/// Hook-coefficient table of a Bethe solution.
template <class C>
GrassmannPoint<C> grassmannian_point(const xxz::BetheSolution<C>& sol, const xxz::ChainParams<C>& p) {
  return grassmann_point_from_expansion(xxz::scalar_product_tau_expansion(sol, p));
}

}  // namespace taubethe::fock
