#pragma once

// Grassmannian side of the construction: the box-partition <-> subset
// bijection, Cauchy-Binet Schur expansion of det(H C), the Jacobi-Trudi-type
// identity for det(sum_k x_i^{k-1} kappa_kj) / Vandermonde, Plucker relations
// and the tau-function verdict.
//
// Subsets are sorted vectors of 1-based row indices. Plucker coordinates use
// ascending row order internally; the Schur coefficients c_lambda are in the
// descending-row convention, which differs by row_order_sign(N) = (-1)^{N(N-1)/2}.
// That sign is applied in exactly two places: cauchy_binet_expand and
// expansion_to_plucker.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "taubethe/matrix.hpp"
#include "taubethe/partition.hpp"
#include "taubethe/polynomial.hpp"
#include "taubethe/symcore.hpp"

namespace taubethe::grasskp {

using Subset = std::vector<int>;

/// {lambda_{N-i+1} + i : i = 1..N}.
Subset partition_to_subset(const Partition& lambda, int n_rows);
Partition subset_to_partition(const Subset& subset);
/// All k-subsets of {1..n} in lexicographic order.
std::vector<Subset> k_subsets(int n, int k);
std::string subset_to_string(const Subset& s);

constexpr int row_order_sign(int n) { return ((n * (n - 1) / 2) % 2 == 0) ? 1 : -1; }

/// (N+M-1) x N coefficient matrix. Indices here are 0-based: (k, j) holds kappa_{k+1, j+1}.
template <class T>
class KappaMatrix {
 public:
  KappaMatrix(int n, int m) : n_(n), m_(m), entries_(check(n, m), static_cast<std::size_t>(n)) {}

  KappaMatrix(int n, int m, Matrix<T> entries) : n_(n), m_(m), entries_(std::move(entries)) {
    check(n, m);
    if (entries_.rows() != static_cast<std::size_t>(n + m - 1) || entries_.cols() != static_cast<std::size_t>(n))
      throw Error(ErrorKind::DimensionMismatch, "kappa must be (N+M-1) x N");
  }

  int N() const { return n_; }
  int M() const { return m_; }
  int rows() const { return n_ + m_ - 1; }
  T& operator()(int k, int j) { return entries_(static_cast<std::size_t>(k), static_cast<std::size_t>(j)); }
  const T& operator()(int k, int j) const { return entries_(static_cast<std::size_t>(k), static_cast<std::size_t>(j)); }
  const Matrix<T>& matrix() const { return entries_; }

 private:
  static std::size_t check(int n, int m) {
    if (n < 1 || m < 1) throw Error(ErrorKind::InvalidInput, "kappa needs N >= 1 and M >= 1");
    return static_cast<std::size_t>(n + m - 1);
  }

  int n_;
  int m_;
  Matrix<T> entries_;
};

template <class T>
struct PluckerFamily {
  int n = 0;  // ambient rows
  int k = 0;  // subset size
  std::map<Subset, T> coords;

  const T& at(const Subset& s) const {
    auto it = coords.find(s);
    if (it == coords.end()) throw Error(ErrorKind::InvalidInput, "missing Plucker coordinate " + subset_to_string(s));
    return it->second;
  }
};

template <class T>
struct SchurExpansion {
  int box_rows = 0;  // N
  int box_cols = 0;  // M - 1
  std::map<Partition, T> coeffs;

  T coefficient(const Partition& p) const {
    auto it = coeffs.find(p);
    return it == coeffs.end() ? T(0) : it->second;
  }
};

/// Identifies one exchange relation: A is an (N-1)-subset, B an (N+1)-subset.
struct RelationId {
  Subset a;
  Subset b;
  auto operator<=>(const RelationId&) const = default;
  std::string to_string() const { return "A=" + subset_to_string(a) + " B=" + subset_to_string(b); }
};

template <class T>
struct PluckerResidual {
  RelationId id;
  T residual;
  double scale;  // largest |p_I p_J| among the terms
};

struct TauVerdict {
  bool is_tau = true;
  double max_relative_residual = 0.0;
  std::optional<RelationId> witness;
  std::size_t relations_checked = 0;
};

// ---------------------------------------------------------------------------

template <class T>
T det_rows(const KappaMatrix<T>& kappa, const Subset& rows) {
  const std::size_t n = rows.size();
  Matrix<T> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = kappa(rows[i] - 1, static_cast<int>(j));
  return determinant(a);
}

/// coords[S] = det(kappa_{s_i, j}) with rows in ascending order.
template <class T>
PluckerFamily<T> minor_family(const KappaMatrix<T>& kappa) {
  PluckerFamily<T> p;
  p.n = kappa.rows();
  p.k = kappa.N();
  for (auto& s : k_subsets(p.n, p.k)) {
    T d = det_rows(kappa, s);
    p.coords.emplace(std::move(s), std::move(d));
  }
  return p;
}

/// det(sum_k x_i^{k-1} kappa_kj) / prod_{i<j}(x_i - x_j). Refuses coincident x.
template <class T>
T jt_lhs(const std::vector<T>& x, const KappaMatrix<T>& kappa) {
  const int n = kappa.N();
  if (static_cast<int>(x.size()) != n) throw Error(ErrorKind::DimensionMismatch, "jt_lhs needs N variables");
  symcore::detail::require_distinct(x, "jt_lhs");
  Matrix<T> a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    T xp(1);
    for (int k = 0; k < kappa.rows(); ++k) {
      for (int j = 0; j < n; ++j) a(i, j) += xp * kappa(k, j);
      xp *= x[static_cast<std::size_t>(i)];
    }
  }
  return determinant(a) / symcore::vandermonde(x);
}

/// det(sum_k h_{k-i}{x} kappa_{k, N-j+1}); no Vandermonde, so x may repeat.
template <class T>
T jt_rhs(const std::vector<T>& x, const KappaMatrix<T>& kappa) {
  const int n = kappa.N();
  if (static_cast<int>(x.size()) != n) throw Error(ErrorKind::DimensionMismatch, "jt_rhs needs N variables");
  auto h = symcore::complete_series(x, kappa.rows());
  Matrix<T> a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      T acc(0);
      for (int k = i; k <= kappa.rows(); ++k) acc += h[static_cast<std::size_t>(k - i)] * kappa(k - 1, n - j);
      a(i - 1, j - 1) = acc;
    }
  }
  return determinant(a);
}

/// c_lambda = det(kappa_{lambda_i + N - i + 1, j}) for every lambda in [(M-1)^N].
template <class T>
SchurExpansion<T> cauchy_binet_expand(const KappaMatrix<T>& kappa) {
  SchurExpansion<T> out;
  out.box_rows = kappa.N();
  out.box_cols = kappa.M() - 1;
  const T sign(row_order_sign(kappa.N()));
  for (const auto& lambda : partitions_in_box(out.box_rows, out.box_cols)) {
    out.coeffs.emplace(lambda, sign * det_rows(kappa, partition_to_subset(lambda, kappa.N())));
  }
  return out;
}

/// sum_lambda c_lambda s_lambda{x}; the Schur functions come from Jacobi-Trudi.
template <class T>
T evaluate_expansion(const SchurExpansion<T>& e, const std::vector<T>& x) {
  T sum(0);
  for (const auto& [lambda, c] : e.coeffs) {
    if (ScalarTraits<T>::is_zero(c)) continue;
    sum += c * symcore::schur_jacobi_trudi(x, lambda);
  }
  return sum;
}

/// Schur coefficients read from the alternant P * prod_{i<j}(x_i - x_j): c_lambda
/// is the coefficient of x^{lambda + delta}, delta = (N-1, ..., 0).
/// Symmetry is tested by evaluating at seeded random points with each adjacent
/// pair of variables swapped.
template <class T>
SchurExpansion<T> schur_expand_alternant(const MultivariatePolynomial<T>& p, int box_cols, unsigned seed = 7) {
  const int n = static_cast<int>(p.num_vars());
  if (n < 1) throw Error(ErrorKind::InvalidInput, "need at least one variable");
  if (p.min_exponent() < 0) throw Error(ErrorKind::InvalidInput, "alternant expansion needs a polynomial");
  for (int v = 0; v < n; ++v)
    if (p.degree_in(static_cast<std::size_t>(v)) > box_cols)
      throw Error(ErrorKind::InvalidInput, "degree exceeds the Schur box");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-97, 97);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<T> point;
    for (int i = 0; i < n; ++i) point.push_back(T(dist(rng)) / T(2 * trial + 3 + i));
    const T base = p.evaluate(point);
    for (int i = 0; i + 1 < n; ++i) {
      auto swapped = point;
      std::swap(swapped[static_cast<std::size_t>(i)], swapped[static_cast<std::size_t>(i + 1)]);
      if (!ScalarTraits<T>::close(base, p.evaluate(swapped)))
        throw Error(ErrorKind::NotSymmetric, "polynomial changes under swapping variables " + std::to_string(i) + "," +
                                                 std::to_string(i + 1));
    }
  }

  MultivariatePolynomial<T> vdm = MultivariatePolynomial<T>::constant(p.num_vars(), T(1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      vdm *= MultivariatePolynomial<T>::variable(p.num_vars(), static_cast<std::size_t>(i)) -
             MultivariatePolynomial<T>::variable(p.num_vars(), static_cast<std::size_t>(j));
  const auto alternant = p * vdm;

  SchurExpansion<T> out;
  out.box_rows = n;
  out.box_cols = box_cols;
  for (const auto& lambda : partitions_in_box(n, box_cols)) {
    std::vector<int> e(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = lambda[i] + (n - 1 - i);
    out.coeffs.emplace(lambda, alternant.coefficient(e));
  }
  return out;
}

/// Every Grassmann-Plucker exchange relation of Gr(k, n):
///   sum_l (-1)^l p[A u {b_l}] p[B \ {b_l}],
/// with p[A u {b}] = 0 when b is in A and carrying the sort sign otherwise.
/// Relations are emitted in (A, B) lexicographic order, without deduplication.
template <class T>
std::vector<PluckerResidual<T>> plucker_residuals(const PluckerFamily<T>& p) {
  std::vector<PluckerResidual<T>> out;
  if (p.k < 1 || p.k >= p.n) return out;
  const auto as = k_subsets(p.n, p.k - 1);
  const auto bs = k_subsets(p.n, p.k + 1);
  out.reserve(as.size() * bs.size());
  for (const auto& a : as) {
    for (const auto& b : bs) {
      T acc(0);
      double scale = 0.0;
      for (std::size_t l = 0; l < b.size(); ++l) {
        const int bl = b[l];
        if (std::find(a.begin(), a.end(), bl) != a.end()) continue;
        int greater = 0;
        Subset left = a;
        for (int ai : a)
          if (ai > bl) ++greater;
        left.insert(std::upper_bound(left.begin(), left.end(), bl), bl);
        Subset right;
        for (std::size_t r = 0; r < b.size(); ++r)
          if (r != l) right.push_back(b[r]);
        T term = p.at(left) * p.at(right);
        scale = std::max(scale, magnitude(term));
        if ((static_cast<int>(l) + greater) % 2 == 0)
          acc += term;
        else
          acc -= term;
      }
      out.push_back({RelationId{a, b}, std::move(acc), scale});
    }
  }
  return out;
}

/// Plucker coordinates of an expansion: p[subset(lambda)] = row_order_sign(N) * c_lambda.
template <class T>
PluckerFamily<T> expansion_to_plucker(const SchurExpansion<T>& e) {
  PluckerFamily<T> p;
  p.n = e.box_rows + e.box_cols;
  p.k = e.box_rows;
  const T sign(row_order_sign(e.box_rows));
  for (const auto& lambda : partitions_in_box(e.box_rows, e.box_cols))
    p.coords.emplace(partition_to_subset(lambda, e.box_rows), sign * e.coefficient(lambda));
  return p;
}

/// Verdict over all relations. Float domain: a relation passes when
/// |residual| <= tolerance * scale. Exact domain: residuals must vanish.
template <class T>
TauVerdict tau_check(const SchurExpansion<T>& expansion, double tolerance = 1e-10) {
  TauVerdict v;
  const auto residuals = plucker_residuals(expansion_to_plucker(expansion));
  v.relations_checked = residuals.size();
  double worst = -1.0;
  for (const auto& r : residuals) {
    const double abs_res = magnitude(r.residual);
    double rel = 0.0;
    bool ok;
    if constexpr (ScalarTraits<T>::kExact) {
      ok = ScalarTraits<T>::is_zero(r.residual);
      rel = r.scale > 0.0 ? abs_res / r.scale : (ok ? 0.0 : INFINITY);
    } else {
      ok = abs_res <= tolerance * r.scale;
      rel = r.scale > 0.0 ? abs_res / r.scale : 0.0;
    }
    if (!ok) v.is_tau = false;
    if (rel > worst) {
      worst = rel;
      v.witness = r.id;
    }
  }
  v.max_relative_residual = std::max(worst, 0.0);
  return v;
}

}  // namespace taubethe::grasskp
