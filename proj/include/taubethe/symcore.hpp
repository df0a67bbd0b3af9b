#pragma once

// Symmetric-function kernel: e_i, h_i, Schur functions by the bialternant and
// by Jacobi-Trudi, character polynomials chi_i / chi_lambda, and the power-sum
// restriction of KP times.

#include <cstddef>
#include <string>
#include <vector>

#include "taubethe/error.hpp"
#include "taubethe/matrix.hpp"
#include "taubethe/partition.hpp"
#include "taubethe/scalar.hpp"

namespace taubethe::symcore {

/// e_0..e_N, coefficients of prod(1 + x_j k).
template <class T>
std::vector<T> elementary_series(const std::vector<T>& x) {
  std::vector<T> e(x.size() + 1, T(0));
  e[0] = T(1);
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t i = j + 1; i >= 1; --i) e[i] += x[j] * e[i - 1];
  }
  return e;
}

template <class T>
T gen_elementary(const std::vector<T>& x, int i) {
  if (i < 0 || i > static_cast<int>(x.size())) return T(0);
  return elementary_series(x)[static_cast<std::size_t>(i)];
}

/// h_0..h_max, coefficients of prod 1/(1 - x_j k), by incremental convolution
/// with one geometric series per variable.
template <class T>
std::vector<T> complete_series(const std::vector<T>& x, int max_degree) {
  if (max_degree < 0) return {};
  std::vector<T> h(static_cast<std::size_t>(max_degree) + 1, T(0));
  h[0] = T(1);
  for (const T& xj : x) {
    for (std::size_t n = 1; n < h.size(); ++n) h[n] += xj * h[n - 1];
  }
  return h;
}

template <class T>
T gen_complete(const std::vector<T>& x, int i) {
  if (i < 0) return T(0);
  return complete_series(x, i)[static_cast<std::size_t>(i)];
}

namespace detail {

template <class T>
void require_distinct(const std::vector<T>& x, const char* where) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (ScalarTraits<T>::close(x[i], x[j]))
        throw Error(ErrorKind::DegenerateInput, std::string(where) + ": coincident variables");
    }
  }
}

}  // namespace detail

/// prod_{i<j} (x_i - x_j).
template <class T>
T vandermonde(const std::vector<T>& x) {
  T v(1);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) v *= x[i] - x[j];
  return v;
}

/// det(x_i^{lambda_j - j + N}) / prod_{i<j}(x_i - x_j).
template <class T>
T schur_bialternant(const std::vector<T>& x, const Partition& lambda) {
  const int n = static_cast<int>(x.size());
  if (lambda.length() > n) return T(0);
  detail::require_distinct(x, "schur_bialternant");
  Matrix<T> a(x.size(), x.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = power(x[i], lambda[j] - (j + 1) + n);
  return determinant(a) / vandermonde(x);
}

/// det(h_{lambda_i - i + j}) over an r x r matrix, r = max(N, length(lambda)).
/// Coincident variables are allowed.
template <class T>
T schur_jacobi_trudi(const std::vector<T>& x, const Partition& lambda) {
  const int r = std::max(static_cast<int>(x.size()), lambda.length());
  if (r == 0) return T(1);
  const int top = lambda[0] + r;
  auto h = complete_series(x, top);
  auto at = [&](int k) { return k < 0 ? T(0) : h[static_cast<std::size_t>(k)]; };
  Matrix<T> a(static_cast<std::size_t>(r), static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) a(i, j) = at(lambda[i] - i + j);
  return determinant(a);
}

/// KP times t_1, t_2, ...; index m is 1-based. Reading past size() is an input error.
template <class T>
class TimeVector {
 public:
  TimeVector() = default;
  explicit TimeVector(std::vector<T> t) : t_(std::move(t)) {}

  int size() const { return static_cast<int>(t_.size()); }
  const T& operator[](int m) const {
    if (m < 1 || m > size()) throw Error(ErrorKind::InsufficientTimes, "time t_" + std::to_string(m) + " not supplied");
    return t_[static_cast<std::size_t>(m - 1)];
  }
  const std::vector<T>& values() const { return t_; }

 private:
  std::vector<T> t_;
};

/// chi_0..chi_max of exp(sum t_m k^m) via n chi_n = sum_m m t_m chi_{n-m}.
template <class T>
std::vector<T> char_series(const TimeVector<T>& t, int max_degree) {
  if (max_degree < 0) return {};
  if (t.size() < max_degree)
    throw Error(ErrorKind::InsufficientTimes, "need " + std::to_string(max_degree) + " times, have " + std::to_string(t.size()));
  std::vector<T> chi(static_cast<std::size_t>(max_degree) + 1, T(0));
  chi[0] = T(1);
  for (int n = 1; n <= max_degree; ++n) {
    T acc(0);
    for (int m = 1; m <= n; ++m) acc += T(m) * t[m] * chi[static_cast<std::size_t>(n - m)];
    chi[static_cast<std::size_t>(n)] = acc / T(n);
  }
  return chi;
}

template <class T>
T char_one_row(const TimeVector<T>& t, int i) {
  if (i < 0) return T(0);
  return char_series(t, i)[static_cast<std::size_t>(i)];
}

template <class T>
T char_partition(const TimeVector<T>& t, const Partition& lambda) {
  const int r = lambda.length();
  if (r == 0) return T(1);
  auto chi = char_series(t, lambda.size());
  auto at = [&](int k) { return k < 0 || k >= static_cast<int>(chi.size()) ? T(0) : chi[static_cast<std::size_t>(k)]; };
  Matrix<T> a(static_cast<std::size_t>(r), static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) a(i, j) = at(lambda[i] - i + j);
  return determinant(a);
}

/// t_m = (1/m) sum_i x_i^m for m = 1..max_m.
template <class T>
TimeVector<T> times_from_powersums(const std::vector<T>& x, int max_m) {
  if (max_m < 1) throw Error(ErrorKind::InvalidInput, "max_m must be at least 1");
  std::vector<T> t;
  t.reserve(static_cast<std::size_t>(max_m));
  std::vector<T> powers = x;
  for (int m = 1; m <= max_m; ++m) {
    T sum(0);
    for (const T& p : powers) sum += p;
    t.push_back(sum / T(m));
    for (std::size_t i = 0; i < x.size(); ++i) powers[i] *= x[i];
  }
  return TimeVector<T>(std::move(t));
}

}  // namespace taubethe::symcore
