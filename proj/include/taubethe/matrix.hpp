#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "taubethe/error.hpp"
#include "taubethe/scalar.hpp"

namespace taubethe {

/// Dense row-major matrix over any commutative ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& aik = (*this)(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
      }
    }
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::DimensionMismatch, "matrix difference");
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
    std::vector<T> r(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  const std::vector<T>& data() const { return data_; }

  bool operator==(const Matrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace detail {

// Fraction-free (Bareiss) elimination; every division is exact.
template <class T>
T determinant_bareiss(Matrix<T> a) {
  const std::size_t n = a.rows();
  if (n == 0) return T(1);
  T sign(1);
  T previous(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return T(0);
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / previous;
      }
    }
    previous = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// Partial-pivot LU.
template <class T>
T determinant_lu(Matrix<T> a) {
  using std::abs;
  const std::size_t n = a.rows();
  T det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    auto best = abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      auto m = abs(a(i, k));
      if (m > best) {
        best = m;
        p = i;
      }
    }
    if (a(p, k) == T(0)) return T(0);
    if (p != k) {
      a.swap_rows(k, p);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      T factor = a(i, k) / a(k, k);
      if (factor == T(0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return det;
}

// Laplace expansion over column subsets; division-free, O(n 2^n) ring operations.
template <class T>
T determinant_expansion(const Matrix<T>& a) {
  const std::size_t n = a.rows();
  if (n == 0) return T(1);
  if (n > 20) throw Error(ErrorKind::SizeLimit, "expansion determinant limited to 20x20");
  std::vector<T> dp(std::size_t{1} << n, T(0));
  dp[0] = T(1);
  for (std::size_t mask = 1; mask < dp.size(); ++mask) {
    const std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
    T acc(0);
    int above = 0;  // columns in mask greater than c
    for (std::size_t c = n; c-- > 0;) {
      if (!(mask & (std::size_t{1} << c))) continue;
      const T& entry = a(row, c);
      const T& minor = dp[mask & ~(std::size_t{1} << c)];
      if (!(entry == T(0)) && !(minor == T(0))) {
        if (above % 2 == 0)
          acc += entry * minor;
        else
          acc -= entry * minor;
      }
      ++above;
    }
    dp[mask] = acc;
  }
  return dp.back();
}

}  // namespace detail

/// Determinant of a square matrix: fraction-free elimination over exact
/// rationals, partial-pivot LU over floats, cofactor expansion over rings.
template <class T>
T determinant(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  if constexpr (ScalarTraits<T>::kExact) {
    return detail::determinant_bareiss(a);
  } else if constexpr (ScalarTraits<T>::kFloat) {
    return detail::determinant_lu(a);
  } else {
    return detail::determinant_expansion(a);
  }
}

/// Solves a x = b by partial-pivot elimination. Throws DegenerateInput on an exactly singular pivot.
template <class T>
std::vector<T> solve_linear(Matrix<T> a, std::vector<T> b) {
  using std::abs;
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw Error(ErrorKind::DimensionMismatch, "solve_linear");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    auto best = abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      auto m = abs(a(i, k));
      if (m > best) {
        best = m;
        p = i;
      }
    }
    if (a(p, k) == T(0)) throw Error(ErrorKind::DegenerateInput, "singular linear system");
    a.swap_rows(k, p);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      T factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
      b[i] -= factor * b[k];
    }
  }
  std::vector<T> x(n, T(0));
  for (std::size_t i = n; i-- > 0;) {
    T s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace taubethe
