#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "taubethe/error.hpp"
#include "taubethe/scalar.hpp"

namespace taubethe {

/// Sparse multivariate (Laurent) polynomial: exponent vector -> coefficient.
///
/// Exponents may be negative, which is what the exact Yang-Baxter checks use
/// (variables stand for e^lambda, e^nu, e^gamma). Zero coefficients are never
/// stored, so structural equality of the term maps is mathematical equality.
/// A polynomial built from a bare integer has zero variables and is padded
/// on demand when combined with a wider one.
template <class T>
class MultivariatePolynomial {
 public:
  using Exponents = std::vector<int>;
  using Terms = std::map<Exponents, T>;

  explicit MultivariatePolynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  // Implicit so that generic ring code can write T(0) and T(1).
  MultivariatePolynomial(int constant) : num_vars_(0) {
    if (constant != 0) terms_.emplace(Exponents{}, T(constant));
  }

  static MultivariatePolynomial constant(std::size_t num_vars, const T& c) {
    MultivariatePolynomial p(num_vars);
    p.add_term(Exponents(num_vars, 0), c);
    return p;
  }

  static MultivariatePolynomial variable(std::size_t num_vars, std::size_t index, int power = 1) {
    if (index >= num_vars) throw Error(ErrorKind::InvalidInput, "variable index out of range");
    Exponents e(num_vars, 0);
    e[index] = power;
    MultivariatePolynomial p(num_vars);
    p.add_term(e, T(1));
    return p;
  }

  std::size_t num_vars() const { return num_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Exponents e, const T& c) {
    if (e.size() != num_vars_) throw Error(ErrorKind::DimensionMismatch, "exponent vector length");
    if (ScalarTraits<T>::is_zero(c)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(std::move(e), c);
    } else {
      it->second += c;
      if (ScalarTraits<T>::is_zero(it->second)) terms_.erase(it);
    }
  }

  T coefficient(const Exponents& e) const {
    Exponents padded = e;
    padded.resize(std::max(padded.size(), num_vars_), 0);
    for (std::size_t i = num_vars_; i < padded.size(); ++i)
      if (padded[i] != 0) return T(0);
    padded.resize(num_vars_);
    auto it = terms_.find(padded);
    return it == terms_.end() ? T(0) : it->second;
  }

  /// Largest exponent of variable `var` (0 for the zero polynomial).
  int degree_in(std::size_t var) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, var < e.size() ? e[var] : 0);
    return d;
  }

  int min_exponent() const {
    int m = 0;
    for (const auto& [e, c] : terms_)
      for (int x : e) m = std::min(m, x);
    return m;
  }

  MultivariatePolynomial padded(std::size_t num_vars) const {
    if (num_vars < num_vars_) throw Error(ErrorKind::DimensionMismatch, "cannot shrink variable count");
    if (num_vars == num_vars_) return *this;
    MultivariatePolynomial r(num_vars);
    for (const auto& [e, c] : terms_) {
      Exponents w = e;
      w.resize(num_vars, 0);
      r.terms_.emplace(std::move(w), c);
    }
    return r;
  }

  MultivariatePolynomial swapped(std::size_t i, std::size_t j) const {
    MultivariatePolynomial r(num_vars_);
    for (const auto& [e, c] : terms_) {
      Exponents w = e;
      std::swap(w.at(i), w.at(j));
      r.terms_.emplace(std::move(w), c);
    }
    return r;
  }

  T evaluate(std::span<const T> point) const {
    if (point.size() != num_vars_) throw Error(ErrorKind::DimensionMismatch, "evaluation point size");
    T sum(0);
    for (const auto& [e, c] : terms_) {
      T term = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) term *= power(point[i], e[i]);
      sum += term;
    }
    return sum;
  }

  MultivariatePolynomial& operator+=(const MultivariatePolynomial& o) {
    align(o.num_vars_);
    for (const auto& [e, c] : o.terms_) {
      Exponents w = e;
      w.resize(num_vars_, 0);
      add_term(std::move(w), c);
    }
    return *this;
  }

  MultivariatePolynomial& operator-=(const MultivariatePolynomial& o) {
    align(o.num_vars_);
    for (const auto& [e, c] : o.terms_) {
      Exponents w = e;
      w.resize(num_vars_, 0);
      add_term(std::move(w), T(-c));
    }
    return *this;
  }

  MultivariatePolynomial operator*(const MultivariatePolynomial& o) const {
    const std::size_t n = std::max(num_vars_, o.num_vars_);
    MultivariatePolynomial r(n);
    for (const auto& [ea, ca] : terms_) {
      for (const auto& [eb, cb] : o.terms_) {
        Exponents e(n, 0);
        for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
        for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
        r.add_term(std::move(e), ca * cb);
      }
    }
    return r;
  }

  MultivariatePolynomial& operator*=(const MultivariatePolynomial& o) { return *this = *this * o; }

  MultivariatePolynomial scaled(const T& s) const {
    MultivariatePolynomial r(num_vars_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }

  friend MultivariatePolynomial operator+(MultivariatePolynomial a, const MultivariatePolynomial& b) {
    return a += b;
  }
  friend MultivariatePolynomial operator-(MultivariatePolynomial a, const MultivariatePolynomial& b) {
    return a -= b;
  }
  friend MultivariatePolynomial operator-(const MultivariatePolynomial& a) { return a.scaled(T(-1)); }

  friend bool operator==(const MultivariatePolynomial& a, const MultivariatePolynomial& b) {
    const std::size_t n = std::max(a.num_vars_, b.num_vars_);
    return a.padded(n).terms_ == b.padded(n).terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << ScalarTraits<T>::to_string(c) << ")";
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) os << "*x" << i << "^" << e[i];
    }
    return os.str();
  }

 private:
  void align(std::size_t other_vars) {
    if (other_vars > num_vars_) *this = padded(other_vars);
  }

  std::size_t num_vars_;
  Terms terms_;
};

template <class T>
struct ScalarTraits<MultivariatePolynomial<T>> {
  static constexpr bool kExact = false;
  static constexpr bool kFloat = false;
  static constexpr bool kField = false;
  static bool is_zero(const MultivariatePolynomial<T>& p) { return p.is_zero(); }
  static std::string to_string(const MultivariatePolynomial<T>& p) { return p.to_string(); }
};

}  // namespace taubethe
