#pragma once

// Coefficient domains. Every algorithm in the library is a template over one
// of these; arithmetic never mixes domains.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace taubethe {

namespace mp = boost::multiprecision;

using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using BigInt = mp::number<mp::gmp_int, mp::et_off>;

template <unsigned Bits>
using RealOf = mp::number<mp::cpp_bin_float<Bits, mp::digit_base_2>, mp::et_off>;

template <unsigned Bits>
using ComplexOf = mp::number<mp::complex_adaptor<mp::cpp_bin_float<Bits, mp::digit_base_2>>, mp::et_off>;

using Real128 = RealOf<128>;
using Complex128 = ComplexOf<128>;
using Real256 = RealOf<256>;
using Complex256 = ComplexOf<256>;
using ComplexD = std::complex<double>;

/// Per-domain facts the generic algorithms dispatch on.
template <class T>
struct ScalarTraits {
  static constexpr bool kExact = false;
  static constexpr bool kFloat = false;
  static constexpr bool kField = false;
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static constexpr bool kFloat = false;
  static constexpr bool kField = true;
  static constexpr unsigned kBits = 0;

  static double magnitude(const Rational& x) { return static_cast<double>(abs(x)); }
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool close(const Rational& a, const Rational& b) { return a == b; }
  static std::string to_string(const Rational& x) { return x.str(); }
};

template <unsigned Bits>
struct ScalarTraits<ComplexOf<Bits>> {
  using Real = RealOf<Bits>;
  static constexpr bool kExact = false;
  static constexpr bool kFloat = true;
  static constexpr bool kField = true;
  static constexpr unsigned kBits = Bits;

  static double magnitude(const ComplexOf<Bits>& x) { return static_cast<double>(abs(x)); }
  static bool is_zero(const ComplexOf<Bits>& x) { return x == 0; }
  /// Relative tolerance 2^-(Bits-24) scaled by operand magnitude.
  static Real tolerance() { return ldexp(Real(1), -static_cast<int>(Bits) + 24); }
  static bool close(const ComplexOf<Bits>& a, const ComplexOf<Bits>& b) {
    Real scale = std::max(abs(a), abs(b));
    return abs(a - b) <= tolerance() * scale;
  }
  static std::string to_string(const ComplexOf<Bits>& x) {
    return "(" + x.real().str(std::numeric_limits<Real>::max_digits10, std::ios_base::scientific) + "," +
           x.imag().str(std::numeric_limits<Real>::max_digits10, std::ios_base::scientific) + ")";
  }
};

template <>
struct ScalarTraits<ComplexD> {
  using Real = double;
  static constexpr bool kExact = false;
  static constexpr bool kFloat = true;
  static constexpr bool kField = true;
  static constexpr unsigned kBits = 53;

  static double magnitude(const ComplexD& x) { return std::abs(x); }
  static bool is_zero(const ComplexD& x) { return x == 0.0; }
  static double tolerance() { return std::ldexp(1.0, -53 + 24); }
  static bool close(const ComplexD& a, const ComplexD& b) {
    return std::abs(a - b) <= tolerance() * std::max(std::abs(a), std::abs(b));
  }
  static std::string to_string(const ComplexD& x) {
    return "(" + std::to_string(x.real()) + "," + std::to_string(x.imag()) + ")";
  }
};

template <class T>
concept ExactScalar = ScalarTraits<T>::kExact;

template <class T>
concept FloatScalar = ScalarTraits<T>::kFloat;

template <class T>
concept FieldScalar = ScalarTraits<T>::kField;

template <class T>
double magnitude(const T& x) {
  return ScalarTraits<T>::magnitude(x);
}

/// |a-b| / max(|a|,|b|), 0 when both vanish.
template <class T>
double relative_difference(const T& a, const T& b) {
  double scale = std::max(magnitude(a), magnitude(b));
  if (scale == 0.0) return 0.0;
  return magnitude(T(a - b)) / scale;
}

/// Integer power with negative exponents allowed in a field.
template <class T>
T power(const T& base, int exponent) {
  if (exponent < 0) {
    return T(1) / power(base, -exponent);
  }
  T result(1);
  T b = base;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) result *= b;
    e >>= 1;
    if (e != 0) b *= b;
  }
  return result;
}

/// Converts a value of one complex precision to another (or from double).
template <class To, class From>
To convert_complex(const From& v) {
  using std::imag;
  using std::real;
  if constexpr (std::is_same_v<To, ComplexD>) {
    return ComplexD(static_cast<double>(real(v)), static_cast<double>(imag(v)));
  } else {
    using R = typename ScalarTraits<To>::Real;
    return To(R(real(v)), R(imag(v)));
  }
}

}  // namespace taubethe
