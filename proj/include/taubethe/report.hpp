#pragma once

// JSON encoding of scalars: decimal strings at full working precision plus an
// exact hexadecimal mantissa/exponent form, and the parser for config scalars
// ("p/r", "1.25", "a+bi", "-3i").

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "taubethe/error.hpp"
#include "taubethe/partition.hpp"
#include "taubethe/scalar.hpp"

namespace taubethe::report {

using json = nlohmann::json;

/// "0x<hex mantissa>p<exp>" with an integer mantissa, exact for the given precision.
template <unsigned Bits>
std::string hex_float(const RealOf<Bits>& x) {
  if (x == 0) return "0x0p+0";
  int e = 0;
  RealOf<Bits> m = frexp(abs(x), &e);
  m = ldexp(m, static_cast<int>(Bits));
  mp::cpp_int mant = static_cast<mp::cpp_int>(m);
  int shift = e - static_cast<int>(Bits);
  while (mant != 0 && (mant & 1) == 0) {
    mant >>= 1;
    ++shift;
  }
  std::string s = x < 0 ? "-0x" : "0x";
  s += mant.str(0, std::ios_base::hex);
  s += "p";
  s += shift >= 0 ? "+" + std::to_string(shift) : std::to_string(shift);
  return s;
}

std::string hex_float(double x);
std::string decimal(double x);

template <unsigned Bits>
std::string decimal(const RealOf<Bits>& x) {
  return x.str(std::numeric_limits<RealOf<Bits>>::max_digits10, std::ios_base::scientific);
}

/// {"dec": ..., "hex": ...}
json real_entry(double x);

template <unsigned Bits>
json real_entry(const RealOf<Bits>& x) {
  return json{{"dec", decimal(x)}, {"hex", hex_float(x)}};
}

template <unsigned Bits>
json complex_entry(const ComplexOf<Bits>& z) {
  return json{{"re", decimal(z.real())}, {"im", decimal(z.imag())}, {"re_hex", hex_float(z.real())},
              {"im_hex", hex_float(z.imag())}};
}

inline json complex_entry(const Rational& r) { return json{{"exact", r.str()}}; }

template <class C>
json complex_list(const std::vector<C>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(complex_entry(x));
  return a;
}

/// Parses "p", "p/r" into a Rational; rejects anything else.
Rational parse_rational(const std::string& s);

/// Real part / imaginary part strings of a config scalar. Each part is
/// either a rational "p/r" or a decimal literal.
struct ScalarText {
  std::string re;
  std::string im;
};
ScalarText split_complex(const std::string& s);

template <unsigned Bits>
RealOf<Bits> parse_real_part(const std::string& s) {
  if (s.empty()) return RealOf<Bits>(0);
  if (s.find('/') != std::string::npos) {
    const Rational r = parse_rational(s);
    return RealOf<Bits>(numerator(r)) / RealOf<Bits>(denominator(r));
  }
  try {
    std::size_t used = 0;
    (void)std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "cannot parse number '" + s + "'");
  }
  return RealOf<Bits>(s);
}

template <unsigned Bits>
ComplexOf<Bits> parse_complex(const std::string& s) {
  const auto t = split_complex(s);
  return ComplexOf<Bits>(parse_real_part<Bits>(t.re), parse_real_part<Bits>(t.im));
}

}  // namespace taubethe::report
