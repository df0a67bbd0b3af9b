#include "taubethe/report.hpp"

#include <cctype>
#include <cstdio>
#include <regex>
#include <sstream>

namespace taubethe::report {

std::string hex_float(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

std::string decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json real_entry(double x) { return json{{"dec", decimal(x)}, {"hex", hex_float(x)}}; }

Rational parse_rational(const std::string& s) {
  static const std::regex re(R"(^([+-]?[0-9]+)(?:/([0-9]+))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw Error(ErrorKind::InvalidInput, "not a rational: '" + s + "'");
  const BigInt num(m[1].str());
  const BigInt den(m[2].matched ? m[2].str() : std::string("1"));
  if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + s + "'");
  return Rational(num, den);
}

ScalarText split_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorKind::InvalidInput, "empty number");
  if (s.back() != 'i') return {s, ""};
  s.pop_back();
  // Split at the last sign that is not leading and not an exponent sign.
  std::size_t pos = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      pos = k;
      break;
    }
  }
  std::string re = pos == std::string::npos ? "" : s.substr(0, pos);
  std::string im = pos == std::string::npos ? s : s.substr(pos);
  if (im.empty() || im == "+") im = "1";
  else if (im == "-") im = "-1";
  if (im[0] == '+') im.erase(0, 1);
  return {re, im};
}

}  // namespace taubethe::report
