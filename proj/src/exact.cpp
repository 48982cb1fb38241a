#include "spinchain/exact.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>

namespace spinchain {

std::string rational_str(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

std::string GaussRational::str() const {
  std::string out = rational_str(re);
  if (im >= 0) {
    out += "+" + rational_str(im) + "*i";
  } else {
    out += "-" + rational_str(-im) + "*i";
  }
  return out;
}

namespace {

// Reads "p" or "p/q" (digits only, sign handled by the caller) at pos.
Rational read_rational(const std::string& s, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos == start) throw std::invalid_argument("bad coefficient: " + s);
  Rational num(s.substr(start, pos - start));
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    std::size_t dstart = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (dstart == pos) throw std::invalid_argument("bad coefficient: " + s);
    Rational den(s.substr(dstart, pos - dstart));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    num /= den;
  }
  return num;
}

}  // namespace

GaussRational parse_gauss_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty coefficient");

  GaussRational out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
      neg = (s[pos] == '-');
      ++pos;
    }
    Rational mag;
    bool imag = false;
    if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'I')) {
      mag = 1;  // bare "i" / "-i"
      imag = true;
      ++pos;
    } else {
      mag = read_rational(s, pos);
      if (pos < s.size() && s[pos] == '*') ++pos;
      if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'I')) {
        imag = true;
        ++pos;
      }
    }
    if (neg) mag = -mag;
    if (imag)
      out.im += mag;
    else
      out.re += mag;
  }
  return out;
}

}  // namespace spinchain
