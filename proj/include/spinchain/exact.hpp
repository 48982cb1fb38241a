#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace spinchain {

using Rational = boost::multiprecision::cpp_rational;

// Exact complex number with rational real and imaginary parts.
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(Rational r) : re(std::move(r)) {}
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussRational(long num, long den) : re(Rational(num, den)) {}

  static GaussRational one() { return GaussRational(Rational(1)); }
  static GaussRational i() { return GaussRational(Rational(0), Rational(1)); }

  bool is_zero() const { return re == 0 && im == 0; }

  GaussRational operator-() const { return {-re, -im}; }

  GaussRational& operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) {
    return a += b;
  }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) {
    return a -= b;
  }
  friend GaussRational operator*(const GaussRational& a,
                                 const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  // Multiplies by i^power (power taken mod 4).
  GaussRational times_i_pow(int power) const {
    switch (((power % 4) + 4) % 4) {
      case 0: return *this;
      case 1: return {-im, re};
      case 2: return {-re, -im};
      default: return {im, -re};
    }
  }

  std::complex<double> to_complex() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
  }

  // Prints the fixed exact format "p/q+r/s*i" (used by operator dumps).
  std::string str() const;
};

std::string rational_str(const Rational& r);

// Parses "p", "p/q", "p/q+r/s*i", "i", "-i", "r*i" and similar forms.
GaussRational parse_gauss_rational(const std::string& text);

}  // namespace spinchain
