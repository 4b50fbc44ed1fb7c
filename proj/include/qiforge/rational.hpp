#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "qiforge/errors.hpp"

namespace qiforge {

/// Exact rational on 64-bit parts, normalized (gcd 1, positive denominator).
/// Used for fitted quasi-isometry constants and isoperimetric ratios, where
/// numerators and denominators stay small (window sizes, word distances).
/// An infinite value (den == 0, num == 1) stands for "no finite constant".
struct Ratio {
  long long num = 0;
  long long den = 1;

  Ratio() = default;
  Ratio(long long n) : num(n), den(1) {}
  Ratio(long long n, long long d) : num(n), den(d) { normalize(); }

  static Ratio infinity() {
    Ratio r;
    r.num = 1;
    r.den = 0;
    return r;
  }

  bool is_infinite() const { return den == 0; }

  void normalize() {
    if (den == 0) {
      num = 1;
      return;
    }
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Ratio& a, const Ratio& b) { return !(a == b); }

  // Cross-multiplication in 128-bit; operands in this project stay far below
  // the point where that could overflow.
  friend bool operator<(const Ratio& a, const Ratio& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }
  friend bool operator>(const Ratio& a, const Ratio& b) { return b < a; }
  friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }

  friend Ratio operator+(const Ratio& a, const Ratio& b) {
    return Ratio(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Ratio operator-(const Ratio& a, const Ratio& b) {
    return Ratio(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Ratio operator*(const Ratio& a, const Ratio& b) {
    return Ratio(a.num * b.num, a.den * b.den);
  }
  friend Ratio operator/(const Ratio& a, const Ratio& b) {
    if (b.num == 0) return infinity();
    return Ratio(a.num * b.den, a.den * b.num);
  }

  long long floor() const {
    if (is_infinite()) throw spec_error("floor of infinite ratio");
    long long q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q;
  }
  long long ceil() const {
    if (is_infinite()) throw spec_error("ceil of infinite ratio");
    long long q = num / den;
    if (num % den != 0 && num > 0) ++q;
    return q;
  }

  /// "p/q" (or plain "p" when integral, "inf" when infinite).
  std::string str() const {
    if (is_infinite()) return "inf";
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  /// Fixed-point decimal with `digits` places, round half away from zero.
  /// Integer arithmetic only, so output is platform-independent.
  std::string decimal(int digits = 6) const {
    if (is_infinite()) return "inf";
    long long scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    __int128 scaled = static_cast<__int128>(num) * scale;
    bool neg = scaled < 0;
    __int128 mag = neg ? -scaled : scaled;
    __int128 rounded = (mag + den / 2) / den;
    long long whole = static_cast<long long>(rounded / scale);
    long long frac = static_cast<long long>(rounded % scale);
    std::string f = std::to_string(frac);
    f.insert(f.begin(), static_cast<size_t>(digits) - f.size(), '0');
    return (neg ? "-" : "") + std::to_string(whole) + "." + f;
  }

  friend std::ostream& operator<<(std::ostream& os, const Ratio& r) { return os << r.str(); }
};

}  // namespace qiforge
