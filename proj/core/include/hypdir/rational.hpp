#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace hypdir {

__extension__ using int128 = __int128;

class overflow_error : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Exact rational number with 64-bit numerator and denominator.
///
/// Intermediate products are formed in 128 bits and checked on the way back
/// down, so an operation either returns the exact result or throws
/// overflow_error. Always stored in lowest terms with a positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  explicit operator double() const { return to_double(); }

  Rational operator-() const { return from128(-static_cast<int128>(num_), den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const int128 n = static_cast<int128>(a.num_) * b.den_ + static_cast<int128>(b.num_) * a.den_;
    const int128 d = static_cast<int128>(a.den_) * b.den_;
    return from128(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<int128>(a.num_) * b.num_, static_cast<int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from128(static_cast<int128>(a.num_) * b.den_, static_cast<int128>(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<int128>(a.num_) * b.den_ < static_cast<int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num_;
    if (r.den_ != 1) os << '/' << r.den_;
    return os;
  }

 private:
  static int128 gcd128(int128 a, int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from128(int128 n, int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr int128 lo = INT64_MIN + 1;
    constexpr int128 hi = INT64_MAX;
    if (n < lo || n > hi || d > hi) throw overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) { *this = from128(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

}  // namespace hypdir
