#pragma once

// Gaussian integers and 2x2 matrices over them. The modular group uses the
// subring Z (imaginary parts zero), the Picard group all of Z[i].

#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <tuple>

namespace hypdir {

struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  constexpr GaussInt() = default;
  constexpr GaussInt(std::int64_t r, std::int64_t i = 0) : re(r), im(i) {}  // NOLINT(implicit)

  constexpr std::int64_t norm() const { return re * re + im * im; }
  constexpr GaussInt conj() const { return {re, -im}; }
  constexpr bool is_zero() const { return re == 0 && im == 0; }
  constexpr bool is_unit() const { return norm() == 1; }

  friend constexpr GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
  friend constexpr GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
  friend constexpr GaussInt operator-(GaussInt a) { return {-a.re, -a.im}; }
  friend constexpr GaussInt operator*(GaussInt a, GaussInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend constexpr bool operator==(GaussInt a, GaussInt b) { return a.re == b.re && a.im == b.im; }
  friend constexpr bool operator<(GaussInt a, GaussInt b) { return std::tie(a.re, a.im) < std::tie(b.re, b.im); }

  friend std::ostream& operator<<(std::ostream& os, GaussInt z) {
    if (z.im == 0) return os << z.re;
    return os << '(' << z.re << (z.im < 0 ? "-" : "+") << std::llabs(z.im) << "i)";
  }
};

// Division with remainder, quotient rounded to the nearest Gaussian integer;
// |remainder|^2 <= |b|^2 / 2.
GaussInt round_div(GaussInt a, GaussInt b);
GaussInt gauss_gcd(GaussInt a, GaussInt b);
// Solves x a + y b = g with g = gcd(a, b); returns (g, x, y).
std::tuple<GaussInt, GaussInt, GaussInt> gauss_ext_gcd(GaussInt a, GaussInt b);
// Multiplicative inverse of a unit.
GaussInt unit_inverse(GaussInt u);

struct IntMatrix {
  GaussInt a{1}, b{0}, c{0}, d{1};

  GaussInt det() const { return a * d - b * c; }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

// Inverse of a determinant-one matrix.
inline IntMatrix inverse(const IntMatrix& m) { return {m.d, -m.b, -m.c, m.a}; }

}  // namespace hypdir
