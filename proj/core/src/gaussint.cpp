#include "hypdir/gaussint.hpp"

#include <cmath>
#include <stdexcept>

#include "hypdir/rational.hpp"

namespace hypdir {

namespace {

// Nearest integer to p / q for q > 0, ties rounded down.
std::int64_t nearest_quotient(std::int64_t p, std::int64_t q) {
  const int128 twice = 2 * static_cast<int128>(p) + q;
  const int128 den = 2 * static_cast<int128>(q);
  int128 f = twice / den;
  if (twice % den != 0 && twice < 0) --f;
  return static_cast<std::int64_t>(f);
}

}  // namespace

GaussInt round_div(GaussInt a, GaussInt b) {
  const std::int64_t n = b.norm();
  if (n == 0) throw std::domain_error("Gaussian division by zero");
  const GaussInt num = a * b.conj();
  return {nearest_quotient(num.re, n), nearest_quotient(num.im, n)};
}

GaussInt gauss_gcd(GaussInt a, GaussInt b) {
  while (!b.is_zero()) {
    const GaussInt r = a - round_div(a, b) * b;
    a = b;
    b = r;
  }
  return a;
}

std::tuple<GaussInt, GaussInt, GaussInt> gauss_ext_gcd(GaussInt a, GaussInt b) {
  GaussInt x0{1}, y0{0}, x1{0}, y1{1};
  while (!b.is_zero()) {
    const GaussInt q = round_div(a, b);
    const GaussInt r = a - q * b;
    a = b;
    b = r;
    const GaussInt x2 = x0 - q * x1;
    const GaussInt y2 = y0 - q * y1;
    x0 = x1;
    y0 = y1;
    x1 = x2;
    y1 = y2;
  }
  return {a, x0, y0};
}

GaussInt unit_inverse(GaussInt u) {
  if (!u.is_unit()) throw std::domain_error("not a unit");
  return u.conj();
}

}  // namespace hypdir
