#pragma once

// Clifford algebra C_m: real associative algebra on generators i_1..i_m with
// i_l^2 = -1 and i_j i_l = -i_l i_j (j != l). Elements are stored densely as
// 2^m coefficients indexed by blade bitmask; bit l-1 set means i_l is a factor,
// factors taken in increasing order.

#include <bit>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hypdir/errors.hpp"
#include "hypdir/rational.hpp"

namespace hypdir {

inline constexpr int kMaxGenerators = 8;

enum class Involution { main, reversion, conjugation };

namespace detail {

// Sign of e_a * e_b relative to e_{a^b}: transpositions needed to sort the
// concatenated generator list, plus one -1 per generator squared.
constexpr int blade_product_sign(unsigned a, unsigned b) {
  int swaps = 0;
  for (unsigned s = a >> 1; s != 0; s >>= 1) swaps += std::popcount(s & b);
  swaps += std::popcount(a & b);
  return (swaps & 1) ? -1 : 1;
}

constexpr int involution_sign(unsigned mask, Involution kind) {
  const int k = std::popcount(mask);
  switch (kind) {
    case Involution::main:
      return (k & 1) ? -1 : 1;
    case Involution::reversion:
      return ((k * (k - 1) / 2) & 1) ? -1 : 1;
    case Involution::conjugation:
      return ((k * (k + 1) / 2) & 1) ? -1 : 1;
  }
  return 1;
}

inline void check_generators(int m) {
  if (m < 0 || m > kMaxGenerators) {
    throw dimension_error("Clifford generator count must be in [0, " + std::to_string(kMaxGenerators) +
                          "], got " + std::to_string(m));
  }
}

}  // namespace detail

template <class T>
class BasicMultivector {
 public:
  using value_type = T;

  BasicMultivector() : BasicMultivector(0) {}
  explicit BasicMultivector(int m) : m_(m) {
    detail::check_generators(m);
    coeffs_.assign(std::size_t{1} << m, T(0));
  }
  BasicMultivector(int m, std::initializer_list<T> coeffs) : BasicMultivector(m) {
    if (coeffs.size() != coeffs_.size()) throw dimension_error("coefficient count must be 2^m");
    std::size_t i = 0;
    for (const T& c : coeffs) coeffs_[i++] = c;
  }

  static BasicMultivector scalar(int m, T value) {
    BasicMultivector r(m);
    r.coeffs_[0] = value;
    return r;
  }
  // i_l, 1-based as in the usual notation.
  static BasicMultivector generator(int m, int l) {
    if (l < 1 || l > m) throw dimension_error("generator index out of range");
    return blade(m, 1u << (l - 1));
  }
  static BasicMultivector blade(int m, unsigned mask, T coeff = T(1)) {
    BasicMultivector r(m);
    if (mask >= r.coeffs_.size()) throw dimension_error("blade mask out of range");
    r.coeffs_[mask] = coeff;
    return r;
  }
  // x_0 + x_1 i_1 + ... + x_m i_m.
  static BasicMultivector vector(int m, std::span<const T> x) {
    if (static_cast<int>(x.size()) != m + 1) throw dimension_error("Clifford vector needs m+1 components");
    BasicMultivector r(m);
    r.coeffs_[0] = x[0];
    for (int l = 1; l <= m; ++l) r.coeffs_[1u << (l - 1)] = x[l];
    return r;
  }

  int generators() const { return m_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const T> coeffs() const { return coeffs_; }
  const T& operator[](unsigned mask) const { return coeffs_[mask]; }
  T& operator[](unsigned mask) { return coeffs_[mask]; }

  T scalar_part() const { return coeffs_[0]; }

  T norm2() const {
    T s(0);
    for (const T& c : coeffs_) s += c * c;
    return s;
  }

  BasicMultivector involution(Involution kind) const {
    BasicMultivector r(*this);
    for (unsigned mask = 0; mask < r.coeffs_.size(); ++mask) {
      if (detail::involution_sign(mask, kind) < 0) r.coeffs_[mask] = -r.coeffs_[mask];
    }
    return r;
  }
  BasicMultivector main() const { return involution(Involution::main); }
  BasicMultivector reversion() const { return involution(Involution::reversion); }
  BasicMultivector conjugation() const { return involution(Involution::conjugation); }

  // Same element viewed in C_{m2}, m2 >= m.
  BasicMultivector embed(int m2) const {
    if (m2 < m_) throw dimension_error("cannot embed into a smaller algebra");
    BasicMultivector r(m2);
    for (unsigned mask = 0; mask < coeffs_.size(); ++mask) r.coeffs_[mask] = coeffs_[mask];
    return r;
  }

  // Support check against a set of allowed blades.
  bool supported_on_vectors(const T& tol) const {
    for (unsigned mask = 0; mask < coeffs_.size(); ++mask) {
      if (std::popcount(mask) > 1 && !small(coeffs_[mask], tol)) return false;
    }
    return true;
  }
  bool is_scalar(const T& tol) const {
    for (unsigned mask = 1; mask < coeffs_.size(); ++mask) {
      if (!small(coeffs_[mask], tol)) return false;
    }
    return true;
  }
  bool is_zero() const {
    for (const T& c : coeffs_) {
      if (!(c == T(0))) return false;
    }
    return true;
  }

  // Inverse of an element of the Clifford group, a^{-1} = conj(a) / (a conj(a)).
  // Throws singular_error if a*conj(a) is not a nonzero scalar.
  BasicMultivector inverse(const T& tol) const {
    const BasicMultivector bar = conjugation();
    const BasicMultivector p = (*this) * bar;
    const T n = p.scalar_part();
    if (small(n, tol)) throw singular_error("element is not invertible");
    if (!p.is_scalar(tol * abs_of(n))) throw singular_error("element is not in the Clifford group");
    return bar * (T(1) / n);
  }

  BasicMultivector& operator+=(const BasicMultivector& o) {
    same_dim(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  BasicMultivector& operator-=(const BasicMultivector& o) {
    same_dim(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  BasicMultivector& operator*=(const T& s) {
    for (T& c : coeffs_) c *= s;
    return *this;
  }

  friend BasicMultivector operator+(BasicMultivector a, const BasicMultivector& b) { return a += b; }
  friend BasicMultivector operator-(BasicMultivector a, const BasicMultivector& b) { return a -= b; }
  friend BasicMultivector operator-(BasicMultivector a) {
    for (T& c : a.coeffs_) c = -c;
    return a;
  }
  friend BasicMultivector operator*(BasicMultivector a, const T& s) { return a *= s; }
  friend BasicMultivector operator*(const T& s, BasicMultivector a) { return a *= s; }

  // Geometric product.
  friend BasicMultivector operator*(const BasicMultivector& a, const BasicMultivector& b) {
    a.same_dim(b);
    BasicMultivector r(a.m_);
    const unsigned n = static_cast<unsigned>(a.coeffs_.size());
    for (unsigned i = 0; i < n; ++i) {
      if (a.coeffs_[i] == T(0)) continue;
      for (unsigned j = 0; j < n; ++j) {
        if (b.coeffs_[j] == T(0)) continue;
        const T term = a.coeffs_[i] * b.coeffs_[j];
        if (detail::blade_product_sign(i, j) > 0) {
          r.coeffs_[i ^ j] += term;
        } else {
          r.coeffs_[i ^ j] -= term;
        }
      }
    }
    return r;
  }

  friend bool operator==(const BasicMultivector& a, const BasicMultivector& b) {
    return a.m_ == b.m_ && a.coeffs_ == b.coeffs_;
  }

  friend std::ostream& operator<<(std::ostream& os, const BasicMultivector& a) {
    bool first = true;
    for (unsigned mask = 0; mask < a.coeffs_.size(); ++mask) {
      if (a.coeffs_[mask] == T(0)) continue;
      if (!first) os << " + ";
      first = false;
      os << a.coeffs_[mask];
      for (int l = 0; l < a.m_; ++l) {
        if (mask & (1u << l)) os << "*i" << (l + 1);
      }
    }
    if (first) os << "0";
    return os;
  }

 private:
  static T abs_of(const T& v) { return v < T(0) ? -v : v; }
  static bool small(const T& v, const T& tol) { return !(tol < abs_of(v)); }

  void same_dim(const BasicMultivector& o) const {
    if (o.m_ != m_) {
      throw dimension_error("Clifford algebras differ: C_" + std::to_string(m_) + " vs C_" + std::to_string(o.m_));
    }
  }

  int m_ = 0;
  std::vector<T> coeffs_;
};

using Multivector = BasicMultivector<double>;
using ExactMultivector = BasicMultivector<Rational>;

inline double norm(const Multivector& a) { return std::sqrt(a.norm2()); }

// Euclidean distance in coefficient space.
inline double distance(const Multivector& a, const Multivector& b) { return norm(a - b); }

inline bool approx_equal(const Multivector& a, const Multivector& b, double tol = 1e-12) {
  return a.generators() == b.generators() && distance(a, b) <= tol;
}

// Element x_0 + x_1 i_1 + ... + x_m i_m of V_m, identified with R^{m+1}.
class CliffordVector {
 public:
  CliffordVector() = default;
  explicit CliffordVector(int m) : x_(static_cast<std::size_t>(m) + 1, 0.0) { detail::check_generators(m); }
  explicit CliffordVector(std::vector<double> components) : x_(std::move(components)) {
    if (x_.empty()) throw dimension_error("Clifford vector needs at least one component");
    detail::check_generators(static_cast<int>(x_.size()) - 1);
  }
  CliffordVector(std::initializer_list<double> components) : CliffordVector(std::vector<double>(components)) {}

  int generators() const { return static_cast<int>(x_.size()) - 1; }
  std::size_t size() const { return x_.size(); }
  std::span<const double> components() const { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }
  double& operator[](std::size_t i) { return x_[i]; }

  double norm2() const {
    double s = 0;
    for (double v : x_) s += v * v;
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  Multivector to_multivector() const { return Multivector::vector(generators(), x_); }

  // Reads the vector part of a multivector; throws if it has support outside V_m.
  static CliffordVector from_multivector(const Multivector& a, double tol = 1e-12);

  friend bool operator==(const CliffordVector&, const CliffordVector&) = default;

 private:
  std::vector<double> x_;
};

// x^{-1} = conj(x) / |x|^2.
CliffordVector vector_inverse(const CliffordVector& x);

}  // namespace hypdir
