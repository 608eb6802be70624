#pragma once

// Upper half-space model of hyperbolic n-space, H^n = {x + j y : x in V_{n-2}, y > 0}
// with j = i_{n-1}, acted on by SL(2, C_{n-2}) through Möbius transformations.
// The origin o is j itself.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hypdir/clifford.hpp"

namespace hypdir {

inline constexpr double kGeomTol = 1e-9;

struct HPoint {
  CliffordVector re;  // n-1 real coordinates
  double im = 1.0;

  HPoint() = default;
  HPoint(CliffordVector x, double y);

  int dim() const { return static_cast<int>(re.size()) + 1; }

  static HPoint origin(int n);
  // Element x + y i_{n-1} of C_{n-1}.
  Multivector embed() const;
  static HPoint from_multivector(const Multivector& z, double tol = kGeomTol);
};

bool approx_equal(const HPoint& p, const HPoint& q, double tol = 1e-10);

template <class T>
struct BasicGMatrix {
  BasicMultivector<T> a, b, c, d;

  // Entries live in C_m; the matrix acts on H^{m+2}.
  int generators() const { return a.generators(); }
  int space_dim() const { return a.generators() + 2; }

  static BasicGMatrix identity(int n) {
    const int m = n - 2;
    return {BasicMultivector<T>::scalar(m, T(1)), BasicMultivector<T>(m), BasicMultivector<T>(m),
            BasicMultivector<T>::scalar(m, T(1))};
  }

  friend BasicGMatrix operator*(const BasicGMatrix& x, const BasicGMatrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend BasicGMatrix operator-(const BasicGMatrix& x) { return {-x.a, -x.b, -x.c, -x.d}; }
  friend bool operator==(const BasicGMatrix& x, const BasicGMatrix& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
};

using GMatrix = BasicGMatrix<double>;
using ExactGMatrix = BasicGMatrix<Rational>;

// Inverse of an SL(2, C_m) matrix: ((d*, -b*), (-c*, a*)).
template <class T>
BasicGMatrix<T> sl_inverse(const BasicGMatrix<T>& g) {
  return {g.d.reversion(), -g.b.reversion(), -g.c.reversion(), g.a.reversion()};
}

// (a z + b)(c z + d)^{-1} with z an element of C_{m+1}. Throws singular_error when
// c z + d is not invertible. Works for exact and floating-point coefficients.
template <class T>
BasicMultivector<T> mobius(const BasicGMatrix<T>& g, const BasicMultivector<T>& z, const T& tol) {
  const int m1 = z.generators();
  const BasicMultivector<T> num = g.a.embed(m1) * z + g.b.embed(m1);
  const BasicMultivector<T> den = g.c.embed(m1) * z + g.d.embed(m1);
  return num * den.inverse(tol);
}

bool is_sl(const GMatrix& g, double tol = kGeomTol);
bool is_su(const GMatrix& g, double tol = 1e-10);

// Sign-normalised representative in PSL: the first non-negligible coefficient of a
// (else of b) is positive.
GMatrix canonical(const GMatrix& g);
// Entrywise comparison up to the global sign.
bool approx_equal_psl(const GMatrix& g, const GMatrix& h, double tol = 1e-10);

GMatrix to_double(const ExactGMatrix& g);

HPoint mobius_apply(const GMatrix& g, const HPoint& z);
// Action on the boundary V_{n-2} u {inf}; nullopt stands for the point at infinity.
std::optional<CliffordVector> mobius_boundary(const GMatrix& g, const std::optional<CliffordVector>& x);

// Hyperbolic distance from the metric (|dx|^2 + dy^2) / y^2.
double hyp_distance(const HPoint& p, const HPoint& q);
double cosh_distance(const HPoint& p, const HPoint& q);
inline double distance_from_origin(const HPoint& p) { return hyp_distance(p, HPoint::origin(p.dim())); }

// Unit vector in R^n giving the direction of z as seen from o (ball-model chart,
// conformal at o). Throws std::domain_error for z = o.
std::vector<double> direction_vector(const HPoint& z);
// Point at hyperbolic distance r from o in direction u (inverse of direction_vector).
HPoint point_in_direction(std::span<const double> u, double r);
// The point on the unit sphere about o on the ray from o through z.
HPoint radial_project(const HPoint& z);
// Angle between two unit vectors.
double angle_between(std::span<const double> u, std::span<const double> v);

struct Iwasawa {
  CliffordVector x;
  double y = 1.0;
  GMatrix k;
};
// g = n(x) a(y) k, with (x, y) the coordinates of g o.
Iwasawa iwasawa_decompose(const GMatrix& g);

GMatrix translate(const CliffordVector& x);  // n(x)
GMatrix dilate(int n, double y);             // a(y)
GMatrix flow(int n, double t);               // Phi^t = a(e^t)
GMatrix rotate_E(const CliffordVector& x);   // E(x) = exp((0, x), (-x', 0))
// k(theta) = ((cos, -sin), (sin, cos)) for n = 2.
GMatrix rotation2(double theta);
// Element ((a, b), (-b', a')) of SU(2, C_1) from a unit quaternion (q0, q1, q2, q3).
GMatrix su2_from_quaternion(std::span<const double> q);

enum class StandardKind { flow, translate, dilate, rotate_E };
struct StandardParam {
  int n = 2;
  double scalar = 0.0;     // flow t, dilate y
  CliffordVector vector;  // translate x, rotate_E x
};
GMatrix standard_matrix(StandardKind kind, const StandardParam& param);

// ---------------------------------------------------------------------------
// Regions, cones, volumes.

struct Box {
  std::vector<double> lo, hi;
};
struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};
using Region = std::variant<Box, Ball>;

int region_dim(const Region& r);
bool region_contains(const Region& r, std::span<const double> x);
double region_volume(const Region& r);
// Axis-aligned bounding box.
Box region_bounds(const Region& r);

// Z(a, b, A) = {Re z in scale * base, e^a <= Im z < e^b}.
struct CuspidalCone {
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  Region base;
  double scale = 1.0;
};

struct SphericalCap {
  std::vector<double> center;  // unit vector in R^n
  double angular_radius = std::numbers::pi;
};

// C(a, b, B) = {z : direction(z) in B, a < d(o, z) <= b}.
struct RadialCone {
  double a = 0.0;
  double b = 1.0;
  SphericalCap cap;
};

bool cone_contains(const CuspidalCone& cone, const HPoint& z);
bool cone_contains(const RadialCone& cone, const HPoint& z);
double cone_volume(const CuspidalCone& cone, int n);
double cone_volume(const RadialCone& cone, int n);

// Omega_n, the Euclidean volume of the unit sphere in R^n.
double solid_angle(int n);
// omega-measure of a cap of given angular radius on S^{n-1}.
double cap_measure(int n, double angular_radius);
double cap_radius_for_measure(int n, double measure);
// Omega_n * int_a^b sinh^{n-1}(r) dr.
double shell_volume(int n, double a, double b);

// Open disc of omega-measure Omega_n sigma / N centred at v; whole sphere once saturated.
SphericalCap scaled_disc(int n, double sigma, std::span<const double> v, std::size_t count);

}  // namespace hypdir
