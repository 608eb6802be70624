#include "hypdir/halfspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace hypdir {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int n) {
  if (n < 2 || n > kMaxGenerators + 2) throw dimension_error("hyperbolic dimension out of range");
}

double max_abs(const GMatrix& g) {
  double s = 0;
  for (const Multivector* e : {&g.a, &g.b, &g.c, &g.d}) {
    for (double v : e->coeffs()) s = std::max(s, std::abs(v));
  }
  return s;
}

std::vector<double> to_rn(const HPoint& z) {
  std::vector<double> p(z.re.components().begin(), z.re.components().end());
  p.push_back(z.im);
  return p;
}

// Inversion in the sphere of radius sqrt(2) about -e_n: swaps the upper half-space
// and the unit ball, sending e_n (the origin o) to 0.
std::vector<double> cayley(std::span<const double> p) {
  const std::size_t n = p.size();
  std::vector<double> q(p.begin(), p.end());
  q[n - 1] += 1.0;
  double q2 = 0;
  for (double v : q) q2 += v * v;
  for (double& v : q) v *= 2.0 / q2;
  q[n - 1] -= 1.0;
  return q;
}

}  // namespace

HPoint::HPoint(CliffordVector x, double y) : re(std::move(x)), im(y) {
  if (!(y > 0.0) || !std::isfinite(y)) throw std::domain_error("point of H^n needs positive finite height");
}

HPoint HPoint::origin(int n) {
  check_dim(n);
  return HPoint(CliffordVector(n - 2), 1.0);
}

Multivector HPoint::embed() const {
  const int m1 = static_cast<int>(re.size());  // n - 1 generators
  Multivector z(m1);
  z[0] = re[0];
  for (int l = 1; l < m1; ++l) z[1u << (l - 1)] = re[static_cast<std::size_t>(l)];
  z[1u << (m1 - 1)] = im;
  return z;
}

HPoint HPoint::from_multivector(const Multivector& z, double tol) {
  const double scale = std::max(1.0, norm(z));
  if (!z.supported_on_vectors(tol * scale)) throw std::domain_error("Möbius image left V_{n-1}");
  const int m1 = z.generators();
  CliffordVector x(m1 - 1);
  x[0] = z[0];
  for (int l = 1; l < m1; ++l) x[static_cast<std::size_t>(l)] = z[1u << (l - 1)];
  return HPoint(std::move(x), z[1u << (m1 - 1)]);
}

bool approx_equal(const HPoint& p, const HPoint& q, double tol) {
  if (p.re.size() != q.re.size()) return false;
  double d2 = (p.im - q.im) * (p.im - q.im);
  for (std::size_t i = 0; i < p.re.size(); ++i) d2 += (p.re[i] - q.re[i]) * (p.re[i] - q.re[i]);
  return std::sqrt(d2) <= tol;
}

bool is_sl(const GMatrix& g, double tol) {
  const int m = g.generators();
  if (g.b.generators() != m || g.c.generators() != m || g.d.generators() != m) return false;
  const double scale = std::max(1.0, max_abs(g) * max_abs(g));
  const Multivector det = g.a * g.d.reversion() - g.b * g.c.reversion();
  if (!det.is_scalar(tol * scale) || std::abs(det[0] - 1.0) > tol * scale) return false;
  for (const Multivector& p : {g.a * g.b.reversion(), g.c * g.d.reversion(), g.c.reversion() * g.a,
                               g.d.reversion() * g.b}) {
    if (!p.supported_on_vectors(tol * scale)) return false;
  }
  return true;
}

bool is_su(const GMatrix& g, double tol) {
  if (!is_sl(g, tol)) return false;
  return approx_equal(g.c, -g.b.main(), tol) && approx_equal(g.d, g.a.main(), tol);
}

GMatrix canonical(const GMatrix& g) {
  const double cut = 1e-12 * std::max(1.0, max_abs(g));
  for (const Multivector* e : {&g.a, &g.b}) {
    for (double v : e->coeffs()) {
      if (std::abs(v) > cut) return v < 0 ? -g : g;
    }
  }
  return g;
}

bool approx_equal_psl(const GMatrix& g, const GMatrix& h, double tol) {
  const GMatrix cg = canonical(g);
  const GMatrix ch = canonical(h);
  return approx_equal(cg.a, ch.a, tol) && approx_equal(cg.b, ch.b, tol) && approx_equal(cg.c, ch.c, tol) &&
         approx_equal(cg.d, ch.d, tol);
}

GMatrix to_double(const ExactGMatrix& g) {
  auto conv = [](const ExactMultivector& e) {
    Multivector r(e.generators());
    for (unsigned i = 0; i < e.size(); ++i) r[i] = e[i].to_double();
    return r;
  };
  return {conv(g.a), conv(g.b), conv(g.c), conv(g.d)};
}

HPoint mobius_apply(const GMatrix& g, const HPoint& z) {
  if (g.space_dim() != z.dim()) throw dimension_error("matrix and point live in different dimensions");
  const Multivector zz = z.embed();
  const int m1 = zz.generators();
  const Multivector den = g.c.embed(m1) * zz + g.d.embed(m1);
  if (norm(den) < 1e-14) throw singular_error("Möbius map sends the point to infinity");
  const Multivector img = mobius(g, zz, 1e-14);
  HPoint r = HPoint::from_multivector(img);
  return r;
}

std::optional<CliffordVector> mobius_boundary(const GMatrix& g, const std::optional<CliffordVector>& x) {
  const double tol = 1e-14 * std::max(1.0, max_abs(g));
  if (!x) {
    if (norm(g.c) <= tol) return std::nullopt;
    return CliffordVector::from_multivector(g.a * g.c.inverse(1e-14), kGeomTol);
  }
  if (x->generators() != g.generators()) throw dimension_error("boundary point dimension mismatch");
  const Multivector xm = x->to_multivector();
  const Multivector den = g.c * xm + g.d;
  if (norm(den) <= tol) return std::nullopt;
  const Multivector img = (g.a * xm + g.b) * den.inverse(1e-14);
  return CliffordVector::from_multivector(img, kGeomTol * std::max(1.0, norm(img)));
}

double hyp_distance(const HPoint& p, const HPoint& q) {
  if (p.re.size() != q.re.size()) throw dimension_error("points live in different dimensions");
  double gap2 = (p.im - q.im) * (p.im - q.im);
  for (std::size_t i = 0; i < p.re.size(); ++i) gap2 += (p.re[i] - q.re[i]) * (p.re[i] - q.re[i]);
  // sinh(d/2) = |p - q| / (2 sqrt(y_p y_q))
  return 2.0 * std::asinh(std::sqrt(gap2) / (2.0 * std::sqrt(p.im * q.im)));
}

double cosh_distance(const HPoint& p, const HPoint& q) {
  if (p.re.size() != q.re.size()) throw dimension_error("points live in different dimensions");
  double gap2 = (p.im - q.im) * (p.im - q.im);
  for (std::size_t i = 0; i < p.re.size(); ++i) gap2 += (p.re[i] - q.re[i]) * (p.re[i] - q.re[i]);
  return 1.0 + gap2 / (2.0 * p.im * q.im);
}

std::vector<double> direction_vector(const HPoint& z) {
  std::vector<double> b = cayley(to_rn(z));
  double r = 0;
  for (double v : b) r += v * v;
  r = std::sqrt(r);
  if (!(r > 0.0)) throw std::domain_error("direction of the origin is undefined");
  for (double& v : b) v /= r;
  return b;
}

HPoint point_in_direction(std::span<const double> u, double r) {
  const double t = std::tanh(r / 2.0);
  std::vector<double> b(u.begin(), u.end());
  double un = 0;
  for (double v : b) un += v * v;
  un = std::sqrt(un);
  for (double& v : b) v *= t / un;
  std::vector<double> p = cayley(b);
  const double y = p.back();
  p.pop_back();
  return HPoint(CliffordVector(std::move(p)), y);
}

HPoint radial_project(const HPoint& z) { return point_in_direction(direction_vector(z), 1.0); }

double angle_between(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw dimension_error("direction dimension mismatch");
  // atan2 of |u x v| and u.v keeps precision for small angles
  double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  const double cross2 = std::max(0.0, uu * vv - dot * dot);
  double diff2 = 0;
  const double su = std::sqrt(uu), sv = std::sqrt(vv);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] / su - v[i] / sv;
    diff2 += d * d;
  }
  // chord-based form for small angles, atan2 otherwise
  if (diff2 < 0.5) return 2.0 * std::asin(std::sqrt(diff2) / 2.0);
  return std::atan2(std::sqrt(cross2), dot);
}

Iwasawa iwasawa_decompose(const GMatrix& g) {
  const int n = g.space_dim();
  const HPoint p = mobius_apply(g, HPoint::origin(n));
  CliffordVector minus_x(p.re.generators());
  for (std::size_t i = 0; i < p.re.size(); ++i) minus_x[i] = -p.re[i];
  GMatrix k = dilate(n, 1.0 / p.im) * translate(minus_x) * g;
  return {p.re, p.im, canonical(k)};
}

GMatrix translate(const CliffordVector& x) {
  const int m = x.generators();
  return {Multivector::scalar(m, 1.0), x.to_multivector(), Multivector(m), Multivector::scalar(m, 1.0)};
}

GMatrix dilate(int n, double y) {
  check_dim(n);
  if (!(y > 0.0)) throw std::domain_error("dilation needs y > 0");
  const int m = n - 2;
  const double s = std::sqrt(y);
  return {Multivector::scalar(m, s), Multivector(m), Multivector(m), Multivector::scalar(m, 1.0 / s)};
}

GMatrix flow(int n, double t) {
  check_dim(n);
  const int m = n - 2;
  return {Multivector::scalar(m, std::exp(t / 2.0)), Multivector(m), Multivector(m),
          Multivector::scalar(m, std::exp(-t / 2.0))};
}

GMatrix rotate_E(const CliffordVector& x) {
  const int m = x.generators();
  const double r = x.norm();
  if (r == 0.0) return GMatrix::identity(m + 2);
  const Multivector xhat = x.to_multivector() * (1.0 / r);
  const double c = std::cos(r), s = std::sin(r);
  return {Multivector::scalar(m, c), xhat * s, -(xhat.main() * s), Multivector::scalar(m, c)};
}

GMatrix rotation2(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {Multivector::scalar(0, c), Multivector::scalar(0, -s), Multivector::scalar(0, s),
          Multivector::scalar(0, c)};
}

GMatrix su2_from_quaternion(std::span<const double> q) {
  if (q.size() != 4) throw dimension_error("quaternion needs 4 components");
  const Multivector a(1, {q[0], q[1]});
  const Multivector b(1, {q[2], q[3]});
  return {a, b, -b.main(), a.main()};
}

GMatrix standard_matrix(StandardKind kind, const StandardParam& param) {
  switch (kind) {
    case StandardKind::flow:
      return flow(param.n, param.scalar);
    case StandardKind::dilate:
      return dilate(param.n, param.scalar);
    case StandardKind::translate:
      return translate(param.vector);
    case StandardKind::rotate_E:
      return rotate_E(param.vector);
  }
  throw std::invalid_argument("unknown matrix kind");
}

// ---------------------------------------------------------------------------

int region_dim(const Region& r) {
  return std::visit(
      [](const auto& reg) -> int {
        using R = std::decay_t<decltype(reg)>;
        if constexpr (std::is_same_v<R, Box>) {
          return static_cast<int>(reg.lo.size());
        } else {
          return static_cast<int>(reg.center.size());
        }
      },
      r);
}

bool region_contains(const Region& r, std::span<const double> x) {
  if (static_cast<int>(x.size()) != region_dim(r)) throw dimension_error("region dimension mismatch");
  if (const Box* b = std::get_if<Box>(&r)) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] >= b->lo[i] && x[i] < b->hi[i])) return false;
    }
    return true;
  }
  const Ball& ball = std::get<Ball>(r);
  double d2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - ball.center[i]) * (x[i] - ball.center[i]);
  return d2 < ball.radius * ball.radius;
}

double region_volume(const Region& r) {
  if (const Box* b = std::get_if<Box>(&r)) {
    double v = 1;
    for (std::size_t i = 0; i < b->lo.size(); ++i) v *= std::max(0.0, b->hi[i] - b->lo[i]);
    return v;
  }
  const Ball& ball = std::get<Ball>(r);
  const int k = static_cast<int>(ball.center.size());
  // unit k-ball volume = Omega_k / k
  return solid_angle(k) / k * std::pow(ball.radius, k);
}

Box region_bounds(const Region& r) {
  if (const Box* b = std::get_if<Box>(&r)) return *b;
  const Ball& ball = std::get<Ball>(r);
  Box box;
  for (double c : ball.center) {
    box.lo.push_back(c - ball.radius);
    box.hi.push_back(c + ball.radius);
  }
  return box;
}

bool cone_contains(const CuspidalCone& cone, const HPoint& z) {
  if (!(z.im >= std::exp(cone.a) && z.im < std::exp(cone.b))) return false;
  std::vector<double> x(z.re.components().begin(), z.re.components().end());
  for (double& v : x) v /= cone.scale;
  return region_contains(cone.base, x);
}

bool cone_contains(const RadialCone& cone, const HPoint& z) {
  const double d = distance_from_origin(z);
  if (!(cone.a < d && d <= cone.b)) return false;
  if (cone.cap.angular_radius >= kPi) return true;
  return angle_between(direction_vector(z), cone.cap.center) <= cone.cap.angular_radius;
}

double cone_volume(const CuspidalCone& cone, int n) {
  if (!std::isfinite(cone.a)) throw range_error("cuspidal cone reaching the boundary has infinite volume");
  const double k = n - 1;
  const double base = region_volume(cone.base) * std::pow(cone.scale, k);
  const double top = std::isinf(cone.b) ? 0.0 : std::exp(-k * cone.b);
  return base * (std::exp(-k * cone.a) - top) / k;
}

double cone_volume(const RadialCone& cone, int n) {
  return cap_measure(n, cone.cap.angular_radius) / solid_angle(n) * shell_volume(n, cone.a, cone.b);
}

double solid_angle(int n) {
  return 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
}

double cap_measure(int n, double r) {
  r = std::clamp(r, 0.0, kPi);
  switch (n) {
    case 2:
      return 2.0 * r;
    case 3:
      return 2.0 * kPi * (1.0 - std::cos(r));
    case 4:
      return 2.0 * kPi * (r - std::sin(r) * std::cos(r));
    default: {
      // Omega_{n-1} int_0^r sin^{n-2}, composite Simpson
      const int steps = 2000;
      const double h = r / steps;
      double s = 0;
      for (int i = 0; i <= steps; ++i) {
        const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
        s += w * std::pow(std::sin(i * h), n - 2);
      }
      return solid_angle(n - 1) * s * h / 3.0;
    }
  }
}

double cap_radius_for_measure(int n, double measure) {
  if (measure <= 0) return 0.0;
  if (measure >= solid_angle(n)) return kPi;
  if (n == 2) return measure / 2.0;
  if (n == 3) return std::acos(1.0 - measure / (2.0 * kPi));
  double lo = 0, hi = kPi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cap_measure(n, mid) < measure ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double shell_volume(int n, double a, double b) {
  if (!std::isfinite(b)) throw range_error("shell with infinite outer radius has infinite volume");
  a = std::max(a, 0.0);
  if (b <= a) return 0.0;
  switch (n) {
    case 2:
      return 2.0 * kPi * (std::cosh(b) - std::cosh(a));
    case 3: {
      auto f = [](double r) { return std::sinh(2 * r) / 4.0 - r / 2.0; };
      return 4.0 * kPi * (f(b) - f(a));
    }
    case 4: {
      auto f = [](double r) {
        const double c = std::cosh(r);
        return c * c * c / 3.0 - c;
      };
      return 2.0 * kPi * kPi * (f(b) - f(a));
    }
    default: {
      const int steps = 4000;
      const double h = (b - a) / steps;
      double s = 0;
      for (int i = 0; i <= steps; ++i) {
        const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
        s += w * std::pow(std::sinh(a + i * h), n - 1);
      }
      return solid_angle(n) * s * h / 3.0;
    }
  }
}

SphericalCap scaled_disc(int n, double sigma, std::span<const double> v, std::size_t count) {
  if (count == 0) throw std::invalid_argument("scaled disc needs a positive point count");
  SphericalCap cap;
  cap.center.assign(v.begin(), v.end());
  if (sigma >= static_cast<double>(count)) {
    cap.angular_radius = kPi;
  } else {
    cap.angular_radius = cap_radius_for_measure(n, solid_angle(n) * sigma / static_cast<double>(count));
  }
  return cap;
}

}  // namespace hypdir
