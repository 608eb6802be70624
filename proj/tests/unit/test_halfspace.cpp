#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypdir/halfspace.hpp"

using namespace hypdir;

namespace {

constexpr double kPi = std::numbers::pi;

HPoint random_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> ly(-2.0, 2.0);
  CliffordVector x(n - 2);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = u(rng);
  return HPoint(x, std::exp(ly(rng)));
}

CliffordVector random_vec(int m, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  CliffordVector x(m);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = u(rng);
  return x;
}

GMatrix random_isometry(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GMatrix g = GMatrix::identity(n);
  for (int k = 0; k < 3; ++k) {
    g = g * translate(random_vec(n - 2, rng)) * dilate(n, std::exp(u(rng))) * rotate_E(random_vec(n - 2, rng, 2.0));
  }
  return g;
}

// Length of the geodesic arc between p and q, integrated numerically along the
// semicircle (or vertical segment) in the vertical plane containing both.
double geodesic_length_by_quadrature(const HPoint& p, const HPoint& q) {
  double u2 = 0;
  for (std::size_t k = 0; k < p.re.size(); ++k) u2 += (p.re[k] - q.re[k]) * (p.re[k] - q.re[k]);
  const double u = std::sqrt(u2);
  const int steps = 20000;
  if (u < 1e-12) {
    // ds = dy / y
    double s = 0;
    const double h = (q.im - p.im) / steps;
    for (int i = 0; i <= steps; ++i) {
      const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
      s += w / (p.im + i * h);
    }
    return std::abs(s * h / 3);
  }
  const double c = (u2 + q.im * q.im - p.im * p.im) / (2 * u);
  const double R = std::sqrt(c * c + p.im * p.im);
  const double phi1 = std::atan2(p.im, -c), phi2 = std::atan2(q.im, u - c);
  // ds = R dphi / (R sin phi)
  double s = 0;
  const double h = (phi2 - phi1) / steps;
  for (int i = 0; i <= steps; ++i) {
    const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
    s += w / std::sin(phi1 + i * h);
  }
  return std::abs(s * h / 3);
}

GMatrix matrix_exp(const GMatrix& x) {
  const int n = x.space_dim();
  GMatrix term = GMatrix::identity(n), sum = GMatrix::identity(n);
  for (int k = 1; k < 40; ++k) {
    term = term * x;
    const double f = 1.0 / k;
    term = {term.a * f, term.b * f, term.c * f, term.d * f};
    sum = {sum.a + term.a, sum.b + term.b, sum.c + term.c, sum.d + term.d};
  }
  return sum;
}

}  // namespace

TEST(HPoint, RejectsNonPositiveHeight) {
  EXPECT_THROW(HPoint(CliffordVector{0.0}, 0.0), std::domain_error);
  EXPECT_THROW(HPoint(CliffordVector{0.0}, -1.0), std::domain_error);
  const auto o = HPoint::origin(3);
  EXPECT_EQ(o.dim(), 3);
  EXPECT_EQ(o.im, 1.0);
}

TEST(Distance, ClosedFormMatchesGeodesicQuadrature) {
  std::mt19937_64 rng(21);
  for (int n : {2, 3, 4})
    for (int k = 0; k < 20; ++k) {
      const HPoint p = random_point(n, rng), q = random_point(n, rng);
      EXPECT_NEAR(hyp_distance(p, q), geodesic_length_by_quadrature(p, q), 1e-7 * (1 + hyp_distance(p, q)));
    }
  const HPoint p(CliffordVector{0.3}, 0.5), q(CliffordVector{0.3}, 4.0);
  EXPECT_NEAR(hyp_distance(p, q), geodesic_length_by_quadrature(p, q), 1e-9);
  EXPECT_NEAR(hyp_distance(p, q), std::log(8.0), 1e-14);
}

TEST(Mobius, IsometryOnRandomPairs) {
  std::mt19937_64 rng(22);
  for (int n : {2, 3, 4})
    for (int k = 0; k < 50; ++k) {
      const GMatrix g = random_isometry(n, rng);
      ASSERT_TRUE(is_sl(g, 1e-8));
      const HPoint p = random_point(n, rng), q = random_point(n, rng);
      const double d = hyp_distance(p, q);
      EXPECT_NEAR(hyp_distance(mobius_apply(g, p), mobius_apply(g, q)), d, 1e-8 * (1 + d));
    }
}

TEST(Mobius, ActionIsAGroupAction) {
  std::mt19937_64 rng(23);
  for (int n : {2, 3, 4})
    for (int k = 0; k < 20; ++k) {
      const GMatrix g = random_isometry(n, rng), h = random_isometry(n, rng);
      const HPoint z = random_point(n, rng);
      const HPoint lhs = mobius_apply(g * h, z);
      const HPoint rhs = mobius_apply(g, mobius_apply(h, z));
      EXPECT_TRUE(approx_equal(lhs, rhs, 1e-8 * (1 + lhs.re.norm() + lhs.im)));
      EXPECT_TRUE(approx_equal(mobius_apply(sl_inverse(g), mobius_apply(g, z)), z, 1e-8 * (1 + z.re.norm() + z.im)));
    }
}

TEST(Mobius, TranslationDilationAndFlow) {
  const HPoint o = HPoint::origin(3);
  const HPoint t = mobius_apply(translate(CliffordVector{1.0, 2.0}), o);
  EXPECT_TRUE(approx_equal(t, HPoint(CliffordVector{1.0, 2.0}, 1.0)));
  const HPoint d = mobius_apply(dilate(3, 4.0), o);
  EXPECT_TRUE(approx_equal(d, HPoint(CliffordVector{0.0, 0.0}, 4.0)));
  const HPoint f = mobius_apply(flow(2, 2.0), HPoint::origin(2));
  EXPECT_NEAR(f.im, std::exp(2.0), 1e-12);
  EXPECT_NEAR(distance_from_origin(f), 2.0, 1e-12);
}

TEST(Mobius, ModularInversionInTwoDimensions) {
  // S = ((0,-1),(1,0)) sends z to -1/z.
  const GMatrix S{Multivector::scalar(0, 0.0), Multivector::scalar(0, -1.0), Multivector::scalar(0, 1.0),
                  Multivector::scalar(0, 0.0)};
  const HPoint z(CliffordVector{1.0}, 1.0);  // 1 + i
  const HPoint w = mobius_apply(S, z);        // -1/(1+i) = (-1+i)/2
  EXPECT_TRUE(approx_equal(w, HPoint(CliffordVector{-0.5}, 0.5), 1e-14));
}

TEST(Mobius, BoundaryAction) {
  const GMatrix S{Multivector::scalar(0, 0.0), Multivector::scalar(0, -1.0), Multivector::scalar(0, 1.0),
                  Multivector::scalar(0, 0.0)};
  EXPECT_FALSE(mobius_boundary(S, CliffordVector{0.0}).has_value());
  const auto at_inf = mobius_boundary(S, std::nullopt);
  ASSERT_TRUE(at_inf.has_value());
  EXPECT_NEAR((*at_inf)[0], 0.0, 1e-15);
  const auto two = mobius_boundary(S, CliffordVector{2.0});
  EXPECT_NEAR((*two)[0], -0.5, 1e-15);
}

TEST(Mobius, SingularMatrixThrows) {
  const GMatrix z{Multivector(0), Multivector(0), Multivector(0), Multivector(0)};
  EXPECT_THROW(mobius_apply(z, HPoint::origin(2)), singular_error);
}

TEST(GMatrix, SlInverseAndCanonical) {
  std::mt19937_64 rng(24);
  for (int n : {2, 3, 4}) {
    const GMatrix g = random_isometry(n, rng);
    EXPECT_TRUE(approx_equal_psl(g * sl_inverse(g), GMatrix::identity(n), 1e-9));
    EXPECT_TRUE(approx_equal_psl(g, -g, 1e-15));
    const GMatrix c = canonical(-g);
    EXPECT_TRUE(approx_equal_psl(c, g, 1e-15));
  }
}

TEST(Iwasawa, RoundTrip) {
  std::mt19937_64 rng(25);
  for (int n : {2, 3, 4})
    for (int k = 0; k < 20; ++k) {
      const GMatrix g = random_isometry(n, rng);
      const Iwasawa w = iwasawa_decompose(g);
      EXPECT_TRUE(is_su(w.k, 1e-8)) << "n=" << n;
      const GMatrix back = translate(w.x) * dilate(n, w.y) * w.k;
      EXPECT_TRUE(approx_equal_psl(back, g, 1e-8));
      EXPECT_TRUE(approx_equal(mobius_apply(w.k, HPoint::origin(n)), HPoint::origin(n), 1e-9));
    }
}

TEST(RotateE, IsSpecialUnitaryAndMatchesExponential) {
  std::mt19937_64 rng(26);
  for (int n : {2, 3, 4})
    for (int k = 0; k < 10; ++k) {
      const CliffordVector x = random_vec(n - 2, rng, 2.0);
      const GMatrix e = rotate_E(x);
      EXPECT_TRUE(is_su(e, 1e-12));
      const int m = n - 2;
      const Multivector xv = x.to_multivector();
      const GMatrix gen{Multivector(m), xv, -xv.main(), Multivector(m)};
      EXPECT_TRUE(approx_equal_psl(e, matrix_exp(gen), 1e-10));
      EXPECT_TRUE(approx_equal(mobius_apply(e, HPoint::origin(n)), HPoint::origin(n), 1e-12));
    }
}

TEST(RotateE, QuaternionElementsAreSpecialUnitary) {
  std::mt19937_64 rng(27);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 20; ++k) {
    double q[4];
    double s = 0;
    for (double& v : q) {
      v = nd(rng);
      s += v * v;
    }
    for (double& v : q) v /= std::sqrt(s);
    EXPECT_TRUE(is_su(su2_from_quaternion(q), 1e-12));
  }
}

TEST(Directions, RoundTripAndRadialProjection) {
  std::mt19937_64 rng(28);
  for (int n : {2, 3, 4})
    for (int k = 0; k < 20; ++k) {
      const HPoint z = random_point(n, rng);
      const auto u = direction_vector(z);
      double len = 0;
      for (double v : u) len += v * v;
      EXPECT_NEAR(len, 1.0, 1e-12);
      const double r = distance_from_origin(z);
      EXPECT_TRUE(approx_equal(point_in_direction(u, r), z, 1e-8 * (1 + z.re.norm() + z.im)));
      const HPoint p = radial_project(z);
      EXPECT_NEAR(distance_from_origin(p), 1.0, 1e-12);
      EXPECT_NEAR(angle_between(direction_vector(p), u), 0.0, 1e-7);
    }
  EXPECT_THROW(direction_vector(HPoint::origin(2)), std::domain_error);
}

TEST(Directions, RotationAboutOriginTurnsDirectionsByTwiceTheAngle) {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 20; ++k) {
    const HPoint z = random_point(2, rng);
    const double theta = 0.3 + 0.05 * k;
    const HPoint w = mobius_apply(rotation2(theta), z);
    const double expected = std::abs(std::remainder(2 * theta, 2 * kPi));
    EXPECT_NEAR(angle_between(direction_vector(z), direction_vector(w)), expected, 1e-9);
  }
}

TEST(Directions, DistanceAlongDirectionIsRadial) {
  const double u[2] = {0.6, 0.8};
  for (double r : {0.1, 1.0, 5.0}) EXPECT_NEAR(distance_from_origin(point_in_direction(u, r)), r, 1e-10 * (1 + r));
}

TEST(Cones, CuspidalHalfOpenConvention) {
  CuspidalCone cone{0.0, 1.0, Box{{0.0}, {1.0}}, 1.0};
  EXPECT_TRUE(cone_contains(cone, HPoint(CliffordVector{0.5}, 1.0)));
  EXPECT_FALSE(cone_contains(cone, HPoint(CliffordVector{0.5}, std::exp(1.0))));
  EXPECT_TRUE(cone_contains(cone, HPoint(CliffordVector{0.0}, 2.0)));
  EXPECT_FALSE(cone_contains(cone, HPoint(CliffordVector{1.0}, 2.0)));
  cone.scale = 2.0;
  EXPECT_TRUE(cone_contains(cone, HPoint(CliffordVector{1.5}, 2.0)));
}

TEST(Cones, RadialHalfOpenConvention) {
  const double u[2] = {0.0, 1.0};
  const HPoint z = point_in_direction(u, 2.0);
  const double d = distance_from_origin(z);
  RadialCone closed_outer{0.5, d, SphericalCap{{0.0, 1.0}, 0.1}};
  EXPECT_TRUE(cone_contains(closed_outer, z));
  RadialCone open_inner{d, d + 1, SphericalCap{{0.0, 1.0}, 0.1}};
  EXPECT_FALSE(cone_contains(open_inner, z));
  RadialCone elsewhere{0.5, 3.0, SphericalCap{{1.0, 0.0}, 0.1}};
  EXPECT_FALSE(cone_contains(elsewhere, z));
}

TEST(Cones, CuspidalVolumeMatchesMonteCarlo) {
  std::mt19937_64 rng(30);
  for (int n : {2, 3}) {
    const std::size_t dims = static_cast<std::size_t>(n - 1);
    CuspidalCone cone;
    cone.a = -0.5;
    cone.b = 1.0;
    cone.base = Ball{std::vector<double>(dims, 0.25), 0.7};
    cone.scale = 1.5;
    const Box box = region_bounds(cone.base);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double y0 = std::exp(cone.a), y1 = std::exp(cone.b);
    double box_vol = y1 - y0;
    for (std::size_t k = 0; k < dims; ++k) box_vol *= cone.scale * (box.hi[k] - box.lo[k]);
    const int samples = 1'000'000;
    double acc = 0;
    for (int i = 0; i < samples; ++i) {
      CliffordVector x(n - 2);
      for (std::size_t k = 0; k < dims; ++k)
        x[k] = cone.scale * (box.lo[k] + (box.hi[k] - box.lo[k]) * u01(rng));
      const double y = y0 + (y1 - y0) * u01(rng);
      if (cone_contains(cone, HPoint(x, y))) acc += std::pow(y, -n);
    }
    const double mc = box_vol * acc / samples;
    EXPECT_NEAR(mc / cone_volume(cone, n), 1.0, 0.01) << "n=" << n;
  }
}

TEST(Cones, RadialVolumeMatchesMonteCarlo) {
  std::mt19937_64 rng(31);
  for (int n : {2, 3}) {
    const std::size_t dims = static_cast<std::size_t>(n - 1);
    std::vector<double> center(static_cast<std::size_t>(n), 0.0);
    center[0] = 1.0;
    const RadialCone cone{0.3, 1.5, SphericalCap{center, 1.2}};
    const double R = std::sinh(cone.b), yc = std::cosh(cone.b);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double y0 = yc - R, y1 = yc + R;
    const double box_vol = std::pow(2 * R, static_cast<double>(dims)) * (y1 - y0);
    const int samples = 1'000'000;
    double acc = 0;
    for (int i = 0; i < samples; ++i) {
      CliffordVector x(n - 2);
      for (std::size_t k = 0; k < dims; ++k) x[k] = -R + 2 * R * u01(rng);
      const double y = y0 + (y1 - y0) * u01(rng);
      if (cone_contains(cone, HPoint(x, y))) acc += std::pow(y, -n);
    }
    const double mc = box_vol * acc / samples;
    EXPECT_NEAR(mc / cone_volume(cone, n), 1.0, 0.01) << "n=" << n;
  }
}

TEST(Cones, UnboundedVolumes) {
  CuspidalCone cone{0.0, std::numeric_limits<double>::infinity(), Box{{0.0}, {2.0}}, 1.0};
  EXPECT_NEAR(cone_volume(cone, 2), 2.0, 1e-15);
  cone.a = -std::numeric_limits<double>::infinity();
  EXPECT_THROW(cone_volume(cone, 2), range_error);
  EXPECT_THROW(shell_volume(2, 0.0, std::numeric_limits<double>::infinity()), range_error);
}

TEST(Spheres, ShellVolumeMatchesIntegral) {
  for (int n : {2, 3, 4, 5}) {
    const double a = 0.4, b = 2.3;
    const int steps = 20000;
    const double h = (b - a) / steps;
    double s = 0;
    for (int i = 0; i <= steps; ++i) {
      const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
      s += w * std::pow(std::sinh(a + i * h), n - 1);
    }
    EXPECT_NEAR(shell_volume(n, a, b), solid_angle(n) * s * h / 3, 1e-9 * shell_volume(n, a, b));
  }
  EXPECT_NEAR(solid_angle(2), 2 * kPi, 1e-15);
  EXPECT_NEAR(solid_angle(3), 4 * kPi, 1e-14);
}

TEST(Spheres, CapMeasuresAndScaledDiscs) {
  EXPECT_NEAR(cap_measure(2, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(cap_measure(3, kPi), 4 * kPi, 1e-13);
  EXPECT_NEAR(cap_measure(4, kPi), solid_angle(4), 1e-12);
  for (int n : {2, 3, 4, 5})
    for (double m : {0.01, 0.5, 2.0}) EXPECT_NEAR(cap_measure(n, cap_radius_for_measure(n, m)), m, 1e-9);
  const double v[3] = {0.0, 0.0, 1.0};
  const auto cap = scaled_disc(3, 1.0, v, 1000);
  EXPECT_NEAR(cap_measure(3, cap.angular_radius), 4 * kPi / 1000, 1e-12);
  EXPECT_EQ(scaled_disc(3, 2000.0, v, 1000).angular_radius, kPi);
}
