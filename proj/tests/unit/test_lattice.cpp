#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "hypdir/lattice.hpp"

using namespace hypdir;

namespace {

constexpr double kPi = std::numbers::pi;

using Key = std::vector<Rational>;

ExactMultivector emv(int m, std::initializer_list<Rational> c) { return ExactMultivector(m, c); }

// Generators of PSL(2,Z) and PSL(2,Z[i]) as exact Clifford matrices.
std::vector<ExactGMatrix> modular_generators() {
  const Rational one(1), zero(0);
  const ExactGMatrix T{emv(0, {one}), emv(0, {one}), emv(0, {zero}), emv(0, {one})};
  const ExactGMatrix S{emv(0, {zero}), emv(0, {-one}), emv(0, {one}), emv(0, {zero})};
  return {T, S, sl_inverse(T)};
}

std::vector<ExactGMatrix> picard_generators() {
  const Rational one(1), zero(0);
  const auto c = [](Rational re, Rational im) { return emv(1, {re, im}); };
  const ExactGMatrix T1{c(one, zero), c(one, zero), c(zero, zero), c(one, zero)};
  const ExactGMatrix Ti{c(one, zero), c(zero, one), c(zero, zero), c(one, zero)};
  const ExactGMatrix S{c(zero, zero), c(-one, zero), c(one, zero), c(zero, zero)};
  const ExactGMatrix U{c(zero, one), c(zero, zero), c(zero, zero), c(zero, -one)};
  return {T1, Ti, S, U, sl_inverse(T1), sl_inverse(Ti)};
}

Key key_of(const ExactMultivector& z) { return Key(z.coeffs().begin(), z.coeffs().end()); }

// cosh of the distance from o = j to the exact point z = x + j y (last generator is j).
double cosh_to_o(const ExactMultivector& z) {
  const unsigned jmask = 1u << (z.generators() - 1);
  Rational x2(0);
  for (unsigned k = 0; k < z.size(); ++k)
    if (k != jmask) x2 = x2 + z[k] * z[k];
  const Rational y = z[jmask];
  return ((x2 + y * y + Rational(1)) / (Rational(2) * y)).to_double();
}

// Breadth-first search over the orbit of the base point under left multiplication
// by the generators. S and U fix o and translations move points toward the axis,
// so a reduction path never leaves the ball; pruning at radius t is therefore exact.
std::set<Key> bfs_orbit(const std::vector<ExactGMatrix>& gens, const ExactMultivector& w, double t) {
  std::set<Key> seen{key_of(w)};
  std::deque<ExactMultivector> queue{w};
  std::set<Key> inside;
  const double ch = std::cosh(t) * (1 + 1e-12);
  while (!queue.empty()) {
    const ExactMultivector z = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      const ExactMultivector gz = mobius(g, z, Rational(0));
      if (cosh_to_o(gz) > ch) continue;
      if (!seen.insert(key_of(gz)).second) continue;
      queue.push_back(gz);
    }
  }
  for (const auto& k : seen) {
    ExactMultivector z(static_cast<int>(std::bit_width(k.size()) - 1));
    for (unsigned i = 0; i < k.size(); ++i) z[i] = k[i];
    const double c = cosh_to_o(z);
    if (c > 1 + 1e-12) inside.insert(k);
  }
  return inside;
}

Key key_of(const OrbitPoint& p, int n) {
  if (n == 2) return {Rational(p.num.re, p.norm), Rational(1, p.norm)};
  return {Rational(p.num.re, p.norm), Rational(p.num.im, p.norm), Rational(1, p.norm), Rational(0)};
}

std::int64_t count_coprime_pairs(std::int64_t max_norm) {
  std::int64_t count = 0;
  for (std::int64_t c = -20; c <= 20; ++c)
    for (std::int64_t d = -20; d <= 20; ++d)
      if (c * c + d * d <= max_norm && std::gcd(c, d) == 1) ++count;
  return count;
}

}  // namespace

TEST(Models, StabiliserOrders) {
  EXPECT_EQ(LatticeModel::modular_i().stab_order(), 2);
  EXPECT_EQ(LatticeModel::modular_rho().stab_order(), 3);
  EXPECT_EQ(LatticeModel::picard().stab_order(), 4);
  EXPECT_EQ(LatticeModel::picard().stabilizer_lifts().size(), 8u);
}

TEST(Models, StabiliserOfIByDirectSearch) {
  int fixing = 0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
        for (int d = -3; d <= 3; ++d) {
          if (a * d - b * c != 1) continue;
          const std::complex<double> z(0, 1);
          const auto gz = (double(a) * z + double(b)) / (double(c) * z + double(d));
          if (std::abs(gz - z) < 1e-12) ++fixing;
        }
  EXPECT_EQ(fixing / 2, LatticeModel::modular_i().stab_order());
}

TEST(Models, CovolumesAgainstIndependentIntegrals) {
  // Modular: int_{|x|<=1/2} int_{sqrt(1-x^2)}^inf dy/y^2 dx, inner integral by the
  // substitution u = 1/y, outer by composite Simpson.
  const int steps = 2000;
  double s = 0;
  for (int i = 0; i <= steps; ++i) {
    const double x = -0.5 + static_cast<double>(i) / steps;
    const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
    s += w / std::sqrt(1 - x * x);
  }
  const double modular = s / (3.0 * steps);
  EXPECT_NEAR(LatticeModel::modular_i().covolume(), modular, 1e-10);
  // Catalan's constant / 3.
  EXPECT_NEAR(picard_covolume_by_quadrature(), 0.915965594177219015 / 3, 1e-12);
  EXPECT_NEAR(LatticeModel::picard(0.3).covolume(), 0.3, 0.0);
}

TEST(Models, DensityConstants) {
  const auto mi = model_constants(LatticeModel::modular_i(), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(mi.theta, 3 / (2 * kPi), 1e-15);
  EXPECT_NEAR(1 / mi.theta, mi.stab_order * mi.covolume, 1e-14);
  EXPECT_NEAR(mi.delta_min, std::acosh(1.5), 1e-14);
  const auto mr = model_constants(LatticeModel::modular_rho(), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(mr.theta, 1 / kPi, 1e-15);
  const double s = 0.7;
  EXPECT_NEAR(density_constant(LatticeModel::modular_i(), s) / mi.theta, 1 - std::exp(-s), 1e-15);
  const auto pc = LatticeModel::picard();
  EXPECT_NEAR(density_constant(pc, 1.0) / density_constant(pc, std::numeric_limits<double>::infinity()),
              1 - std::exp(-2.0), 1e-15);
}

TEST(OrbitBall, ModularUnitRadius) {
  const auto model = LatticeModel::modular_i();
  const auto res = orbit_ball(model, 1.0);
  ASSERT_EQ(res.points.size(), 4u);
  EXPECT_FALSE(res.best_effort);
  std::set<std::pair<double, double>> got;
  for (const auto& p : res.points) {
    got.insert({p.x[0], p.y});
    EXPECT_NEAR(distance_from_origin(p.point()), 0.96242365011920689, 1e-12);
  }
  const std::set<std::pair<double, double>> want{{-1, 1}, {1, 1}, {-0.5, 0.5}, {0.5, 0.5}};
  EXPECT_EQ(got, want);
}

TEST(OrbitBall, EmptyForSmallRadius) {
  for (const auto& m : {LatticeModel::modular_i(), LatticeModel::modular_rho(), LatticeModel::picard()})
    EXPECT_TRUE(orbit_ball(m, 0.05).points.empty());
  EXPECT_THROW(orbit_ball(LatticeModel::modular_i(), -1.0), std::invalid_argument);
}

TEST(OrbitBall, MatchesExactBfsModular) {
  const auto model = LatticeModel::modular_i();
  for (double t : {2.0, 3.5, 5.0}) {
    const auto bfs = bfs_orbit(modular_generators(), emv(1, {Rational(0), Rational(1)}), t);
    std::set<Key> got;
    for (const auto& p : orbit_ball(model, t).points) EXPECT_TRUE(got.insert(key_of(p, 2)).second);
    EXPECT_EQ(got, bfs) << "t=" << t;
  }
}

TEST(OrbitBall, MatchesExactBfsPicard) {
  const auto model = LatticeModel::picard();
  ExactMultivector j(2);
  j[2] = Rational(1);
  for (double t : {2.0, 5.0}) {
    const auto bfs = bfs_orbit(picard_generators(), j, t);
    std::set<Key> got;
    for (const auto& p : orbit_ball(model, t).points) EXPECT_TRUE(got.insert(key_of(p, 3)).second);
    EXPECT_EQ(got, bfs) << "t=" << t;
  }
}

TEST(OrbitBall, MatchesBfsRho) {
  // rho is irrational, so the oracle tracks matrices exactly and compares points
  // in floating point.
  const auto model = LatticeModel::modular_rho();
  const double t = 5.0;
  const auto gens = modular_generators();
  const HPoint rho = model.base_point();
  const double ch = std::cosh(t);
  std::set<std::pair<long long, long long>> seen;
  std::vector<HPoint> found;
  std::deque<HPoint> queue{rho};
  seen.insert({std::llround(rho.re[0] * 1e9), std::llround(rho.im * 1e9)});
  found.push_back(rho);
  while (!queue.empty()) {
    const HPoint z = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      const HPoint gz = mobius_apply(to_double(g), z);
      if (cosh_distance(gz, HPoint::origin(2)) > ch * (1 + 1e-12)) continue;
      if (!seen.insert({std::llround(gz.re[0] * 1e9), std::llround(gz.im * 1e9)}).second) continue;
      queue.push_back(gz);
      found.push_back(gz);
    }
  }
  std::set<std::pair<long long, long long>> got;
  for (const auto& p : orbit_ball(model, t).points) got.insert({std::llround(p.x[0] * 1e9), std::llround(p.y * 1e9)});
  EXPECT_EQ(got, seen);
}

TEST(OrbitBall, PointOfMatchesCliffordAction) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> u(-3, 3);
  const auto model = LatticeModel::picard();
  int tested = 0;
  while (tested < 200) {
    const GaussInt c{u(rng), u(rng)}, d{u(rng), u(rng)};
    if (c.is_zero() && d.is_zero()) continue;
    if (!gauss_gcd(c, d).is_unit()) continue;
    const auto [g, x, y] = gauss_ext_gcd(d, c);
    const GaussInt inv = unit_inverse(g);
    const IntMatrix m{x * inv, -(y * inv), c, d};
    ASSERT_EQ(m.det(), GaussInt{1});
    auto entry = [](GaussInt z) { return Multivector(1, {double(z.re), double(z.im)}); };
    const GMatrix gm{entry(m.a), entry(m.b), entry(m.c), entry(m.d)};
    const HPoint expected = mobius_apply(gm, HPoint::origin(3));
    EXPECT_TRUE(approx_equal(model.point_of(m).point(), expected, 1e-12));
    const HPoint z(CliffordVector{0.3, -0.2}, 0.7);
    EXPECT_TRUE(approx_equal(model.apply(m, z), mobius_apply(gm, z), 1e-12));
    ++tested;
  }
}

TEST(OrbitBall, InjectiveSpacedAndMonotone) {
  for (const auto& model : {LatticeModel::modular_i(), LatticeModel::modular_rho(), LatticeModel::picard()}) {
    const double delta = model_constants(model, std::numeric_limits<double>::infinity()).delta_min;
    const auto pts = orbit_ball(model, 3.0).points;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t k = i + 1; k < pts.size(); ++k) {
        ASSERT_FALSE(pts[i] == pts[k]);
        ASSERT_GE(hyp_distance(pts[i].point(), pts[k].point()), delta - 1e-9);
      }
    std::size_t prev = 0;
    for (double t : {1.0, 2.0, 3.0, 4.0}) {
      const std::size_t n = orbit_ball(model, t).points.size();
      EXPECT_GE(n, prev);
      prev = n;
    }
    EXPECT_LE(orbit_ball(model, 4.0, 1.0).points.size(), orbit_ball(model, 4.0, 2.0).points.size());
    EXPECT_EQ(orbit_ball(model, 4.0, 4.0).points.size(), orbit_ball(model, 4.0).points.size());
  }
}

TEST(OrbitBall, ShellWindow) {
  const auto model = LatticeModel::modular_i();
  const auto all = orbit_ball(model, 6.0).points;
  std::size_t expected = 0;
  for (const auto& p : all)
    if (distance_from_origin(p.point()) > 4.5) ++expected;
  EXPECT_EQ(orbit_ball(model, 6.0, 1.5).points.size(), expected);
}

TEST(OrbitBall, CountMatchesVolumeRatio) {
  const auto model = LatticeModel::modular_i();
  const double t = 10.0;
  const double expected = shell_volume(2, 0, t) / (model.stab_order() * model.covolume());
  EXPECT_NEAR(orbit_ball(model, t).points.size() / expected, 1.0, 0.02);
}

TEST(OrbitInBall, OffCentreMatchesFilteredOriginBall) {
  for (const auto& model : {LatticeModel::modular_i(), LatticeModel::modular_rho(), LatticeModel::picard()}) {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 5; ++k) {
      CliffordVector x(model.dim() - 2);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = u(rng);
      const HPoint c(x, std::exp(u(rng) / 2));
      const double r = 1.5;
      const double reach = distance_from_origin(c) + r;
      std::size_t brute = 0;
      for (const auto& p : orbit_ball(model, reach).points)
        if (hyp_distance(c, p.point()) <= r) ++brute;
      // orbit_ball leaves out o itself, which is an orbit point only when w = o.
      const bool w_is_o = distance_from_origin(model.base_point()) == 0;
      if (w_is_o && hyp_distance(c, model.base_point()) <= r) ++brute;
      EXPECT_EQ(orbit_in_ball(model, c, r).points.size(), brute) << model.name();
    }
  }
}

TEST(Reduce, LandsInStandardRegion) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-5, 5);
  for (const auto& model : {LatticeModel::modular_i(), LatticeModel::picard()}) {
    for (int k = 0; k < 100; ++k) {
      CliffordVector x(model.dim() - 2);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = u(rng);
      const HPoint z(x, std::exp(u(rng)));
      const auto [g, r] = model.reduce(z);
      for (std::size_t i = 0; i < r.re.size(); ++i) EXPECT_LE(std::abs(r.re[i]), 0.5 + 1e-12);
      EXPECT_GE(r.re.norm2() + r.im * r.im, 1 - 1e-9);
      EXPECT_TRUE(approx_equal(model.apply(g, z), r, 1e-8 * (1 + r.im)));
    }
  }
}

TEST(OrbitInRegion, IdentityConeSeesOnlyIntegerTranslates) {
  const auto model = LatticeModel::modular_i();
  const double scale = 1 / density_constant(model, std::numeric_limits<double>::infinity());
  for (double lo : {-0.3, 0.1, 0.5}) {
    CuspidalCone cone{0.0, 2.0, Box{{lo}, {lo + 1}}, scale};
    const auto res = orbit_in_region(model, GMatrix::identity(2), cone);
    std::size_t expected = 0;
    for (int m = -5; m <= 5; ++m)
      if (m >= scale * lo && m < scale * (lo + 1)) ++expected;
    EXPECT_EQ(res.points.size(), expected);
    for (const auto& p : res.points) EXPECT_EQ(p.y, 1.0);
  }
  CuspidalCone narrow{0.0, 2.0, Box{{0.1}, {0.2}}, 1.0};
  EXPECT_LE(orbit_in_region(model, GMatrix::identity(2), narrow).points.size(), 1u);
  CuspidalCone empty{0.0, 2.0, Box{{0.1}, {0.1}}, 1.0};
  EXPECT_EQ(count_in_region(model, GMatrix::identity(2), empty), 0u);
  CuspidalCone unbounded{0.0, std::numeric_limits<double>::infinity(), Box{{0.0}, {1.0}}, 1.0};
  EXPECT_THROW(orbit_in_region(model, GMatrix::identity(2), unbounded), range_error);
}

TEST(OrbitInRegion, MatchesBruteForceForRandomFrames) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& model : {LatticeModel::modular_i(), LatticeModel::modular_rho(), LatticeModel::picard()}) {
    const int n = model.dim();
    for (int k = 0; k < 6; ++k) {
      CliffordVector x(n - 2), e(n - 2);
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = u(rng);
        e[i] = 2 * u(rng);
      }
      const GMatrix g = translate(x) * dilate(n, std::exp(2 * u(rng))) * rotate_E(e);
      const std::size_t dims = static_cast<std::size_t>(n - 1);
      CuspidalCone cone{-1.5, 1.0, Ball{std::vector<double>(dims, 0.2), 1.3}, 1.0};
      // Every point of the cone lies within `reach` of o; pull back by g.
      const double reach = std::acosh(1 + (std::pow(1.5, 2) + std::pow(std::exp(1.0) - std::exp(-1.5), 2)) /
                                              (2 * std::exp(-1.5))) +
                           1.0;
      const HPoint c = mobius_apply(sl_inverse(g), HPoint::origin(n));
      const double R = distance_from_origin(c) + reach;
      std::size_t brute = 0;
      auto check = [&](const HPoint& z) {
        if (cone_contains(cone, mobius_apply(g, z))) ++brute;
      };
      for (const auto& p : orbit_ball(model, R).points) check(p.point());
      if (distance_from_origin(model.base_point()) == 0) check(model.base_point());
      EXPECT_EQ(count_in_region(model, g, cone), brute) << model.name() << " k=" << k;
    }
  }
}

TEST(CuspPoints, ModularCountMatchesCoprimePairs) {
  const auto model = LatticeModel::modular_i();
  const auto pts = cusp_points(model, std::log(100.0));
  EXPECT_EQ(static_cast<std::int64_t>(pts.size()), count_coprime_pairs(100) / 4);
  EXPECT_NEAR(pts.size() / (3 / (2 * kPi) * 100), 1.0, 0.15);
  for (const auto& p : pts) {
    EXPECT_GE(p.re[0], 0.0);
    EXPECT_LT(p.re[0], 1.0);
    EXPECT_GE(p.im, 0.01 - 1e-15);
  }
  EXPECT_TRUE(cusp_points(model, -0.5).empty());
  EXPECT_EQ(cusp_points(model, 0.0).size(), 1u);
}

TEST(CuspPoints, RhoAndPicardCountsMatchPairCounts) {
  const auto rho = LatticeModel::modular_rho();
  const double X = 200;
  std::int64_t pairs = 0;
  for (std::int64_t c = -30; c <= 30; ++c)
    for (std::int64_t d = -30; d <= 30; ++d)
      if (c * c + c * d + d * d <= X && std::gcd(c, d) == 1) ++pairs;
  // Im = (sqrt 3 / 2) / N >= e^{-t}
  const double t = std::log(X / (std::sqrt(3.0) / 2));
  EXPECT_EQ(static_cast<std::int64_t>(cusp_points(rho, t * (1 + 1e-12)).size()), pairs / 6);

  const auto pic = LatticeModel::picard();
  std::int64_t gpairs = 0;
  for (int c0 = -8; c0 <= 8; ++c0)
    for (int c1 = -8; c1 <= 8; ++c1)
      for (int d0 = -8; d0 <= 8; ++d0)
        for (int d1 = -8; d1 <= 8; ++d1) {
          const GaussInt c{c0, c1}, d{d0, d1};
          if (c.norm() + d.norm() > 50 || (c.is_zero() && d.is_zero())) continue;
          if (gauss_gcd(c, d).is_unit()) ++gpairs;
        }
  EXPECT_EQ(static_cast<std::int64_t>(cusp_points(pic, std::log(50.0) * (1 + 1e-12)).size()), gpairs / 8);
}

TEST(CuspPoints, WindowAndErrors) {
  const auto model = LatticeModel::modular_i();
  const auto all = cusp_points(model, 5.0);
  const auto window = cusp_points(model, 5.0, 2.0);
  std::size_t expected = 0;
  for (const auto& p : all)
    if (p.im < std::exp(-3.0)) ++expected;
  EXPECT_EQ(window.size(), expected);
  GenericSpec spec;
  spec.generators = {to_double(modular_generators()[0])};
  spec.base = HPoint::origin(2);
  spec.covolume = 1.0;
  EXPECT_THROW(cusp_points(LatticeModel::generic(spec), 2.0), unsupported_error);
}

TEST(Spectrum, ModularFirstEntriesAndConsistency) {
  const auto model = LatticeModel::modular_i();
  const auto spec = distance_spectrum(model, 4.0);
  ASSERT_FALSE(spec.entries.empty());
  EXPECT_NEAR(spec.entries[0].ell, std::acosh(1.5), 1e-14);
  EXPECT_EQ(spec.entries[0].multiplicity, 4);
  ASSERT_TRUE(spec.entries[0].exact_cosh.has_value());
  EXPECT_EQ(*spec.entries[0].exact_cosh, Rational(3, 2));
  EXPECT_EQ(static_cast<std::size_t>(spec.total_multiplicity()), orbit_ball(model, 4.0).points.size());
  for (std::size_t i = 1; i < spec.entries.size(); ++i) EXPECT_LT(spec.entries[i - 1].ell, spec.entries[i].ell);
}

TEST(Spectrum, BaseDistancesMatchDirectEvaluation) {
  for (const auto& model : {LatticeModel::modular_rho(), LatticeModel::picard()}) {
    const auto spec = distance_spectrum(model, 3.0);
    std::map<long long, std::int64_t> direct;
    const HPoint w = model.base_point();
    model.for_each_in_ball(w, 3.0, [&](const OrbitPoint& p) {
      const double d = hyp_distance(w, p.point());
      if (d > 1e-9 && d <= 3.0) ++direct[std::llround(d * 1e8)];
    });
    std::map<long long, std::int64_t> got;
    for (const auto& e : spec.entries) got[std::llround(e.ell * 1e8)] += e.multiplicity;
    EXPECT_EQ(got, direct) << model.name();
  }
}

TEST(Generic, ParsesGeneratorFiles) {
  std::istringstream in("# modular generators\n1 1 0 1\n\n0 -1 1 0  # S\n");
  const auto gens = parse_generators(in);
  ASSERT_EQ(gens.size(), 2u);
  EXPECT_EQ(gens[1].b[0], -1.0);
  std::istringstream bad_count("1 2 3\n");
  EXPECT_THROW(parse_generators(bad_count), std::invalid_argument);
  std::istringstream not_sl("2 0 0 2\n");
  EXPECT_THROW(parse_generators(not_sl), std::invalid_argument);
  std::istringstream junk("1 x 0 1\n");
  EXPECT_THROW(parse_generators(junk), std::invalid_argument);
  EXPECT_THROW(load_generators("/nonexistent/gens.txt"), std::invalid_argument);
}

TEST(Generic, WordSearchReproducesModularBall) {
  std::istringstream in("1 1 0 1\n0 -1 1 0\n");
  GenericSpec spec;
  spec.generators = parse_generators(in);
  spec.base = HPoint::origin(2);
  spec.covolume = kPi / 3;
  spec.stab_order = 2;
  spec.max_word_length = 9;
  const auto model = LatticeModel::generic(spec);
  EXPECT_FALSE(model.exact());
  const auto res = orbit_ball(model, 2.5);
  EXPECT_TRUE(res.best_effort);
  const auto exact = orbit_ball(LatticeModel::modular_i(), 2.5);
  EXPECT_EQ(res.points.size(), exact.points.size());
  const auto spec_g = distance_spectrum(model, 2.0);
  EXPECT_TRUE(spec_g.best_effort);
  EXPECT_NEAR(spec_g.entries.front().ell, std::acosh(1.5), 1e-9);
  EXPECT_EQ(spec_g.entries.front().multiplicity, 4);
}
