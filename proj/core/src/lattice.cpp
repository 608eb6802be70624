#include "hypdir/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hypdir/errors.hpp"
#include "hypdir/numerics.hpp"

namespace hypdir {

namespace {

constexpr double kSqrt3Half = 0.86602540378443864676;

bool lex_less(GaussInt c1, GaussInt d1, GaussInt c2, GaussInt d2) {
  return std::tie(c1.re, c1.im, d1.re, d1.im) < std::tie(c2.re, c2.im, d2.re, d2.im);
}

std::int64_t ceil_i(double v) { return static_cast<std::int64_t>(std::ceil(v)); }
std::int64_t floor_i(double v) { return static_cast<std::int64_t>(std::floor(v)); }

// Integers k with lo <= k^2 <= hi, as the union of [-b, -a] and [a, b].
template <class F>
void for_each_square_in(std::int64_t lo, std::int64_t hi, F&& f) {
  if (hi < 0) return;
  std::int64_t b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(hi)));
  while (b * b > hi) --b;
  while ((b + 1) * (b + 1) <= hi) ++b;
  std::int64_t a = 0;
  if (lo > 0) {
    a = static_cast<std::int64_t>(std::sqrt(static_cast<double>(lo)));
    while (a > 0 && (a - 1) * (a - 1) >= lo) --a;
    while (a * a < lo) ++a;
  }
  const std::int64_t a1 = std::max<std::int64_t>(a, 1);
  for (std::int64_t k = -b; k <= -a1; ++k) f(k);
  if (a == 0) f(0);
  for (std::int64_t k = a1; k <= b; ++k) f(k);
}

std::vector<long long> rounded_key(std::span<const double> v, double scale) {
  std::vector<long long> key;
  key.reserve(v.size());
  for (double x : v) key.push_back(std::llround(x * scale));
  return key;
}

}  // namespace

// ---------------------------------------------------------------------------
// Generator files.

std::vector<GMatrix> parse_generators(std::istream& in) {
  std::vector<GMatrix> out;
  std::string line;
  int line_no = 0;
  int m_seen = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> vals;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw std::invalid_argument("generator file line " + std::to_string(line_no) + ": bad number '" + tok + "'");
      }
    }
    if (vals.empty()) continue;
    int m = -1;
    for (int k = 0; k <= kMaxGenerators; ++k)
      if (vals.size() == (std::size_t{4} << k)) m = k;
    if (m < 0)
      throw std::invalid_argument("generator file line " + std::to_string(line_no) +
                                  ": expected 4*2^m entries, got " + std::to_string(vals.size()));
    if (m_seen >= 0 && m != m_seen)
      throw std::invalid_argument("generator file line " + std::to_string(line_no) + ": inconsistent dimension");
    m_seen = m;
    const std::size_t len = std::size_t{1} << m;
    auto entry = [&](std::size_t k) {
      Multivector e(m);
      for (std::size_t i = 0; i < len; ++i) e[i] = vals[k * len + i];
      return e;
    };
    GMatrix g{entry(0), entry(1), entry(2), entry(3)};
    if (!is_sl(g)) throw std::invalid_argument("generator file line " + std::to_string(line_no) + ": not in SL(2)");
    out.push_back(std::move(g));
  }
  if (out.empty()) throw std::invalid_argument("generator file contains no matrices");
  return out;
}

std::vector<GMatrix> load_generators(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open generator file '" + path + "'");
  return parse_generators(in);
}

// ---------------------------------------------------------------------------
// OrbitPoint, spectrum.

HPoint OrbitPoint::point() const {
  std::vector<double> re(x.begin(), x.begin() + (n - 1));
  return HPoint(CliffordVector(std::move(re)), y);
}

bool operator==(const OrbitPoint& p, const OrbitPoint& q) {
  if (p.n != q.n) return false;
  if (p.norm != 0 && q.norm != 0) return p.norm == q.norm && p.num == q.num;
  return approx_equal(p.point(), q.point(), 1e-9);
}

double DistanceSpectrum::delta_min() const {
  if (entries.empty()) throw range_error("distance spectrum is empty below the cutoff");
  return entries.front().ell;
}

std::int64_t DistanceSpectrum::total_multiplicity() const {
  std::int64_t s = 0;
  for (const auto& e : entries) s += e.multiplicity;
  return s;
}

double picard_covolume_by_quadrature() {
  // vol = int_{|x0|<=1/2, 0<=x1<=1/2} int_{y >= sqrt(1-|x|^2)} dy / y^3.
  const auto [nodes, weights] = gauss_legendre(40);
  double s = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x0 = 0.5 * nodes[i];
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double x1 = 0.25 + 0.25 * nodes[k];
      s += weights[i] * weights[k] / (2.0 * (1.0 - x0 * x0 - x1 * x1));
    }
  }
  return s * 0.5 * 0.25;
}

// ---------------------------------------------------------------------------
// Generic model data.

struct LatticeModel::GenericData {
  std::vector<GMatrix> generators;
  std::vector<OrbitPoint> points;  // includes w itself (empty word)
  int max_word_length = 8;
  bool truncated = false;
};

namespace {

constexpr std::size_t kGenericElementCap = 2'000'000;

}  // namespace

LatticeModel LatticeModel::generic(GenericSpec spec) {
  if (spec.generators.empty()) throw std::invalid_argument("generic model needs at least one generator");
  if (spec.covolume <= 0 || !std::isfinite(spec.covolume))
    throw std::invalid_argument("generic model needs a positive declared covolume");
  if (spec.stab_order < 1) throw std::invalid_argument("stabiliser order must be >= 1");
  if (spec.max_word_length < 0) throw std::invalid_argument("word length must be >= 0");
  const int n = spec.generators.front().space_dim();
  for (const auto& g : spec.generators)
    if (g.space_dim() != n) throw dimension_error("generators of different dimensions");
  if (spec.base.dim() != n) throw dimension_error("base point dimension does not match the generators");

  LatticeModel m;
  m.kind_ = ModelKind::generic;
  m.n_ = n;
  m.w_ = spec.base;
  m.stab_order_ = spec.stab_order;
  m.covolume_ = spec.covolume;

  auto data = std::make_shared<GenericData>();
  data->generators = spec.generators;
  data->max_word_length = spec.max_word_length;

  struct Node {
    GMatrix g;
    std::vector<int> word;
  };
  std::vector<std::pair<GMatrix, int>> moves;
  for (std::size_t k = 0; k < spec.generators.size(); ++k) {
    moves.emplace_back(spec.generators[k], static_cast<int>(k));
    moves.emplace_back(sl_inverse(spec.generators[k]), -static_cast<int>(k) - 1);
  }
  auto matrix_key = [](const GMatrix& g) {
    const GMatrix c = canonical(g);
    std::vector<double> v;
    for (const auto* e : {&c.a, &c.b, &c.c, &c.d})
      for (double x : e->coeffs()) v.push_back(x);
    return rounded_key(v, 1e6);
  };
  auto point_key = [](const HPoint& z) {
    std::vector<double> v(z.re.components().begin(), z.re.components().end());
    v.push_back(z.im);
    return rounded_key(v, 1e8);
  };

  std::set<std::vector<long long>> seen_g, seen_p;
  std::vector<Node> frontier{{GMatrix::identity(n), {}}};
  seen_g.insert(matrix_key(frontier.front().g));
  auto record = [&](const Node& node) {
    const HPoint z = mobius_apply(node.g, m.w_);
    if (!seen_p.insert(point_key(z)).second) return;
    OrbitPoint p;
    p.n = n;
    for (int i = 0; i < n - 1; ++i) p.x[static_cast<std::size_t>(i)] = z.re[static_cast<std::size_t>(i)];
    p.y = z.im;
    p.word = node.word;
    data->points.push_back(std::move(p));
  };
  record(frontier.front());
  for (int len = 1; len <= spec.max_word_length && !frontier.empty(); ++len) {
    std::vector<Node> next;
    for (const auto& node : frontier) {
      for (const auto& [h, label] : moves) {
        Node child{node.g * h, node.word};
        child.word.push_back(label);
        if (!seen_g.insert(matrix_key(child.g)).second) continue;
        record(child);
        next.push_back(std::move(child));
        if (seen_g.size() > kGenericElementCap) {
          data->truncated = true;
          break;
        }
      }
      if (data->truncated) break;
    }
    if (data->truncated) break;
    frontier = std::move(next);
  }
  m.generic_ = std::move(data);
  return m;
}

// ---------------------------------------------------------------------------
// Integer models.

LatticeModel LatticeModel::modular_i() {
  LatticeModel m;
  m.kind_ = ModelKind::modular_i;
  m.n_ = 2;
  m.w_ = HPoint(CliffordVector{0.0}, 1.0);
  m.covolume_ = std::numbers::pi / 3;
  m.find_stabilizer();
  return m;
}

LatticeModel LatticeModel::modular_rho() {
  LatticeModel m;
  m.kind_ = ModelKind::modular_rho;
  m.n_ = 2;
  m.w_ = HPoint(CliffordVector{0.5}, kSqrt3Half);
  m.covolume_ = std::numbers::pi / 3;
  m.find_stabilizer();
  return m;
}

LatticeModel LatticeModel::picard(std::optional<double> covolume) {
  LatticeModel m;
  m.kind_ = ModelKind::picard;
  m.n_ = 3;
  m.w_ = HPoint(CliffordVector{0.0, 0.0}, 1.0);
  m.covolume_ = covolume ? *covolume : picard_covolume_by_quadrature();
  if (!(m.covolume_ > 0) || !std::isfinite(m.covolume_)) throw std::invalid_argument("covolume must be positive");
  m.find_stabilizer();
  return m;
}

LatticeModel LatticeModel::from_name(std::string_view name) {
  if (name == "modular-i") return modular_i();
  if (name == "modular-rho") return modular_rho();
  if (name == "picard") return picard();
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::string LatticeModel::name() const {
  switch (kind_) {
    case ModelKind::modular_i:
      return "modular-i";
    case ModelKind::modular_rho:
      return "modular-rho";
    case ModelKind::picard:
      return "picard";
    case ModelKind::generic:
      return "generic";
  }
  return "generic";
}

int LatticeModel::max_word_length() const { return generic_ ? generic_->max_word_length : 0; }

void LatticeModel::find_stabilizer() {
  const OrbitPoint base = point_of(IntMatrix{});
  const int r = 2;
  const bool gauss = kind_ == ModelKind::picard;
  std::vector<GaussInt> vals;
  for (int re = -r; re <= r; ++re)
    for (int im = gauss ? -r : 0; im <= (gauss ? r : 0); ++im) vals.emplace_back(re, im);
  stab_lifts_.clear();
  for (GaussInt c : vals)
    for (GaussInt d : vals) {
      if (bottom_norm(c, d) != base.norm) continue;
      for (GaussInt a : vals)
        for (GaussInt b : vals) {
          const IntMatrix g{a, b, c, d};
          if (g.det() != GaussInt{1}) continue;
          if (point_of(g).num == base.num) stab_lifts_.push_back(g);
        }
    }
  stab_order_ = static_cast<int>(stab_lifts_.size()) / 2;
}

std::int64_t LatticeModel::bottom_norm(GaussInt c, GaussInt d) const {
  switch (kind_) {
    case ModelKind::modular_i:
      return c.re * c.re + d.re * d.re;
    case ModelKind::modular_rho:
      return c.re * c.re + c.re * d.re + d.re * d.re;
    case ModelKind::picard:
      return c.norm() + d.norm();
    case ModelKind::generic:
      break;
  }
  throw unsupported_error("bottom rows exist only for the integer models");
}

OrbitPoint LatticeModel::point_of(const IntMatrix& g) const {
  if (kind_ == ModelKind::generic) throw unsupported_error("point_of needs an integer model");
  OrbitPoint p;
  p.n = n_;
  p.gamma = g;
  p.norm = bottom_norm(g.c, g.d);
  if (p.norm == 0) throw singular_error("zero bottom row");
  const double nd = static_cast<double>(p.norm);
  switch (kind_) {
    case ModelKind::modular_i:
      p.num = g.a * g.c + g.b * g.d;
      p.x[0] = static_cast<double>(p.num.re) / nd;
      p.y = 1.0 / nd;
      break;
    case ModelKind::modular_rho:
      p.num = GaussInt{2} * g.a * g.c + g.a * g.d + g.b * g.c + GaussInt{2} * g.b * g.d;
      p.x[0] = static_cast<double>(p.num.re) / (2 * nd);
      p.y = kSqrt3Half / nd;
      break;
    case ModelKind::picard:
      p.num = g.a * g.c.conj() + g.b * g.d.conj();
      p.x[0] = static_cast<double>(p.num.re) / nd;
      p.x[1] = static_cast<double>(p.num.im) / nd;
      p.y = 1.0 / nd;
      break;
    case ModelKind::generic:
      break;
  }
  return p;
}

HPoint LatticeModel::apply(const IntMatrix& g, const HPoint& z) const {
  if (kind_ == ModelKind::generic) throw unsupported_error("apply needs an integer model");
  if (z.dim() != n_) throw dimension_error("point dimension does not match the model");
  const double y = z.im;
  if (n_ == 2) {
    const double a = static_cast<double>(g.a.re), b = static_cast<double>(g.b.re);
    const double c = static_cast<double>(g.c.re), d = static_cast<double>(g.d.re);
    const double x = z.re[0];
    const double u = c * x + d;
    const double den = u * u + c * c * y * y;
    if (den < 1e-300) throw singular_error("Mobius denominator vanishes");
    return HPoint(CliffordVector{((a * x + b) * u + a * c * y * y) / den}, y / den);
  }
  // Complex entries acting on x + j y with x = x0 + x1 i1.
  auto cx = [](GaussInt v) { return std::pair<double, double>{static_cast<double>(v.re), static_cast<double>(v.im)}; };
  auto mul = [](std::pair<double, double> p, std::pair<double, double> q) {
    return std::pair<double, double>{p.first * q.first - p.second * q.second, p.first * q.second + p.second * q.first};
  };
  auto add = [](std::pair<double, double> p, std::pair<double, double> q) {
    return std::pair<double, double>{p.first + q.first, p.second + q.second};
  };
  auto conj = [](std::pair<double, double> p) { return std::pair<double, double>{p.first, -p.second}; };
  const std::pair<double, double> X{z.re[0], z.re[1]};
  const auto a = cx(g.a), b = cx(g.b), c = cx(g.c), d = cx(g.d);
  const auto u = add(mul(c, X), d);
  const double den = u.first * u.first + u.second * u.second + (c.first * c.first + c.second * c.second) * y * y;
  if (den < 1e-300) throw singular_error("Mobius denominator vanishes");
  const auto top = add(mul(add(mul(a, X), b), conj(u)), mul(mul(a, conj(c)), {y * y, 0.0}));
  return HPoint(CliffordVector{top.first / den, top.second / den}, y / den);
}

std::pair<IntMatrix, HPoint> LatticeModel::reduce(const HPoint& z0) const {
  if (kind_ == ModelKind::generic) throw unsupported_error("reduce needs an integer model");
  if (z0.dim() != n_) throw dimension_error("point dimension does not match the model");
  IntMatrix g0{};
  HPoint z = z0;
  const IntMatrix S{GaussInt{0}, GaussInt{-1}, GaussInt{1}, GaussInt{0}};
  for (int it = 0; it < 100000; ++it) {
    GaussInt m{-static_cast<std::int64_t>(std::llround(z.re[0])),
               n_ == 3 ? -static_cast<std::int64_t>(std::llround(z.re[1])) : 0};
    if (!m.is_zero()) {
      const IntMatrix T{GaussInt{1}, m, GaussInt{0}, GaussInt{1}};
      g0 = T * g0;
      std::vector<double> re(z.re.components().begin(), z.re.components().end());
      re[0] += static_cast<double>(m.re);
      if (n_ == 3) re[1] += static_cast<double>(m.im);
      z = HPoint(CliffordVector(std::move(re)), z.im);
    }
    if (z.re.norm2() + z.im * z.im >= 1.0) return {g0, z};
    g0 = S * g0;
    z = apply(S, z);
  }
  throw convergence_error("reduction to the standard region did not terminate");
}

Rational LatticeModel::cosh_to_base(const OrbitPoint& p) const {
  if (p.norm == 0) throw unsupported_error("exact cosh needs an integer-model orbit point");
  const std::int64_t N = p.norm;
  if (kind_ == ModelKind::modular_rho) {
    const std::int64_t v = p.num.re;
    return Rational(v * v - 2 * N * v + 3 + 4 * N * N, 6 * N);
  }
  return Rational(p.num.norm() + 1 + N * N, 2 * N);
}

long double LatticeModel::cosh_to_origin(const OrbitPoint& p) const {
  if (p.norm == 0) {
    return static_cast<long double>(cosh_distance(p.point(), HPoint::origin(n_)));
  }
  const long double N = static_cast<long double>(p.norm);
  const long double q = static_cast<long double>(p.num.norm());
  if (kind_ == ModelKind::modular_rho) return (q + 3 + 4 * N * N) / (4 * std::sqrt(3.0L) * N);
  return (q + 1 + N * N) / (2 * N);
}

bool LatticeModel::canonical_bottom_row(GaussInt c, GaussInt d) const {
  for (const auto& h : stab_lifts_) {
    const GaussInt c2 = c * h.a + d * h.c;
    const GaussInt d2 = c * h.b + d * h.d;
    if (lex_less(c2, d2, c, d)) return false;
  }
  return true;
}

void LatticeModel::for_each_bottom_row(double norm_lo, double norm_hi,
                                       const std::function<void(GaussInt, GaussInt, std::int64_t)>& f) const {
  if (!(norm_hi >= 1)) return;
  if (norm_hi > 4e15) throw range_error("enumeration range too large");
  const std::int64_t lo = std::max<std::int64_t>(1, ceil_i(norm_lo));
  const std::int64_t hi = floor_i(norm_hi);
  if (lo > hi) return;
  auto emit = [&](GaussInt c, GaussInt d) {
    if (kind_ == ModelKind::picard) {
      if (!gauss_gcd(c, d).is_unit()) return;
    } else if (std::gcd(c.re, d.re) != 1) {
      return;
    }
    if (!canonical_bottom_row(c, d)) return;
    f(c, d, bottom_norm(c, d));
  };
  switch (kind_) {
    case ModelKind::modular_i: {
      const std::int64_t cmax = floor_i(std::sqrt(static_cast<double>(hi)) + 1);
      for (std::int64_t c = -cmax; c <= cmax; ++c) {
        const std::int64_t c2 = c * c;
        if (c2 > hi) continue;
        for_each_square_in(lo - c2, hi - c2, [&](std::int64_t d) { emit(c, d); });
      }
      break;
    }
    case ModelKind::modular_rho: {
      // 4N = (2d + c)^2 + 3 c^2.
      const std::int64_t cmax = floor_i(std::sqrt(4.0 * static_cast<double>(hi) / 3.0) + 1);
      for (std::int64_t c = -cmax; c <= cmax; ++c) {
        const std::int64_t rest = 3 * c * c;
        if (rest > 4 * hi) continue;
        for_each_square_in(4 * lo - rest, 4 * hi - rest, [&](std::int64_t e) {
          if (((e - c) % 2 + 2) % 2 != 0) return;
          emit(c, (e - c) / 2);
        });
      }
      break;
    }
    case ModelKind::picard: {
      const std::int64_t r = floor_i(std::sqrt(static_cast<double>(hi)) + 1);
      for (std::int64_t c0 = -r; c0 <= r; ++c0) {
        const std::int64_t s0 = c0 * c0;
        if (s0 > hi) continue;
        for (std::int64_t c1 = -r; c1 <= r; ++c1) {
          const std::int64_t s1 = s0 + c1 * c1;
          if (s1 > hi) continue;
          for (std::int64_t d0 = -r; d0 <= r; ++d0) {
            const std::int64_t s2 = s1 + d0 * d0;
            if (s2 > hi) continue;
            for_each_square_in(lo - s2, hi - s2, [&](std::int64_t d1) { emit({c0, c1}, {d0, d1}); });
          }
        }
      }
      break;
    }
    case ModelKind::generic:
      throw unsupported_error("bottom rows exist only for the integer models");
  }
}

namespace {

// Some gamma with bottom row (c, d).
IntMatrix complete_row(GaussInt c, GaussInt d) {
  const auto [g, x, y] = gauss_ext_gcd(d, c);
  const GaussInt u = unit_inverse(g);
  return {x * u, -(y * u), c, d};
}

}  // namespace

void LatticeModel::for_each_double_coset(double norm_lo, double norm_hi, const Visitor& visit) const {
  if (kind_ == ModelKind::generic) throw unsupported_error("double cosets need an integer model");
  for_each_bottom_row(norm_lo, norm_hi, [&](GaussInt c, GaussInt d, std::int64_t) {
    visit(point_of(complete_row(c, d)));
  });
}

void LatticeModel::for_each_in_slices(double y_lo, double y_hi, const SliceFn& slice, const Visitor& visit) const {
  if (kind_ == ModelKind::generic) throw unsupported_error("slice enumeration needs an integer model");
  if (!(y_lo > 0) || !(y_hi >= y_lo)) return;
  const double imw = w_.im;
  const std::int64_t scale = kind_ == ModelKind::modular_rho ? 2 : 1;
  for_each_bottom_row(imw / y_hi * (1 - 1e-12), imw / y_lo * (1 + 1e-12), [&](GaussInt c, GaussInt d,
                                                                            std::int64_t N) {
    const double y = imw / static_cast<double>(N);
    const auto box = slice(y);
    if (!box) return;
    OrbitPoint p = point_of(complete_row(c, d));
    const double nd = static_cast<double>(N);
    auto range = [&](int k, double x0) {
      const double lo = box->lo[static_cast<std::size_t>(k)], hi = box->hi[static_cast<std::size_t>(k)];
      const double pad = 1e-9 * (1 + std::abs(lo) + std::abs(hi));
      return std::pair<std::int64_t, std::int64_t>{ceil_i(lo - x0 - pad), floor_i(hi - x0 + pad)};
    };
    const auto [m0lo, m0hi] = range(0, p.x[0]);
    std::int64_t m1lo = 0, m1hi = 0;
    if (n_ == 3) std::tie(m1lo, m1hi) = range(1, p.x[1]);
    const OrbitPoint base = p;
    for (std::int64_t m0 = m0lo; m0 <= m0hi; ++m0)
      for (std::int64_t m1 = m1lo; m1 <= m1hi; ++m1) {
        const GaussInt m{m0, m1};
        p.gamma.a = base.gamma.a + m * c;
        p.gamma.b = base.gamma.b + m * d;
        p.num = base.num + GaussInt{scale * N} * m;
        p.x[0] = static_cast<double>(p.num.re) / (static_cast<double>(scale) * nd);
        if (n_ == 3) p.x[1] = static_cast<double>(p.num.im) / nd;
        visit(p);
      }
  });
}

void LatticeModel::for_each_in_ball(const HPoint& center, double radius, const Visitor& visit) const {
  if (center.dim() != n_) throw dimension_error("center dimension does not match the model");
  if (!(radius >= 0)) return;
  const double ch = std::cosh(radius);
  const double slack = ch * (1 + 1e-9);
  if (kind_ == ModelKind::generic) {
    for (const auto& p : generic_->points)
      if (cosh_distance(center, p.point()) <= slack) visit(p);
    return;
  }
  const auto [g0, z] = reduce(center);
  const IntMatrix g0inv = inverse(g0);
  const bool trivial = g0 == IntMatrix{};
  const double yc = z.im * ch;
  const double re = z.im * std::sinh(radius);
  const std::size_t dims = static_cast<std::size_t>(n_ - 1);
  for_each_in_slices(
      z.im * std::exp(-radius), z.im * std::exp(radius),
      [&](double y) -> std::optional<Box> {
        const double h2 = re * re - (y - yc) * (y - yc);
        const double h = h2 > 0 ? std::sqrt(h2) : 0.0;
        if (h2 < -1e-9 * re * re) return std::nullopt;
        Box b{std::vector<double>(dims), std::vector<double>(dims)};
        for (std::size_t k = 0; k < dims; ++k) {
          b.lo[k] = z.re[k] - h;
          b.hi[k] = z.re[k] + h;
        }
        return b;
      },
      [&](const OrbitPoint& p) {
        double gap = (p.y - z.im) * (p.y - z.im);
        for (std::size_t k = 0; k < dims; ++k) gap += (p.x[k] - z.re[k]) * (p.x[k] - z.re[k]);
        if (1 + gap / (2 * p.y * z.im) > slack) return;
        if (trivial) {
          visit(p);
        } else {
          visit(point_of(g0inv * p.gamma));
        }
      });
}

// ---------------------------------------------------------------------------
// Operations.

OrbitResult orbit_ball(const LatticeModel& model, double t, double s) {
  if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive");
  if (!(s > 0)) throw std::invalid_argument("s must be positive");
  OrbitResult out;
  out.best_effort = !model.exact();
  const long double cosh_t = std::cosh(static_cast<long double>(t));
  const bool shell = s < t;
  const long double cosh_in = shell ? std::cosh(static_cast<long double>(t - s)) : 1.0L;
  const HPoint o = HPoint::origin(model.dim());
  model.for_each_in_ball(o, t, [&](const OrbitPoint& p) {
    const long double c = model.cosh_to_origin(p);
    if (c > cosh_t) return;
    if (shell ? !(c > cosh_in) : (p.norm != 0 ? c <= 1.0L : c <= 1.0L + 1e-12L)) return;
    out.points.push_back(p);
  });
  return out;
}

OrbitResult orbit_in_ball(const LatticeModel& model, const HPoint& center, double radius) {
  OrbitResult out;
  out.best_effort = !model.exact();
  model.for_each_in_ball(center, radius, [&](const OrbitPoint& p) {
    if (hyp_distance(center, p.point()) <= radius) out.points.push_back(p);
  });
  return out;
}

namespace {

struct Piece {
  std::vector<double> lo, hi;
  double y1 = 1, y2 = 1;
  HPoint center;
  double radius = 0;
};

std::vector<Piece> cone_pieces(const CuspidalCone& cone, int n) {
  if (!std::isfinite(cone.b)) throw range_error("region must have a finite upper height");
  if (!(cone.b > cone.a)) return {};
  if (region_dim(cone.base) != n - 1) throw dimension_error("cone base dimension does not match the model");
  const Box bounds = region_bounds(cone.base);
  const std::size_t dims = static_cast<std::size_t>(n - 1);
  std::vector<double> lo(dims), hi(dims);
  for (std::size_t k = 0; k < dims; ++k) {
    lo[k] = cone.scale * bounds.lo[k];
    hi[k] = cone.scale * bounds.hi[k];
    if (lo[k] > hi[k]) std::swap(lo[k], hi[k]);
    if (!(hi[k] > lo[k])) return {};
  }
  std::vector<Piece> pieces;
  for (double h = cone.a; h < cone.b; h += 1.0) {
    const double y1 = std::exp(h);
    const double y2 = std::exp(std::min(h + 1.0, cone.b));
    std::vector<std::int64_t> parts(dims);
    std::size_t total = 1;
    for (std::size_t k = 0; k < dims; ++k) {
      parts[k] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((hi[k] - lo[k]) / y1)));
      total *= static_cast<std::size_t>(parts[k]);
      if (total > 50'000'000) throw range_error("region too large for enumeration");
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
      Piece p;
      p.y1 = y1;
      p.y2 = y2;
      p.lo.resize(dims);
      p.hi.resize(dims);
      std::size_t rem = idx;
      double w2 = 0;
      std::vector<double> c(dims);
      for (std::size_t k = 0; k < dims; ++k) {
        const std::int64_t j = static_cast<std::int64_t>(rem % static_cast<std::size_t>(parts[k]));
        rem /= static_cast<std::size_t>(parts[k]);
        const double step = (hi[k] - lo[k]) / static_cast<double>(parts[k]);
        p.lo[k] = lo[k] + static_cast<double>(j) * step;
        p.hi[k] = j + 1 == parts[k] ? hi[k] : lo[k] + static_cast<double>(j + 1) * step;
        c[k] = 0.5 * (p.lo[k] + p.hi[k]);
        w2 += 0.25 * (p.hi[k] - p.lo[k]) * (p.hi[k] - p.lo[k]);
      }
      const double yc = std::sqrt(y1 * y2);
      p.center = HPoint(CliffordVector(c), yc);
      double ch = 1;
      for (double y : {y1, y2}) ch = std::max(ch, 1 + (w2 + (y - yc) * (y - yc)) / (2 * y * yc));
      p.radius = std::acosh(ch) * (1 + 1e-12) + 1e-12;
      pieces.push_back(std::move(p));
    }
  }
  return pieces;
}

template <class F>
void visit_region(const LatticeModel& model, const GMatrix& g, const CuspidalCone& region, F&& f) {
  if (g.space_dim() != model.dim()) throw dimension_error("matrix dimension does not match the model");
  const GMatrix ginv = sl_inverse(g);
  for (const auto& piece : cone_pieces(region, model.dim())) {
    model.for_each_in_ball(mobius_apply(ginv, piece.center), piece.radius, [&](const OrbitPoint& p) {
      const HPoint gz = mobius_apply(g, p.point());
      if (!(gz.im >= piece.y1 && gz.im < piece.y2)) return;
      for (std::size_t k = 0; k < piece.lo.size(); ++k)
        if (!(gz.re[k] >= piece.lo[k] && gz.re[k] < piece.hi[k])) return;
      if (!cone_contains(region, gz)) return;
      f(p);
    });
  }
}

}  // namespace

OrbitResult orbit_in_region(const LatticeModel& model, const GMatrix& g, const CuspidalCone& region) {
  OrbitResult out;
  out.best_effort = !model.exact();
  visit_region(model, g, region, [&](const OrbitPoint& p) { out.points.push_back(p); });
  return out;
}

std::size_t count_in_region(const LatticeModel& model, const GMatrix& g, const CuspidalCone& region) {
  std::size_t count = 0;
  visit_region(model, g, region, [&](const OrbitPoint&) { ++count; });
  return count;
}

std::vector<CuspPoint> cusp_points(const LatticeModel& model, double t, double s) {
  if (!model.has_cusp()) throw unsupported_error("model has no declared cusp");
  if (!(s > 0)) throw std::invalid_argument("s must be positive");
  if (!std::isfinite(t)) throw std::invalid_argument("t must be finite");
  const double y_lo = std::exp(-t);
  const double y_hi = std::isfinite(s) ? std::exp(s - t) : std::numeric_limits<double>::infinity();
  const double imw = model.base_point().im;
  std::vector<CuspPoint> out;
  model.for_each_double_coset(imw / y_hi * (1 - 1e-12), imw / y_lo * (1 + 1e-12), [&](const OrbitPoint& p) {
    if (!(p.y >= y_lo && p.y < y_hi)) return;
    CuspPoint q;
    q.n = p.n;
    q.im = p.y;
    const std::int64_t den = p.norm * (model.kind() == ModelKind::modular_rho ? 2 : 1);
    auto frac = [den](std::int64_t v) { return static_cast<double>(((v % den) + den) % den) / static_cast<double>(den); };
    q.re[0] = frac(p.num.re);
    if (p.n == 3) q.re[1] = frac(p.num.im);
    out.push_back(q);
  });
  return out;
}

DistanceSpectrum distance_spectrum(const LatticeModel& model, double cutoff) {
  if (!(cutoff > 0) || !std::isfinite(cutoff)) throw std::invalid_argument("cutoff must be positive");
  DistanceSpectrum out;
  out.cutoff = cutoff;
  out.best_effort = !model.exact();
  const double ch_max = std::cosh(cutoff);
  if (model.exact()) {
    std::map<Rational, std::int64_t> groups;
    model.for_each_in_ball(model.base_point(), cutoff, [&](const OrbitPoint& p) {
      const Rational c = model.cosh_to_base(p);
      if (c <= Rational(1)) return;
      if (c.to_double() > ch_max) return;
      ++groups[c];
    });
    for (const auto& [c, mult] : groups) {
      const double cd = c.to_double();
      out.entries.push_back({std::acosh(cd), cd, mult, c});
    }
    return out;
  }
  std::vector<double> ells;
  model.for_each_in_ball(model.base_point(), cutoff, [&](const OrbitPoint& p) {
    const double d = hyp_distance(model.base_point(), p.point());
    if (d > 1e-9 && d <= cutoff) ells.push_back(d);
  });
  std::sort(ells.begin(), ells.end());
  for (double d : ells) {
    if (!out.entries.empty() && d - out.entries.back().ell <= 1e-9) {
      ++out.entries.back().multiplicity;
    } else {
      out.entries.push_back({d, std::cosh(d), 1, std::nullopt});
    }
  }
  return out;
}

double density_constant(const LatticeModel& model, double s) {
  if (!(s > 0)) throw std::invalid_argument("s must be positive");
  const int k = model.dim() - 1;
  const double num = std::isfinite(s) ? -std::expm1(-k * s) : 1.0;
  return num / (k * model.stab_order() * model.covolume());
}

ModelConstants model_constants(const LatticeModel& model, double s) {
  ModelConstants c;
  c.n = model.dim();
  c.stab_order = model.stab_order();
  c.covolume = model.covolume();
  c.theta = density_constant(model, s);
  for (double L = 2; L <= 16; L *= 2) {
    const auto spec = distance_spectrum(model, L);
    if (!spec.entries.empty()) {
      c.delta_min = spec.delta_min();
      return c;
    }
  }
  throw range_error("no orbit point found near the base point");
}

}  // namespace hypdir
