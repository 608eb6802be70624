#include "hypdir/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hypdir/errors.hpp"
#include "hypdir/numerics.hpp"
#include "hypdir/parallel.hpp"

namespace hypdir {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxRejections = 1000000;

double angle_of(std::span<const double> u) {
  double a = std::atan2(u[1], u[0]);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

int cell_of(double v, int grid) {
  const int c = static_cast<int>(std::floor((v + 1.0) * 0.5 * grid));
  return std::clamp(c, 0, grid - 1);
}

int torus_cell(double v, int grid) {
  const int c = static_cast<int>(std::floor(v * grid));
  return std::clamp(c, 0, grid - 1);
}

// Permutation sorting `keys` ascending (stable, so equal keys keep input order).
std::vector<std::size_t> sort_order(const std::vector<std::uint64_t>& keys) {
  std::vector<std::size_t> order(keys.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return order;
}

std::pair<std::size_t, std::size_t> key_range(const std::vector<std::uint64_t>& keys, std::uint64_t lo,
                                              std::uint64_t hi) {
  const auto b = std::lower_bound(keys.begin(), keys.end(), lo);
  const auto e = std::upper_bound(b, keys.end(), hi);
  return {static_cast<std::size_t>(b - keys.begin()), static_cast<std::size_t>(e - keys.begin())};
}

}  // namespace

// ---------------------------------------------------------------------------
// DirectionSet

DirectionSet::DirectionSet(int n, double t, double s, std::vector<double> coords, std::string model_name,
                           bool best_effort)
    : n_(n), t_(t), s_(s), model_(std::move(model_name)), best_effort_(best_effort), coords_(std::move(coords)) {
  if (n < 2) throw dimension_error("directions need n >= 2");
  if (coords_.size() % static_cast<std::size_t>(n) != 0) throw dimension_error("coordinate count is not a multiple of n");
  count_ = coords_.size() / static_cast<std::size_t>(n);
  build_index();
}

void DirectionSet::build_index() {
  const std::size_t n = static_cast<std::size_t>(n_);
  std::vector<std::uint64_t> keys(count_);
  if (n_ == 2) {
    std::vector<double> ang(count_);
    for (std::size_t i = 0; i < count_; ++i) ang[i] = angle_of(direction(i));
    std::vector<std::size_t> order(count_);
    for (std::size_t i = 0; i < count_; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ang[a] < ang[b]; });
    std::vector<double> sorted(coords_.size());
    angles_.resize(count_);
    for (std::size_t i = 0; i < count_; ++i) {
      angles_[i] = ang[order[i]];
      sorted[2 * i] = coords_[2 * order[i]];
      sorted[2 * i + 1] = coords_[2 * order[i] + 1];
    }
    coords_ = std::move(sorted);
    return;
  }
  if (n_ != 3) return;
  grid_ = static_cast<int>(std::clamp(std::sqrt(static_cast<double>(count_) / 12.0), 1.0, 1024.0));
  const auto g = static_cast<std::uint64_t>(grid_);
  for (std::size_t i = 0; i < count_; ++i) {
    const auto u = direction(i);
    keys[i] = (static_cast<std::uint64_t>(cell_of(u[0], grid_)) * g + static_cast<std::uint64_t>(cell_of(u[1], grid_))) * g +
              static_cast<std::uint64_t>(cell_of(u[2], grid_));
  }
  const auto order = sort_order(keys);
  std::vector<double> sorted(coords_.size());
  keys_.resize(count_);
  for (std::size_t i = 0; i < count_; ++i) {
    keys_[i] = keys[order[i]];
    for (std::size_t k = 0; k < n; ++k) sorted[n * i + k] = coords_[n * order[i] + k];
  }
  coords_ = std::move(sorted);
}

std::span<const double> DirectionSet::direction(std::size_t i) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  return std::span<const double>(coords_).subspan(n * i, n);
}

const std::vector<double>& DirectionSet::angles() const {
  if (n_ != 2) throw unsupported_error("angles are defined for n = 2 only");
  return angles_;
}

std::size_t DirectionSet::count_in_arc(double a, double b) const {
  if (n_ != 2) throw unsupported_error("arcs are defined for n = 2 only");
  if (!(b > a)) return 0;
  if (b - a >= kTwoPi) return count_;
  const double shift = std::floor(a / kTwoPi) * kTwoPi;
  a -= shift;
  b -= shift;
  auto open = [&](double lo, double hi) -> std::size_t {
    if (!(hi > lo)) return 0;
    const auto e = std::lower_bound(angles_.begin(), angles_.end(), hi);
    const auto s = std::upper_bound(angles_.begin(), e, lo);
    return static_cast<std::size_t>(e - s);
  };
  if (b <= kTwoPi) return open(a, b);
  const auto wrap = std::lower_bound(angles_.begin(), angles_.end(), b - kTwoPi);
  return open(a, kTwoPi) + static_cast<std::size_t>(wrap - angles_.begin());
}

std::size_t DirectionSet::count_in_cap(const SphericalCap& cap) const {
  if (static_cast<int>(cap.center.size()) != n_) throw dimension_error("cap centre dimension mismatch");
  const double r = cap.angular_radius;
  if (r >= std::numbers::pi) return count_;
  if (!(r > 0)) return 0;
  if (n_ == 2) {
    const double c = angle_of(cap.center);
    return count_in_arc(c - r, c + r);
  }
  std::size_t hits = 0;
  auto test = [&](std::size_t i) {
    if (angle_between(direction(i), cap.center) < r) ++hits;
  };
  if (n_ != 3) {
    for (std::size_t i = 0; i < count_; ++i) test(i);
    return hits;
  }
  const double chord = 2.0 * std::sin(r / 2.0);
  int lo[3], hi[3];
  for (int k = 0; k < 3; ++k) {
    lo[k] = cell_of(cap.center[static_cast<std::size_t>(k)] - chord, grid_);
    hi[k] = cell_of(cap.center[static_cast<std::size_t>(k)] + chord, grid_);
  }
  const std::size_t columns = static_cast<std::size_t>(hi[0] - lo[0] + 1) * static_cast<std::size_t>(hi[1] - lo[1] + 1);
  if (columns * 4 > count_) {
    for (std::size_t i = 0; i < count_; ++i) test(i);
    return hits;
  }
  const auto g = static_cast<std::uint64_t>(grid_);
  for (int ix = lo[0]; ix <= hi[0]; ++ix)
    for (int iy = lo[1]; iy <= hi[1]; ++iy) {
      const std::uint64_t base = (static_cast<std::uint64_t>(ix) * g + static_cast<std::uint64_t>(iy)) * g;
      const auto [b, e] = key_range(keys_, base + static_cast<std::uint64_t>(lo[2]), base + static_cast<std::uint64_t>(hi[2]));
      for (std::size_t i = b; i < e; ++i) test(i);
    }
  return hits;
}

// ---------------------------------------------------------------------------
// Directions and disc counts

DirectionSet directions(const LatticeModel& model, double t, double s) {
  const OrbitResult orbit = orbit_ball(model, t, s);
  const std::size_t n = static_cast<std::size_t>(model.dim());
  std::vector<double> coords;
  coords.reserve(orbit.points.size() * n);
  for (const auto& p : orbit.points) {
    const auto u = direction_vector(p.point());
    coords.insert(coords.end(), u.begin(), u.end());
  }
  return DirectionSet(model.dim(), t, s, std::move(coords), model.name(), orbit.best_effort);
}

DirectionSet directions(const LatticeModel& model, const GMatrix& g, double t, double s) {
  if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive");
  if (!(s > 0)) throw std::invalid_argument("s must be positive");
  if (g.space_dim() != model.dim()) throw dimension_error("matrix does not act on the model's space");
  const int n = model.dim();
  const HPoint o = HPoint::origin(n);
  const HPoint center = mobius_apply(sl_inverse(g), o);
  const OrbitResult orbit = orbit_in_ball(model, center, t);
  const double inner = s < t ? t - s : 0.0;
  std::vector<double> coords;
  coords.reserve(orbit.points.size() * static_cast<std::size_t>(n));
  for (const auto& p : orbit.points) {
    const HPoint z = mobius_apply(g, p.point());
    const double d = distance_from_origin(z);
    if (d > t || d < 1e-9 || (s < t && !(d > inner))) continue;
    const auto u = direction_vector(z);
    coords.insert(coords.end(), u.begin(), u.end());
  }
  return DirectionSet(n, t, s, std::move(coords), model.name(), orbit.best_effort);
}

std::size_t count_disc(const DirectionSet& ds, double sigma, std::span<const double> v) {
  if (ds.size() == 0) throw std::invalid_argument("direction set is empty");
  if (!(sigma >= 0)) throw std::invalid_argument("sigma must be non-negative");
  if (sigma == 0) return 0;
  return ds.count_in_cap(scaled_disc(ds.dim(), sigma, v, ds.size()));
}

// ---------------------------------------------------------------------------
// Sampling

CountSampler CountSampler::uniform(std::uint64_t seed) {
  CountSampler s;
  s.seed = seed;
  return s;
}

CountSampler CountSampler::with_density(std::function<double(std::span<const double>)> f, double bound,
                                        std::uint64_t seed) {
  if (!f) throw std::invalid_argument("density function is empty");
  if (!(bound >= 1.0) || !std::isfinite(bound)) throw std::invalid_argument("density bound must be finite and >= 1");
  CountSampler s;
  s.kind = Kind::density;
  s.density = std::move(f);
  s.bound = bound;
  s.seed = seed;
  return s;
}

namespace {

template <class Draw>
void rejection(const CountSampler& s, CounterRng& rng, std::span<double> out, Draw draw) {
  for (int it = 0; it < kMaxRejections; ++it) {
    draw(out);
    if (s.kind == CountSampler::Kind::uniform) return;
    const double f = s.density(out);
    if (!(f >= 0) || f > s.bound * (1 + 1e-12)) throw std::domain_error("density is negative or exceeds its declared bound");
    if (rng.uniform() * s.bound < f) return;
  }
  throw convergence_error("rejection sampler did not accept a draw");
}

}  // namespace

void CountSampler::draw_sphere(std::uint64_t index, std::span<double> v) const {
  CounterRng rng(seed, index);
  rejection(*this, rng, v, [&](std::span<double> out) { rng.on_sphere(out); });
}

void CountSampler::draw_torus(std::uint64_t index, std::span<double> x) const {
  CounterRng rng(seed, index);
  rejection(*this, rng, x, [&](std::span<double> out) {
    for (double& c : out) c = rng.uniform();
  });
}

// ---------------------------------------------------------------------------
// Pmf

double Pmf::total() const {
  std::vector<double> all(p);
  all.push_back(overflow);
  return pairwise_sum(all);
}

double Pmf::mean() const {
  std::vector<double> terms(p.size());
  for (std::size_t r = 0; r < p.size(); ++r) terms[r] = static_cast<double>(r) * p[r];
  double m = pairwise_sum(terms);
  if (samples > 0)
    for (auto v : overflow_values) m += static_cast<double>(v) / static_cast<double>(samples);
  return m;
}

Pmf make_pmf(std::span<const std::int64_t> counts, int r_max) {
  if (r_max < 0) throw std::invalid_argument("r_max must be non-negative");
  if (counts.empty()) throw std::invalid_argument("no samples");
  Pmf out;
  out.samples = counts.size();
  std::vector<std::size_t> hist(static_cast<std::size_t>(r_max) + 1, 0);
  std::size_t over = 0;
  for (auto c : counts) {
    if (c < 0) throw std::invalid_argument("negative count");
    if (c > r_max) {
      ++over;
      out.overflow_values.push_back(c);
    } else {
      ++hist[static_cast<std::size_t>(c)];
    }
  }
  const double m = static_cast<double>(counts.size());
  auto se = [m](double p) { return std::sqrt(std::max(0.0, p * (1 - p)) / m); };
  out.p.resize(hist.size());
  out.std_error.resize(hist.size());
  for (std::size_t r = 0; r < hist.size(); ++r) {
    out.p[r] = static_cast<double>(hist[r]) / m;
    out.std_error[r] = se(out.p[r]);
  }
  out.overflow = static_cast<double>(over) / m;
  out.overflow_std_error = se(out.overflow);
  return out;
}

double total_variation(const Pmf& p, const Pmf& q) {
  const std::size_t r = std::min(p.p.size(), q.p.size());
  double sum = 0, tp = 0, tq = 0;
  for (std::size_t k = 0; k < r; ++k) {
    sum += std::abs(p.p[k] - q.p[k]);
    tp += p.p[k];
    tq += q.p[k];
  }
  sum += std::abs((1.0 - tp) - (1.0 - tq));
  return 0.5 * sum;
}

std::vector<std::int64_t> disc_counts(const DirectionSet& ds, double sigma, const CountSampler& sampler,
                                      std::size_t samples, unsigned threads) {
  if (samples == 0) throw std::invalid_argument("sample count must be positive");
  if (ds.size() == 0) throw std::invalid_argument("direction set is empty");
  std::vector<std::int64_t> out(samples);
  const std::size_t n = static_cast<std::size_t>(ds.dim());
  parallel_for(samples, threads, [&](std::size_t i) {
    std::vector<double> v(n);
    sampler.draw_sphere(i, v);
    out[i] = static_cast<std::int64_t>(count_disc(ds, sigma, v));
  });
  return out;
}

std::vector<std::vector<std::int64_t>> arc_counts(const DirectionSet& ds, std::span<const std::pair<double, double>> arcs,
                                                  const CountSampler& sampler, std::size_t samples, unsigned threads) {
  if (ds.dim() != 2) throw unsupported_error("arc counts are defined for n = 2 only");
  if (samples == 0) throw std::invalid_argument("sample count must be positive");
  if (ds.size() == 0) throw std::invalid_argument("direction set is empty");
  std::vector<std::vector<std::int64_t>> out(arcs.size(), std::vector<std::int64_t>(samples));
  const double unit = kTwoPi / static_cast<double>(ds.size());
  parallel_for(samples, threads, [&](std::size_t i) {
    double v[2];
    sampler.draw_sphere(i, v);
    const double c = angle_of(v);
    for (std::size_t j = 0; j < arcs.size(); ++j)
      out[j][i] = static_cast<std::int64_t>(ds.count_in_arc(c + unit * arcs[j].first, c + unit * arcs[j].second));
  });
  return out;
}

Pmf counting_pmf(const DirectionSet& ds, double sigma, const CountSampler& sampler, std::size_t samples, int r_max,
                 unsigned threads) {
  const auto counts = disc_counts(ds, sigma, sampler, samples, threads);
  return make_pmf(counts, r_max);
}

Pmf counting_pmf(const LatticeModel& model, const GMatrix& g, double t, double s, double sigma,
                 const CountSampler& sampler, std::size_t samples, int r_max, unsigned threads) {
  return counting_pmf(directions(model, g, t, s), sigma, sampler, samples, r_max, threads);
}

// ---------------------------------------------------------------------------
// Pair correlation and gaps

std::vector<double> pair_corr_empirical(const DirectionSet& ds, std::span<const double> xi_grid) {
  if (ds.dim() != 2) throw unsupported_error("pair correlation is implemented for n = 2 only");
  const std::size_t n = ds.size();
  if (n < 2) throw std::invalid_argument("pair correlation needs at least two directions");
  for (std::size_t k = 0; k < xi_grid.size(); ++k) {
    if (!(xi_grid[k] > 0)) throw std::invalid_argument("xi grid must be positive");
    if (k > 0 && !(xi_grid[k] > xi_grid[k - 1])) throw std::invalid_argument("xi grid must be increasing");
  }
  if (xi_grid.empty()) return {};
  const auto& th = ds.angles();
  const double scale = static_cast<double>(n) / kTwoPi;
  const double xi_max = xi_grid.back();
  std::vector<double> seps;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k < n; ++k) {
      const std::size_t j = (i + k) % n;
      const double delta = j > i ? th[j] - th[i] : th[j] + kTwoPi - th[i];
      const double back = i > j ? th[i] - th[j] : th[i] + kTwoPi - th[j];
      if (delta > back || (delta == back && j < i)) break;
      const double x = scale * delta;
      if (!(x < xi_max)) break;
      seps.push_back(x);
    }
  }
  std::sort(seps.begin(), seps.end());
  std::vector<double> out(xi_grid.size());
  for (std::size_t k = 0; k < xi_grid.size(); ++k) {
    const auto c = std::lower_bound(seps.begin(), seps.end(), xi_grid[k]) - seps.begin();
    out[k] = static_cast<double>(c) / static_cast<double>(n);
  }
  return out;
}

std::vector<double> gaps(const DirectionSet& ds) {
  if (ds.dim() != 2) throw unsupported_error("gaps are defined for n = 2 only");
  const std::size_t n = ds.size();
  if (n < 2) throw std::invalid_argument("gaps need at least two directions");
  const auto& th = ds.angles();
  const double scale = static_cast<double>(n) / kTwoPi;
  std::vector<double> out(n);
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = scale * (th[i + 1] - th[i]);
  out[n - 1] = scale * (th[0] + kTwoPi - th[n - 1]);
  return out;
}

// ---------------------------------------------------------------------------
// Cuspidal observer

CuspSet::CuspSet(int n, std::vector<CuspPoint> points) : n_(n), points_(std::move(points)) {
  if (n != 2 && n != 3) throw dimension_error("cusp sets exist for n = 2 and n = 3");
  const double count = static_cast<double>(points_.size());
  grid_ = n == 2 ? static_cast<int>(std::clamp(count / 4.0, 1.0, 1048576.0))
                 : static_cast<int>(std::clamp(std::sqrt(count / 4.0), 1.0, 4096.0));
  const auto g = static_cast<std::uint64_t>(grid_);
  std::vector<std::uint64_t> keys(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    keys[i] = static_cast<std::uint64_t>(torus_cell(p.re[0], grid_));
    if (n == 3) keys[i] = keys[i] * g + static_cast<std::uint64_t>(torus_cell(p.re[1], grid_));
  }
  const auto order = sort_order(keys);
  std::vector<CuspPoint> sorted(points_.size());
  keys_.resize(points_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted[i] = points_[order[i]];
    keys_[i] = keys[order[i]];
  }
  points_ = std::move(sorted);
}

std::size_t CuspSet::count(const Region& a, std::span<const double> x) const {
  const int k = n_ - 1;
  if (region_dim(a) != k) throw dimension_error("test set dimension does not match the torus");
  if (static_cast<int>(x.size()) != k) throw dimension_error("shift dimension does not match the torus");
  if (points_.empty()) return 0;
  if (!(region_volume(a) > 0)) return 0;
  const double scale = std::pow(static_cast<double>(points_.size()), -1.0 / k);
  const Box bounds = region_bounds(a);
  // Re p must lie in [lo_d, hi_d] + l for some integer vector l.
  double lo[2] = {0, 0}, hi[2] = {0, 0};
  long l_lo[2] = {0, 0}, l_hi[2] = {0, 0};
  bool wide = false;
  for (int d = 0; d < k; ++d) {
    const auto du = static_cast<std::size_t>(d);
    lo[d] = scale * bounds.lo[du] - x[du];
    hi[d] = scale * bounds.hi[du] - x[du];
    if (hi[d] - lo[d] >= 1.0) wide = true;
    l_lo[d] = static_cast<long>(std::floor(-hi[d])) - 1;
    l_hi[d] = static_cast<long>(std::ceil(1.0 - lo[d])) + 1;
  }
  std::vector<double> q(static_cast<std::size_t>(k));
  auto hit = [&](const CuspPoint& p, long l0, long l1) {
    q[0] = (p.re[0] + x[0] - static_cast<double>(l0)) / scale;
    if (k == 2) q[1] = (p.re[1] + x[1] - static_cast<double>(l1)) / scale;
    return region_contains(a, q);
  };
  const long l1_lo = k == 2 ? l_lo[1] : 0, l1_hi = k == 2 ? l_hi[1] : 0;
  std::size_t total = 0;
  if (wide) {
    for (const auto& p : points_) {
      bool in = false;
      for (long l0 = l_lo[0]; l0 <= l_hi[0] && !in; ++l0)
        for (long l1 = l1_lo; l1 <= l1_hi && !in; ++l1) in = hit(p, l0, l1);
      if (in) ++total;
    }
    return total;
  }
  const auto g = static_cast<std::uint64_t>(grid_);
  for (long l0 = l_lo[0]; l0 <= l_hi[0]; ++l0) {
    const double a0 = std::max(0.0, lo[0] + static_cast<double>(l0)), b0 = std::min(1.0, hi[0] + static_cast<double>(l0));
    if (a0 > b0) continue;
    const int c0 = torus_cell(a0, grid_), c1 = torus_cell(b0, grid_);
    for (long l1 = l1_lo; l1 <= l1_hi; ++l1) {
      if (k == 1) {
        const auto [b, e] = key_range(keys_, static_cast<std::uint64_t>(c0), static_cast<std::uint64_t>(c1));
        for (std::size_t i = b; i < e; ++i)
          if (hit(points_[i], l0, 0)) ++total;
        continue;
      }
      const double a1 = std::max(0.0, lo[1] + static_cast<double>(l1)), b1 = std::min(1.0, hi[1] + static_cast<double>(l1));
      if (a1 > b1) continue;
      const int d0 = torus_cell(a1, grid_), d1 = torus_cell(b1, grid_);
      for (int cx = c0; cx <= c1; ++cx) {
        const std::uint64_t base = static_cast<std::uint64_t>(cx) * g;
        const auto [b, e] = key_range(keys_, base + static_cast<std::uint64_t>(d0), base + static_cast<std::uint64_t>(d1));
        for (std::size_t i = b; i < e; ++i)
          if (hit(points_[i], l0, l1)) ++total;
      }
    }
  }
  return total;
}

CuspSet cusp_set(const LatticeModel& model, double t, double s) {
  return CuspSet(model.dim(), cusp_points(model, t, s));
}

std::vector<std::int64_t> cusp_counts(const CuspSet& cs, const Region& a, const CountSampler& sampler,
                                      std::size_t samples, unsigned threads) {
  if (samples == 0) throw std::invalid_argument("sample count must be positive");
  std::vector<std::int64_t> out(samples);
  const std::size_t k = static_cast<std::size_t>(cs.dim() - 1);
  parallel_for(samples, threads, [&](std::size_t i) {
    double x[2] = {0, 0};
    sampler.draw_torus(i, std::span<double>(x, k));
    out[i] = static_cast<std::int64_t>(cs.count(a, std::span<const double>(x, k)));
  });
  return out;
}

Pmf cusp_counting_pmf(const LatticeModel& model, double t, double s, const Region& a, const CountSampler& sampler,
                      std::size_t samples, int r_max, unsigned threads) {
  const auto counts = cusp_counts(cusp_set(model, t, s), a, sampler, samples, threads);
  return make_pmf(counts, r_max);
}

// ---------------------------------------------------------------------------
// Moments

namespace {

// Mean and jackknife standard error of per-sample values.
std::pair<double, double> mean_jackknife(std::span<const double> f) {
  const std::size_t m = f.size();
  const double sum = pairwise_sum(f);
  const double mean = sum / static_cast<double>(m);
  if (m < 2) return {mean, 0.0};
  std::vector<double> dev(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double loo = (sum - f[i]) / static_cast<double>(m - 1);
    dev[i] = (loo - mean) * (loo - mean);
  }
  const double var = static_cast<double>(m - 1) / static_cast<double>(m) * pairwise_sum(dev);
  return {mean, std::sqrt(var)};
}

std::size_t check_counts(std::span<const std::vector<std::int64_t>> counts, std::size_t sets) {
  if (counts.empty()) throw std::invalid_argument("no count vectors");
  if (counts.size() != sets) throw std::invalid_argument("one order is needed per test set");
  const std::size_t m = counts.front().size();
  if (m == 0) throw std::invalid_argument("no samples");
  for (const auto& c : counts)
    if (c.size() != m) throw std::invalid_argument("count vectors have different lengths");
  return m;
}

}  // namespace

MomentEstimate moment_empirical(std::span<const std::vector<std::int64_t>> counts, std::span<const double> beta) {
  const std::size_t m = check_counts(counts, beta.size());
  for (double b : beta)
    if (!(b >= 0) || !std::isfinite(b)) throw std::invalid_argument("moment orders must be non-negative");
  std::vector<double> f(m, 1.0);
  for (std::size_t j = 0; j < counts.size(); ++j)
    for (std::size_t i = 0; i < m; ++i) f[i] *= std::pow(static_cast<double>(counts[j][i]), beta[j]);
  const auto [v, se] = mean_jackknife(f);
  return {v, se, false};
}

MomentEstimate moment_empirical(std::span<const std::int64_t> counts, double beta) {
  const std::vector<std::vector<std::int64_t>> one{std::vector<std::int64_t>(counts.begin(), counts.end())};
  return moment_empirical(one, std::span<const double>(&beta, 1));
}

MomentEstimate moment_empirical(const Pmf& pmf, double beta) {
  if (!(beta >= 0) || !std::isfinite(beta)) throw std::invalid_argument("moment order must be non-negative");
  if (pmf.samples == 0) throw std::invalid_argument("pmf has no samples");
  const double m = static_cast<double>(pmf.samples);
  std::vector<double> t1, t2;
  for (std::size_t r = 0; r < pmf.p.size(); ++r) {
    const double x = std::pow(static_cast<double>(r), beta);
    t1.push_back(pmf.p[r] * x);
    t2.push_back(pmf.p[r] * x * x);
  }
  MomentEstimate out;
  const auto known = static_cast<double>(pmf.overflow_values.size()) / m;
  for (auto v : pmf.overflow_values) {
    const double x = std::pow(static_cast<double>(v), beta);
    t1.push_back(x / m);
    t2.push_back(x * x / m);
  }
  const double missing = pmf.overflow - known;
  if (missing > 0.5 / m) {
    // Unknown overflow counts are at least r_max + 1.
    const double x = std::pow(static_cast<double>(pmf.r_max() + 1), beta);
    t1.push_back(missing * x);
    t2.push_back(missing * x * x);
    out.unstable = true;
  }
  if (pmf.overflow > 0 && beta > 1) out.unstable = true;
  out.value = pairwise_sum(t1);
  const double var = std::max(0.0, pairwise_sum(t2) - out.value * out.value);
  out.std_error = pmf.samples > 1 ? std::sqrt(var / (m - 1)) : 0.0;
  return out;
}

MgfEstimate mgf_empirical(std::span<const std::vector<std::int64_t>> counts, std::span<const std::complex<double>> tau,
                          double guard) {
  const std::size_t m = check_counts(counts, tau.size());
  double pos = 0;
  for (const auto& t : tau) pos += std::max(0.0, t.real());
  if (!(pos < guard)) throw std::domain_error("sum of positive real parts of tau is beyond the analyticity guard");
  std::vector<double> re(m), im(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::complex<double> e{0.0, 0.0};
    for (std::size_t j = 0; j < counts.size(); ++j) e += tau[j] * static_cast<double>(counts[j][i]);
    const auto v = std::exp(e);
    re[i] = v.real();
    im[i] = v.imag();
  }
  const auto [mr, sr] = mean_jackknife(re);
  const auto [mi, si] = mean_jackknife(im);
  return {{mr, mi}, std::hypot(sr, si)};
}

double default_mgf_guard(const LatticeModel& model) {
  const auto c = model_constants(model, std::numeric_limits<double>::infinity());
  return 0.5 * (c.n - 1) * c.delta_min / 2.0;
}

}  // namespace hypdir
