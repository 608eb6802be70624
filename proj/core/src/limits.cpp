#include "hypdir/limits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "hypdir/errors.hpp"
#include "hypdir/numerics.hpp"
#include "hypdir/parallel.hpp"

namespace hypdir {

namespace {

constexpr double kPi = std::numbers::pi;

void check_ell_alpha(double ell, double alpha) {
  if (!(ell > 0) || !std::isfinite(ell)) throw std::invalid_argument("ell must be positive");
  if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------
// Closed form

double f_gamma_prime(double ell, double alpha, int stab) {
  check_ell_alpha(ell, alpha);
  const double sh = std::sinh(ell);
  const double pre = stab / (kPi * alpha * alpha);
  if (alpha > sh) return pre * ell;
  // log(cosh l + sqrt(sinh^2 l - alpha^2)) = l + u, written to avoid cancellation
  const double root = std::sqrt(std::max(0.0, (sh - alpha) * (sh + alpha)));
  const double u = std::log1p(-alpha * alpha * std::exp(-ell) / (sh + root));
  if (alpha > 2.0 * std::sinh(ell / 2.0)) return pre * (std::log1p(alpha * alpha) - ell - 2.0 * u);
  return pre * (-u);
}

// ---------------------------------------------------------------------------
// Quadrature oracle: F(alpha) = (stab / pi) * int over
//   {0 < theta < pi/2, y > 1, y > ch - sh cos 2theta, y sin 2theta sh < (ch - sh cos 2theta) alpha}
// of dy / y^2 dtheta.

namespace {

struct Region2 {
  double ch, sh, alpha;

  double q(double th) const { return ch - sh * std::cos(2 * th); }
  double lower(double th) const { return std::max(1.0, q(th)); }
  // Upper bound on y; infinite at theta = 0.
  double upper(double th) const {
    const double s2 = std::sin(2 * th) * sh;
    return s2 > 0 ? alpha * q(th) / s2 : std::numeric_limits<double>::infinity();
  }
  // Sign of the y-range length.
  double gap(double th) const {
    const double s2 = std::sin(2 * th) * sh;
    return 1.0 / lower(th) - s2 / (alpha * q(th));
  }
};

double inner(const Region2& r, double th, double tol) {
  const double lo = r.lower(th), hi = r.upper(th);
  if (!(hi > lo)) return 0.0;
  // y = lo e^v, dy / y^2 = e^{-v} dv / lo
  const double v_max = std::min(std::log(hi / lo), 80.0);
  const auto res = integrate([lo](double v) { return std::exp(-v) / lo; }, 0.0, v_max, tol, 1e-14, 30);
  return res.value;
}

double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double f_gamma_quadrature_value(double ell, double alpha, int stab, double abs_tol) {
  check_ell_alpha(ell, alpha);
  const Region2 reg{std::cosh(ell), std::sinh(ell), alpha};
  const double half = kPi / 2;
  // Breakpoints of the outer integrand: where the lower bound switches from 1 to
  // ch - sh cos 2theta, and where the admissible y-range opens or closes.
  std::vector<double> cuts{0.0, half};
  cuts.push_back(bisect([&](double th) { return reg.q(th) - 1.0; }, 0.0, half));
  constexpr int kScan = 4096;
  double prev = reg.gap(half * 1e-9);
  for (int i = 1; i <= kScan; ++i) {
    const double a = half * (i - 1) / kScan, b = half * i / kScan;
    const double cur = reg.gap(i == kScan ? half * (1 - 1e-12) : b);
    if ((cur > 0) != (prev > 0)) cuts.push_back(bisect([&](double th) { return reg.gap(th); }, a, b));
    prev = cur;
  }
  std::sort(cuts.begin(), cuts.end());
  const double inner_tol = abs_tol * 1e-6;
  double total = 0;
  bool ok = true;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (!(b > a)) continue;
    if (!(reg.gap(0.5 * (a + b)) > 0)) continue;
    const auto res = integrate([&](double th) { return inner(reg, th, inner_tol); }, a, b, abs_tol / cuts.size(), 1e-13);
    total += res.value;
    ok = ok && res.converged;
  }
  if (!ok) throw convergence_error("quadrature oracle did not converge");
  return stab / kPi * total;
}

double f_gamma_quadrature(double ell, double alpha, int stab, double abs_tol) {
  check_ell_alpha(ell, alpha);
  const double h = 1e-4 * alpha;
  return (f_gamma_quadrature_value(ell, alpha + h, stab, abs_tol) -
          f_gamma_quadrature_value(ell, alpha - h, stab, abs_tol)) /
         (2 * h);
}

// ---------------------------------------------------------------------------
// Pair density

PairDensity::PairDensity(const LatticeModel& model, double max_cutoff) : max_cutoff_(max_cutoff) {
  if (model.dim() != 2) throw unsupported_error("the two-point density is implemented for n = 2 only");
  if (!model.exact()) throw unsupported_error("the two-point density needs an exact model");
  if (!(max_cutoff > 0) || !std::isfinite(max_cutoff)) throw std::invalid_argument("cutoff must be positive");
  stab_ = model.stab_order();
  covolume_ = model.covolume();
  theta_ = density_constant(model, std::numeric_limits<double>::infinity());
  spectrum_ = distance_spectrum(model, max_cutoff);
}

double PairDensity::partial(double alpha, double cutoff) const {
  std::vector<double> terms;
  terms.reserve(spectrum_.entries.size());
  for (const auto& e : spectrum_.entries) {
    if (e.ell > cutoff) break;
    terms.push_back(static_cast<double>(e.multiplicity) * f_gamma_prime(e.ell, alpha, stab_));
  }
  return covolume_ * pairwise_sum(terms);
}

double PairDensity::tail(double alpha, double cutoff) const {
  // Orbit points at distance in [l, l + dl] number about 2 pi sinh l dl / (#Gamma_w vol).
  const auto f = [&](double ell) { return f_gamma_prime(ell, alpha, stab_) * 2 * kPi * std::sinh(ell) / stab_; };
  return integrate(f, cutoff, cutoff + 60.0, 1e-14, 1e-10).value;
}

DensityValue PairDensity::operator()(double xi, double rel_tol) const {
  if (!(xi > 0) || !std::isfinite(xi)) throw std::invalid_argument("xi must be positive");
  const double alpha = alpha_of(xi);
  std::vector<double> cutoffs{max_cutoff_};
  while (cutoffs.back() / 2 >= 1.0) cutoffs.push_back(cutoffs.back() / 2);
  std::reverse(cutoffs.begin(), cutoffs.end());
  DensityValue out;
  double last = std::numeric_limits<double>::quiet_NaN();
  for (double L : cutoffs) {
    const double t = tail(alpha, L);
    const double v = partial(alpha, L) + t;
    out.value = v;
    out.tail = t;
    out.cutoff = L;
    if (std::isfinite(last)) {
      out.increment = std::abs(v - last);
      if (out.increment <= rel_tol * std::abs(v)) {
        out.converged = true;
        return out;
      }
    }
    last = v;
  }
  return out;
}

DensityCurve PairDensity::curve(const std::vector<double>& xi, double rel_tol) const {
  DensityCurve c;
  c.xi = xi;
  for (double x : xi) {
    const auto v = (*this)(x, rel_tol);
    c.g2.push_back(v.value);
    c.tail.push_back(std::max(v.tail, v.increment));
    c.cutoff = std::max(c.cutoff, v.cutoff);
    c.converged = c.converged && v.converged;
  }
  return c;
}

double PairDensity::integral(double a, double b, double rel_tol) const {
  if (!(a >= 0) || !(b >= a)) throw std::invalid_argument("integration bounds must satisfy 0 <= a <= b");
  if (a == b) return 0.0;
  const auto f = [&](double x) { return x > 0 ? (*this)(x, rel_tol).value : (*this)(1e-9, rel_tol).value; };
  return integrate(f, a, b, 1e-10, 1e-8, 20).value;
}

DensityValue g2_theory(double xi, const LatticeModel& model, double rel_tol) {
  return PairDensity(model)(xi, rel_tol);
}

// ---------------------------------------------------------------------------
// Haar sampling

double PicardDomain::y_min() {
  const double r2 = std::max(x0_lo * x0_lo, x0_hi * x0_hi) + std::max(x1_lo * x1_lo, x1_hi * x1_hi);
  return std::sqrt(1.0 - r2);
}

bool PicardDomain::contains(double x0, double x1, double y) {
  return x0 >= x0_lo && x0 <= x0_hi && x1 >= x1_lo && x1 <= x1_hi && x0 * x0 + x1 * x1 + y * y >= 1.0;
}

HaarSample haar_sample(const LatticeModel& model, CounterRng& rng) {
  HaarSample s;
  switch (model.kind()) {
    case ModelKind::modular_i:
    case ModelKind::modular_rho: {
      const double y0 = std::sqrt(3.0) / 2.0;
      double x = 0, y = 0;
      do {
        x = rng.uniform(-0.5, 0.5);
        y = y0 / rng.uniform_pos();
      } while (x * x + y * y < 1.0);
      s.x = {x};
      s.y = y;
      s.theta = kPi * rng.uniform();
      s.g = translate(CliffordVector{x}) * dilate(2, y) * rotation2(s.theta);
      return s;
    }
    case ModelKind::picard: {
      const double y0 = PicardDomain::y_min();
      double x0 = 0, x1 = 0, y = 0;
      do {
        x0 = rng.uniform(PicardDomain::x0_lo, PicardDomain::x0_hi);
        x1 = rng.uniform(PicardDomain::x1_lo, PicardDomain::x1_hi);
        y = y0 / std::sqrt(rng.uniform_pos());
      } while (!PicardDomain::contains(x0, x1, y));
      double q2 = 0;
      do {
        q2 = 0;
        for (double& c : s.quaternion) {
          c = rng.normal();
          q2 += c * c;
        }
      } while (q2 == 0.0);
      for (double& c : s.quaternion) c /= std::sqrt(q2);
      s.x = {x0, x1};
      s.y = y;
      s.g = translate(CliffordVector{x0, x1}) * dilate(3, y) * su2_from_quaternion(s.quaternion);
      return s;
    }
    case ModelKind::generic:
      break;
  }
  throw unsupported_error("Haar sampling needs a model with a known fundamental domain");
}

// ---------------------------------------------------------------------------
// Truncated cones and Monte Carlo

namespace {

void check_s(double s, double s_cut) {
  if (!(s > 0)) throw std::invalid_argument("s must be positive");
  if (!(s_cut > 0) || !std::isfinite(s_cut)) throw std::invalid_argument("s_cut must be positive and finite");
}

// Bound on mu(some point of h w lies in Z(s_cut, s, A)).
double miss_bound(const LatticeModel& model, double s, double s_cut, double vol_a) {
  if (s <= s_cut) return 0.0;
  const double k = model.dim() - 1;
  const double num = std::exp(-k * s_cut) - (std::isfinite(s) ? std::exp(-k * s) : 0.0);
  const double den = std::isfinite(s) ? -std::expm1(-k * s) : 1.0;
  return vol_a * num / den;
}

}  // namespace

CuspidalCone truncated_cone(const LatticeModel& model, double s, double s_cut, const Region& a) {
  check_s(s, s_cut);
  const int k = model.dim() - 1;
  if (region_dim(a) != k) throw dimension_error("test set dimension does not match the model");
  CuspidalCone cone;
  cone.a = 0.0;
  cone.b = std::min(s, s_cut);
  cone.base = a;
  cone.scale = std::pow(density_constant(model, s), -1.0 / k);
  return cone;
}

std::size_t count_truncated(const LatticeModel& model, const GMatrix& h, double s, double s_cut, const Region& a) {
  const CuspidalCone cone = truncated_cone(model, s, s_cut, a);
  if (!(region_volume(a) > 0)) return 0;
  return count_in_region(model, h, cone);
}

Ball ball_of_volume(int dim, double volume) {
  if (dim < 1) throw dimension_error("ball dimension must be positive");
  if (!(volume >= 0) || !std::isfinite(volume)) throw std::invalid_argument("volume must be non-negative");
  Ball b;
  b.center.assign(static_cast<std::size_t>(dim), 0.0);
  b.radius = std::pow(volume * dim / solid_angle(dim), 1.0 / dim);
  return b;
}

LimitCounts limit_counts(const LatticeModel& model, double s, const std::vector<Region>& sets, std::size_t samples,
                         double s_cut, std::uint64_t seed, unsigned threads) {
  check_s(s, s_cut);
  if (samples == 0) throw std::invalid_argument("sample count must be positive");
  if (sets.empty()) throw std::invalid_argument("no test sets");
  std::vector<CuspidalCone> cones;
  std::vector<bool> empty;
  double vol = 0;
  for (const auto& a : sets) {
    cones.push_back(truncated_cone(model, s, s_cut, a));
    empty.push_back(!(region_volume(a) > 0));
    vol += region_volume(a);
  }
  LimitCounts out;
  out.counts.assign(sets.size(), std::vector<std::int64_t>(samples, 0));
  out.truncation = miss_bound(model, s, s_cut, vol);
  parallel_for(samples, threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    const HaarSample hs = haar_sample(model, rng);
    const GMatrix h = sl_inverse(hs.g);
    for (std::size_t j = 0; j < cones.size(); ++j)
      if (!empty[j]) out.counts[j][i] = static_cast<std::int64_t>(count_in_region(model, h, cones[j]));
  });
  return out;
}

LimitPmf limit_pmf_mc(const LatticeModel& model, double s, const Region& a, int r_max, std::size_t samples,
                      double s_cut, std::uint64_t seed, unsigned threads) {
  const LimitCounts lc = limit_counts(model, s, {a}, samples, s_cut, seed, threads);
  LimitPmf out;
  out.pmf = make_pmf(lc.counts.front(), r_max);
  out.truncation = lc.truncation;
  double se = out.pmf.overflow_std_error;
  for (double e : out.pmf.std_error) se = std::max(se, e);
  out.error_budget = se + out.truncation;
  return out;
}

LimitPmf limit_pmf_mc_sigma(const LatticeModel& model, double s, double sigma, int r_max, std::size_t samples,
                            double s_cut, std::uint64_t seed, unsigned threads) {
  if (!(sigma >= 0)) throw std::invalid_argument("sigma must be non-negative");
  return limit_pmf_mc(model, s, ball_of_volume(model.dim() - 1, sigma), r_max, samples, s_cut, seed, threads);
}

LimitEstimate limit_moment(const LatticeModel& model, double s, const std::vector<Region>& sets,
                           const std::vector<int>& orders, std::size_t samples, double s_cut, std::uint64_t seed,
                           unsigned threads) {
  if (sets.size() != orders.size() || sets.empty()) throw std::invalid_argument("one order is needed per test set");
  for (int o : orders)
    if (o < 0) throw std::invalid_argument("moment orders must be non-negative integers");
  LimitEstimate out;
  if (sets.size() == 1 && orders.front() == 1) {
    out.value = region_volume(sets.front());
    out.exact = true;
    return out;
  }
  const LimitCounts lc = limit_counts(model, s, sets, samples, s_cut, seed, threads);
  const std::vector<double> beta(orders.begin(), orders.end());
  const auto m = moment_empirical(lc.counts, beta);
  out.value = m.value;
  out.std_error = m.std_error;
  out.truncation = lc.truncation;
  return out;
}

double mgf_guard(const LatticeModel& model) {
  const auto c = model_constants(model, std::numeric_limits<double>::infinity());
  return (c.n - 1) * c.delta_min / 2.0;
}

MgfEstimate limit_mgf(const LatticeModel& model, double s, const std::vector<Region>& sets,
                      const std::vector<std::complex<double>>& tau, std::size_t samples, double s_cut,
                      std::uint64_t seed, unsigned threads) {
  if (sets.size() != tau.size() || sets.empty()) throw std::invalid_argument("one tau is needed per test set");
  const double guard = mgf_guard(model);
  double pos = 0;
  for (const auto& t : tau) pos += std::max(0.0, t.real());
  if (!(pos < guard))
    throw std::domain_error("the limit generating function is only known to be analytic for sum Re+ tau below the guard");
  const LimitCounts lc = limit_counts(model, s, sets, samples, s_cut, seed, threads);
  return mgf_empirical(lc.counts, tau, guard);
}

double truncation_bound(double s, double vol_a, int n) {
  if (!(s > 0)) throw std::invalid_argument("s must be positive");
  if (!(vol_a >= 0)) throw std::invalid_argument("volume must be non-negative");
  if (std::isinf(s)) return 0.0;
  return std::exp(-(n - 1) * s / 2.0) * std::sqrt(vol_a);
}

}  // namespace hypdir
