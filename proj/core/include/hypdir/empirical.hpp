#pragma once

// Finite-t statistics of projected orbits: directions seen from o, disc counts,
// counting distributions, pair correlation, the cuspidal observer, moments, gaps.

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hypdir/halfspace.hpp"
#include "hypdir/lattice.hpp"
#include "hypdir/random.hpp"

namespace hypdir {

// Multiset of directions of P_{t,s}(g w), stored as unit vectors in R^n.
// For n = 2 the directions are kept sorted by angle in [0, 2 pi).
class DirectionSet {
 public:
  DirectionSet() = default;
  DirectionSet(int n, double t, double s, std::vector<double> coords, std::string model_name = {},
               bool best_effort = false);

  int dim() const { return n_; }
  double t() const { return t_; }
  double s() const { return s_; }
  std::size_t size() const { return count_; }
  const std::string& model_name() const { return model_; }
  bool best_effort() const { return best_effort_; }

  std::span<const double> direction(std::size_t i) const;
  // Sorted angles, n = 2 only.
  const std::vector<double>& angles() const;

  // Directions strictly inside the cap (all of them once the cap is the whole sphere).
  std::size_t count_in_cap(const SphericalCap& cap) const;
  // n = 2: directions with angle in the open arc (a, b), angles in radians, b - a <= 2 pi.
  std::size_t count_in_arc(double a, double b) const;

 private:
  void build_index();

  int n_ = 2;
  double t_ = 0.0, s_ = 0.0;
  std::size_t count_ = 0;
  std::string model_;
  bool best_effort_ = false;
  std::vector<double> coords_;
  std::vector<double> angles_;
  // n >= 3: uniform grid over [-1, 1]^n, points sorted by cell key.
  int grid_ = 1;
  std::vector<std::uint64_t> keys_;
};

// Directions of g gamma w for the orbit points with t - s < d(o, g gamma w) <= t.
DirectionSet directions(const LatticeModel& model, const GMatrix& g, double t,
                        double s = std::numeric_limits<double>::infinity());
DirectionSet directions(const LatticeModel& model, double t, double s = std::numeric_limits<double>::infinity());

// N_{t,s}(sigma, v): directions in the open disc of measure Omega_n sigma / N about v.
std::size_t count_disc(const DirectionSet& ds, double sigma, std::span<const double> v);

// Law of the random centre v (on S^{n-1}) or shift x (on the unit torus).
// A density is given relative to the uniform probability measure and must not exceed
// `bound`; draws use rejection against that bound.
struct CountSampler {
  enum class Kind { uniform, density };
  Kind kind = Kind::uniform;
  std::function<double(std::span<const double>)> density;
  double bound = 1.0;
  std::uint64_t seed = 0;

  static CountSampler uniform(std::uint64_t seed = 0);
  static CountSampler with_density(std::function<double(std::span<const double>)> f, double bound,
                                   std::uint64_t seed = 0);

  // Sample `index` is drawn from its own counter stream.
  void draw_sphere(std::uint64_t index, std::span<double> v) const;
  void draw_torus(std::uint64_t index, std::span<double> x) const;
};

struct Pmf {
  std::vector<double> p;  // r = 0 .. r_max
  double overflow = 0.0;  // mass on r > r_max
  std::vector<double> std_error;
  double overflow_std_error = 0.0;
  std::size_t samples = 0;
  // Raw counts that landed in the overflow bucket; empty when unknown.
  std::vector<std::int64_t> overflow_values;

  int r_max() const { return static_cast<int>(p.size()) - 1; }
  double total() const;
  double mean() const;
};

Pmf make_pmf(std::span<const std::int64_t> counts, int r_max);
// Sum over r of |p(r) - q(r)| / 2, overflow buckets compared as one more bin.
double total_variation(const Pmf& p, const Pmf& q);

// Disc counts for M draws of v.
std::vector<std::int64_t> disc_counts(const DirectionSet& ds, double sigma, const CountSampler& sampler,
                                      std::size_t samples, unsigned threads = 1);
// n = 2: joint counts in arcs v + (2 pi / N) (lo_j, hi_j), one vector per arc.
std::vector<std::vector<std::int64_t>> arc_counts(const DirectionSet& ds, std::span<const std::pair<double, double>> arcs,
                                                  const CountSampler& sampler, std::size_t samples,
                                                  unsigned threads = 1);

Pmf counting_pmf(const DirectionSet& ds, double sigma, const CountSampler& sampler, std::size_t samples, int r_max,
                 unsigned threads = 1);
Pmf counting_pmf(const LatticeModel& model, const GMatrix& g, double t, double s, double sigma,
                 const CountSampler& sampler, std::size_t samples, int r_max, unsigned threads = 1);

// R_2(xi) = (1/N) #{unordered pairs with N d_circ / (2 pi) < xi}, n = 2.
std::vector<double> pair_corr_empirical(const DirectionSet& ds, std::span<const double> xi_grid);

// Cusp points P^inf_{t,s} on the unit torus, indexed for box queries.
class CuspSet {
 public:
  CuspSet() = default;
  CuspSet(int n, std::vector<CuspPoint> points);

  int dim() const { return n_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<CuspPoint>& points() const { return points_; }

  // N^inf(A, x) = #{p : Re p in N^{-1/(n-1)} A - x + L}.
  std::size_t count(const Region& a, std::span<const double> x) const;

 private:
  int n_ = 2;
  int grid_ = 1;
  std::vector<CuspPoint> points_;
  std::vector<std::uint64_t> keys_;
};

CuspSet cusp_set(const LatticeModel& model, double t, double s = std::numeric_limits<double>::infinity());
std::vector<std::int64_t> cusp_counts(const CuspSet& cs, const Region& a, const CountSampler& sampler,
                                      std::size_t samples, unsigned threads = 1);
Pmf cusp_counting_pmf(const LatticeModel& model, double t, double s, const Region& a, const CountSampler& sampler,
                      std::size_t samples, int r_max, unsigned threads = 1);

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  // Set when the overflow bucket holds mass whose raw values are unknown, or when a
  // moment of order above one sees any overflow at all.
  bool unstable = false;
};

// Mean of prod_j N_j^{beta_j} over samples; counts[j][i] is N_j for sample i.
// Standard errors are jackknife estimates.
MomentEstimate moment_empirical(std::span<const std::vector<std::int64_t>> counts, std::span<const double> beta);
MomentEstimate moment_empirical(std::span<const std::int64_t> counts, double beta);
MomentEstimate moment_empirical(const Pmf& pmf, double beta);

struct MgfEstimate {
  std::complex<double> value;
  double std_error = 0.0;
};
// Mean of exp(sum_j tau_j N_j); throws std::domain_error when sum_j max(Re tau_j, 0) >= guard.
MgfEstimate mgf_empirical(std::span<const std::vector<std::int64_t>> counts,
                          std::span<const std::complex<double>> tau, double guard);
// Default guard 0.5 (n - 1) delta(w) / 2.
double default_mgf_guard(const LatticeModel& model);

// Gaps between consecutive sorted angles (the last one wraps around), scaled by
// N / (2 pi); n = 2.
std::vector<double> gaps(const DirectionSet& ds);

}  // namespace hypdir
