#pragma once

// Limit objects: the explicit two-point density for n = 2 with an independent
// quadrature oracle, Haar sampling on Gamma \ G, and Monte-Carlo estimates of the
// limiting counting distribution in truncated cuspidal cones.

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "hypdir/empirical.hpp"
#include "hypdir/halfspace.hpp"
#include "hypdir/lattice.hpp"
#include "hypdir/random.hpp"

namespace hypdir {

// F'_gamma(alpha) for a coset at distance ell from w, stab = #Gamma_w.
double f_gamma_prime(double ell, double alpha, int stab);

// F_gamma(alpha) by adaptive quadrature over the region of integration in (theta, y).
double f_gamma_quadrature_value(double ell, double alpha, int stab, double abs_tol = 1e-7);
// F'_gamma(alpha) from the quadrature by a central difference with step 1e-4 alpha.
double f_gamma_quadrature(double ell, double alpha, int stab, double abs_tol = 1e-7);

struct DensityValue {
  double value = 0.0;
  double tail = 0.0;       // asymptotic contribution of distances beyond the cutoff
  double increment = 0.0;  // change over the last cutoff doubling
  double cutoff = 0.0;
  bool converged = false;
};

struct DensityCurve {
  std::vector<double> xi;
  std::vector<double> g2;
  std::vector<double> tail;
  double cutoff = 0.0;
  bool converged = true;
};

// g_2(xi) = vol(Gamma \ H^2) sum_gamma F'_gamma(xi / theta) for an exact n = 2 model.
// The distance spectrum is enumerated once up to `max_cutoff`; partial sums over
// cutoffs max_cutoff / 2^k are completed by the asymptotic tail until two successive
// values agree to rel_tol.
class PairDensity {
 public:
  explicit PairDensity(const LatticeModel& model, double max_cutoff = 12.0);

  DensityValue operator()(double xi, double rel_tol = 1e-4) const;
  DensityCurve curve(const std::vector<double>& xi, double rel_tol = 1e-4) const;
  // Integral of g_2 over [a, b].
  double integral(double a, double b, double rel_tol = 1e-4) const;

  double alpha_of(double xi) const { return xi / theta_; }
  const DistanceSpectrum& spectrum() const { return spectrum_; }

 private:
  double partial(double alpha, double cutoff) const;
  double tail(double alpha, double cutoff) const;

  int stab_ = 1;
  double covolume_ = 0.0;
  double theta_ = 0.0;
  double max_cutoff_ = 12.0;
  DistanceSpectrum spectrum_;
};

DensityValue g2_theory(double xi, const LatticeModel& model, double rel_tol = 1e-4);

// Standard fundamental domain of PSL(2, Z[i]): |x0| <= 1/2, 0 <= x1 <= 1/2, |z| >= 1.
struct PicardDomain {
  static constexpr double x0_lo = -0.5, x0_hi = 0.5;
  static constexpr double x1_lo = 0.0, x1_hi = 0.5;
  // Lowest height reached, sqrt(1 - max |x|^2).
  static double y_min();
  static bool contains(double x0, double x1, double y);
};

struct HaarSample {
  std::vector<double> x;
  double y = 1.0;
  double theta = 0.0;                 // n = 2 rotation angle in [0, pi)
  std::array<double, 4> quaternion{};  // n = 3 unit quaternion of the K-part
  GMatrix g;                           // n(x) a(y) k; the random lattice is g^{-1} Gamma w
};

// Haar-random coset Gamma g by rejection from the fundamental domain.
HaarSample haar_sample(const LatticeModel& model, CounterRng& rng);

// Cone Z(0, min(s, s_cut), theta(s)^{-1/(n-1)} A).
CuspidalCone truncated_cone(const LatticeModel& model, double s, double s_cut, const Region& a);
// #(h w ∩ Z(0, min(s, s_cut), theta^{-1/(n-1)} A)), with h acting on the orbit.
std::size_t count_truncated(const LatticeModel& model, const GMatrix& h, double s, double s_cut, const Region& a);

// Ball in R^{n-1} centred at 0 with the given volume.
Ball ball_of_volume(int dim, double volume);

struct LimitCounts {
  std::vector<std::vector<std::int64_t>> counts;  // one vector per test set
  double truncation = 0.0;                        // bound on the miss probability above s_cut
};

// Joint counts for M Haar samples; sample i uses counter stream i of `seed`.
LimitCounts limit_counts(const LatticeModel& model, double s, const std::vector<Region>& sets, std::size_t samples,
                         double s_cut = 14.0, std::uint64_t seed = 0, unsigned threads = 1);

struct LimitPmf {
  Pmf pmf;
  double truncation = 0.0;
  // Total-variation budget: largest per-bin standard error plus the truncation bound.
  double error_budget = 0.0;
};

LimitPmf limit_pmf_mc(const LatticeModel& model, double s, const Region& a, int r_max, std::size_t samples,
                      double s_cut = 14.0, std::uint64_t seed = 0, unsigned threads = 1);
// Sigma mode: A is the centred ball of volume sigma.
LimitPmf limit_pmf_mc_sigma(const LatticeModel& model, double s, double sigma, int r_max, std::size_t samples,
                            double s_cut = 14.0, std::uint64_t seed = 0, unsigned threads = 1);

struct LimitEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double truncation = 0.0;
  bool exact = false;
};

// Mixed moment of integer orders; a single first moment is returned exactly as vol A.
LimitEstimate limit_moment(const LatticeModel& model, double s, const std::vector<Region>& sets,
                           const std::vector<int>& orders, std::size_t samples, double s_cut = 14.0,
                           std::uint64_t seed = 0, unsigned threads = 1);

// c0 = (n - 1) delta(w) / 2.
double mgf_guard(const LatticeModel& model);
MgfEstimate limit_mgf(const LatticeModel& model, double s, const std::vector<Region>& sets,
                      const std::vector<std::complex<double>>& tau, std::size_t samples, double s_cut = 14.0,
                      std::uint64_t seed = 0, unsigned threads = 1);

// e^{-(n-1) s / 2} sqrt(vol A).
double truncation_bound(double s, double vol_a, int n);

}  // namespace hypdir
