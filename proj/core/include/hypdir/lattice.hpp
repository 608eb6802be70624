#pragma once

// Concrete lattices Gamma < G with a base point w:
//   modular-i    PSL(2,Z) acting on H^2, w = i
//   modular-rho  PSL(2,Z) acting on H^2, w = e^{i pi/3}
//   picard       PSL(2,Z[i]) acting on H^3, w = j
//   generic      user-supplied generators, orbit explored by breadth-first search
//
// Orbit points of the integer models are produced from the bottom row (c, d) of
// gamma: Im(gamma w) = Im(w) / |c w + d|^2, so every height band and every
// compact region has a finite, complete list of candidates.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypdir/gaussint.hpp"
#include "hypdir/halfspace.hpp"
#include "hypdir/rational.hpp"

namespace hypdir {

enum class ModelKind { modular_i, modular_rho, picard, generic };

struct GenericSpec {
  std::vector<GMatrix> generators;
  HPoint base;
  double covolume = 0.0;
  int stab_order = 1;
  int max_word_length = 8;
};

// One matrix per line: the 4 * 2^m blade coefficients of a, b, c, d (row-major,
// bitmask order within each entry). Blank lines and '#' comments are skipped.
std::vector<GMatrix> parse_generators(std::istream& in);
std::vector<GMatrix> load_generators(const std::string& path);

// A point gamma w of the orbit, identified with the coset gamma Gamma_w.
struct OrbitPoint {
  int n = 2;
  std::array<double, 3> x{};  // Re, first n-1 entries used
  double y = 1.0;             // Im

  // Exact models: a representative gamma of the coset, and the exact coordinates
  // Re = num / (scale * norm), Im = Im(w) / norm (scale 2 for w = rho, else 1).
  IntMatrix gamma;
  GaussInt num;
  std::int64_t norm = 0;

  // Generic model: generator word (index k >= 0 is generator k, -k-1 its inverse).
  std::vector<int> word;

  HPoint point() const;
  // Exact comparison for integer models, coordinate comparison otherwise.
  friend bool operator==(const OrbitPoint& p, const OrbitPoint& q);
};

struct OrbitResult {
  std::vector<OrbitPoint> points;
  bool best_effort = false;
};

struct DistanceSpectrum {
  struct Entry {
    double ell = 0.0;
    double cosh_ell = 1.0;
    std::int64_t multiplicity = 0;
    std::optional<Rational> exact_cosh;
  };
  std::vector<Entry> entries;  // increasing in ell
  double cutoff = 0.0;
  bool best_effort = false;

  double delta_min() const;
  std::int64_t total_multiplicity() const;
};

struct ModelConstants {
  int n = 2;
  int stab_order = 1;
  double covolume = 0.0;
  double theta = 0.0;
  double delta_min = 0.0;
};

// Covolume of PSL(2,Z[i]) by quadrature over {|x0| <= 1/2, 0 <= x1 <= 1/2, |z| >= 1}.
double picard_covolume_by_quadrature();

class LatticeModel {
 public:
  using Visitor = std::function<void(const OrbitPoint&)>;

  static LatticeModel modular_i();
  static LatticeModel modular_rho();
  // Covolume defaults to the quadrature value.
  static LatticeModel picard(std::optional<double> covolume = std::nullopt);
  static LatticeModel generic(GenericSpec spec);
  // "modular-i", "modular-rho", "picard".
  static LatticeModel from_name(std::string_view name);

  ModelKind kind() const { return kind_; }
  std::string name() const;
  int dim() const { return n_; }
  const HPoint& base_point() const { return w_; }
  int stab_order() const { return stab_order_; }
  double covolume() const { return covolume_; }
  bool exact() const { return kind_ != ModelKind::generic; }
  bool has_cusp() const { return kind_ != ModelKind::generic; }
  int max_word_length() const;

  // SL lifts of the stabiliser Gamma_w (both signs), found by brute-force search.
  const std::vector<IntMatrix>& stabilizer_lifts() const { return stab_lifts_; }

  // Integer models only.
  OrbitPoint point_of(const IntMatrix& gamma) const;
  HPoint apply(const IntMatrix& gamma, const HPoint& z) const;
  // gamma0 with gamma0 z in the standard region {|Re| <= 1/2 (per coordinate), |z| >= 1}.
  std::pair<IntMatrix, HPoint> reduce(const HPoint& z) const;
  // cosh d(w, gamma w), exact.
  Rational cosh_to_base(const OrbitPoint& p) const;
  // cosh d(o, gamma w), from the exact coordinates.
  long double cosh_to_origin(const OrbitPoint& p) const;

  // Every orbit point z with d(center, z) <= radius. Complete for integer models;
  // generic models report what the word search reached.
  void for_each_in_ball(const HPoint& center, double radius, const Visitor& visit) const;

  // Every orbit point with height in [y_lo, y_hi] whose real part lies in the box
  // returned by `slice(y)` (nullopt to skip that height). Integer models only.
  using SliceFn = std::function<std::optional<Box>(double y)>;
  void for_each_in_slices(double y_lo, double y_hi, const SliceFn& slice, const Visitor& visit) const;

  // One entry per double coset Gamma_inf \ Gamma / Gamma_w with norm in [norm_lo, norm_hi]
  // (bottom-row representatives, untranslated).
  void for_each_double_coset(double norm_lo, double norm_hi, const Visitor& visit) const;

 private:
  struct GenericData;

  LatticeModel() = default;
  void find_stabilizer();
  std::int64_t bottom_norm(GaussInt c, GaussInt d) const;
  bool canonical_bottom_row(GaussInt c, GaussInt d) const;
  void for_each_bottom_row(double norm_lo, double norm_hi,
                           const std::function<void(GaussInt, GaussInt, std::int64_t)>& f) const;

  ModelKind kind_ = ModelKind::modular_i;
  int n_ = 2;
  HPoint w_;
  int stab_order_ = 1;
  double covolume_ = 0.0;
  std::vector<IntMatrix> stab_lifts_;
  std::shared_ptr<const GenericData> generic_;
};

// P_{t,s}: orbit points with t - s < d(o, z) <= t and z != o.
OrbitResult orbit_ball(const LatticeModel& model, double t, double s = std::numeric_limits<double>::infinity());
// Points z of the orbit with d(center, z) <= radius.
OrbitResult orbit_in_ball(const LatticeModel& model, const HPoint& center, double radius);
// Points z of the orbit with g z in the (bounded) cuspidal cone.
OrbitResult orbit_in_region(const LatticeModel& model, const GMatrix& g, const CuspidalCone& region);
std::size_t count_in_region(const LatticeModel& model, const GMatrix& g, const CuspidalCone& region);

struct CuspPoint {
  int n = 2;
  std::array<double, 2> re{};  // reduced into [0,1)^{n-1}
  double im = 1.0;
};
// P^inf_{t,s}: e^{-t} <= Im < e^{s-t}, one entry per double coset (multiset).
std::vector<CuspPoint> cusp_points(const LatticeModel& model, double t,
                                   double s = std::numeric_limits<double>::infinity());

DistanceSpectrum distance_spectrum(const LatticeModel& model, double cutoff);

// theta(s) = (1 - e^{-(n-1)s}) / ((n-1) #Gamma_w vol(Gamma\H^n)).
double density_constant(const LatticeModel& model, double s);
ModelConstants model_constants(const LatticeModel& model, double s);

}  // namespace hypdir
