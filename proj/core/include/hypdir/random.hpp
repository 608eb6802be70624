#pragma once

// Counter-based random streams. Stream k of seed s is a pure function of (s, k), so
// a sample's draws never depend on which thread produced it or in what order.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

namespace hypdir {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal pair by the polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Uniform point on S^1 (two coordinates) or S^2 (three coordinates, Marsaglia).
  void on_sphere(std::span<double> out) {
    if (out.size() == 2) {
      const double a = 2.0 * std::numbers::pi * uniform();
      out[0] = std::cos(a);
      out[1] = std::sin(a);
      return;
    }
    if (out.size() == 3) {
      double u, v, s;
      do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
      } while (s >= 1.0);
      const double f = 2.0 * std::sqrt(1.0 - s);
      out[0] = u * f;
      out[1] = v * f;
      out[2] = 1.0 - 2.0 * s;
      return;
    }
    double r2 = 0;
    do {
      r2 = 0;
      for (double& c : out) {
        c = normal();
        r2 += c * c;
      }
    } while (r2 == 0.0);
    const double r = std::sqrt(r2);
    for (double& c : out) c /= r;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hypdir
