#include "hypdir/numerics.hpp"

#include <cmath>
#include <numbers>

namespace hypdir {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1 - z * z) * dp * dp);
  }
  return {x, w};
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    rk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  result = rk * h;
  err = std::abs((rk - rg) * h);
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth, QuadResult& acc) {
  double r = 0, e = 0;
  gk15(f, a, b, r, e);
  if (e <= tol || depth <= 0) {
    acc.value += r;
    acc.error += e;
    if (e > tol) acc.converged = false;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, tol / 2, depth - 1, acc);
  adapt(f, m, b, tol / 2, depth - 1, acc);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
                     int max_depth) {
  QuadResult acc;
  acc.converged = true;
  if (a == b) return acc;
  double tol = abs_tol;
  if (rel_tol > 0) {
    double r = 0, e = 0;
    gk15(f, a, b, r, e);
    tol = std::max(abs_tol, rel_tol * std::abs(r));
  }
  adapt(f, a, b, tol, max_depth, acc);
  return acc;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0;
    for (double v : xs) s += v;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace hypdir
