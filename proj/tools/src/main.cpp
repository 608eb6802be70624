#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>

#include "hypdir/empirical.hpp"
#include "hypdir/errors.hpp"
#include "hypdir/limits.hpp"
#include "hypdir/version.hpp"
#include "options.hpp"

using namespace hypdir;
using namespace hypdir::cli;

namespace {

struct Context {
  CLI::App* sub = nullptr;
  CommonOptions common;
};

StatTable start_table(const Context& ctx, const LatticeModel& model, std::vector<std::string> columns) {
  StatTable t(std::move(columns));
  t.meta["command"] = ctx.sub->get_name();
  t.meta["version"] = kVersion;
  t.meta["seed"] = ctx.common.seed;
  t.meta["model"] = model.name();
  t.meta["n"] = model.dim();
  t.meta["config"] = resolved_config(*ctx.sub);
  return t;
}

void note_best_effort(StatTable& t, bool best_effort) {
  t.meta["best_effort"] = best_effort;
  if (best_effort) t.notes.push_back("enumeration is best-effort; counts may be incomplete");
}

void add_pmf_rows(StatTable& t, const Pmf& pmf, std::optional<double> truncation = std::nullopt) {
  for (std::size_t r = 0; r < pmf.p.size(); ++r) {
    std::vector<Cell> row{static_cast<std::int64_t>(r), pmf.p[r], pmf.std_error[r]};
    if (truncation) row.emplace_back(*truncation);
    t.add_row(std::move(row));
  }
  t.meta["samples"] = pmf.samples;
  t.meta["overflow"] = pmf.overflow;
  t.meta["overflow_std_error"] = pmf.overflow_std_error;
  t.meta["mean"] = pmf.mean();
}

std::vector<double> xi_grid(const std::vector<double>& explicit_grid, double lo, double hi, double step) {
  if (!explicit_grid.empty()) return explicit_grid;
  if (!(hi >= lo)) throw ConfigError("xi-max must be at least xi-min");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= n; ++k) g.push_back(lo + static_cast<double>(k) * step);
  return g;
}

// --- orbit -----------------------------------------------------------------

struct OrbitCmd {
  double t = 1.0, s = kInf;
  void add(CLI::App& sub) {
    sub.add_option("--t", t, "Radius of the ball")->check(positive_finite("t"));
    sub.add_option("--s", s, "Window width: keep t - s < d <= t")->check(positive("s"));
  }
  void run(const Context& ctx) const {
    const auto model = build_model(ctx.common);
    const auto res = orbit_ball(model, t, s);
    std::vector<std::string> cols;
    const int k = model.dim() - 1;
    for (int d = 0; d < k; ++d) cols.push_back(k == 1 ? "re" : "re" + std::to_string(d));
    cols.insert(cols.end(), {"im", "d"});
    auto table = start_table(ctx, model, cols);
    struct Row {
      std::vector<double> re;
      double im, d;
    };
    std::vector<Row> rows;
    for (const auto& p : res.points) {
      const HPoint z = p.point();
      rows.push_back({std::vector<double>(p.x.begin(), p.x.begin() + k), p.y, distance_from_origin(z)});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return std::tie(a.d, a.re, a.im) < std::tie(b.d, b.re, b.im);
    });
    for (const auto& r : rows) {
      std::vector<Cell> cells(r.re.begin(), r.re.end());
      cells.emplace_back(r.im);
      cells.emplace_back(r.d);
      table.add_row(std::move(cells));
    }
    table.meta["points"] = rows.size();
    note_best_effort(table, res.best_effort);
    emit(table, ctx.common);
  }
};

// --- paircorr --------------------------------------------------------------

struct PairCorrCmd {
  double t = 10.0, s = kInf;
  std::vector<double> xi;
  double xi_min = 0.25, xi_max = 4.0, xi_step = 0.25;
  bool theory_only = false;
  double cutoff = 12.0, rel_tol = 1e-4;
  void add(CLI::App& sub) {
    sub.add_option("--t", t, "Radius of the ball")->check(positive_finite("t"));
    sub.add_option("--s", s, "Window width")->check(positive("s"));
    sub.add_option("--xi", xi, "Explicit increasing xi grid (comma separated)")->delimiter(',')->check(positive("xi"));
    sub.add_option("--xi-min", xi_min, "First grid point")->check(positive_finite("xi-min"));
    sub.add_option("--xi-max", xi_max, "Last grid point")->check(positive_finite("xi-max"));
    sub.add_option("--xi-step", xi_step, "Grid step")->check(positive_finite("xi-step"));
    sub.add_flag("--theory", theory_only, "Theory columns only; skips the orbit enumeration");
    sub.add_option("--L", cutoff, "Largest distance enumerated for the density sum")->check(positive_finite("L"));
    sub.add_option("--rel-tol", rel_tol, "Convergence tolerance of the density sum")->check(positive_finite("rel-tol"));
  }
  void run(const Context& ctx) const {
    const auto model = build_model(ctx.common);
    const auto grid = xi_grid(xi, xi_min, xi_max, xi_step);
    if (model.dim() != 2) throw unsupported_error("paircorr is available for n = 2 models only");
    auto table = start_table(ctx, model, {"xi", "r2_empirical", "g2_theory", "r2_theory_integral", "tail_bound"});
    std::vector<double> r2(grid.size(), std::nan(""));
    if (!theory_only) {
      const auto ds = directions(model, t, s);
      r2 = pair_corr_empirical(ds, grid);
      table.meta["directions"] = ds.size();
      note_best_effort(table, ds.best_effort());
    }
    const PairDensity density(model, cutoff);
    const auto curve = density.curve(grid, rel_tol);
    // Cumulative trapezoid from xi = 0, where g2 takes its finite limit.
    double prev_x = 0.0, prev_g = density(1e-9 * grid.front(), rel_tol).value, acc = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      acc += 0.5 * (grid[k] - prev_x) * (prev_g + curve.g2[k]);
      prev_x = grid[k];
      prev_g = curve.g2[k];
      table.add_row({grid[k], theory_only ? Cell{} : Cell{r2[k]}, curve.g2[k], acc, curve.tail[k]});
    }
    table.meta["density_cutoff"] = curve.cutoff;
    table.meta["density_converged"] = curve.converged;
    if (!curve.converged) table.notes.push_back("density sum did not reach rel-tol; see tail_bound");
    emit(table, ctx.common);
  }
};

// --- counting / cuspstats --------------------------------------------------

struct CountingCmd {
  double t = 10.0, s = kInf;
  RegionOptions region;
  std::size_t samples = 10000;
  int r_max = 10;
  void add(CLI::App& sub) {
    sub.add_option("--t", t, "Radius of the ball")->check(positive_finite("t"));
    sub.add_option("--s", s, "Window width")->check(positive("s"));
    sub.add_option("--sigma", region.sigma, "Expected count of the scaled disc")->check(non_negative("sigma"));
    sub.add_option("--samples", samples, "Number of random disc centres")->check(CLI::PositiveNumber);
    sub.add_option("--r-max", r_max, "Largest count with its own row")->check(CLI::NonNegativeNumber);
  }
  void run(const Context& ctx) const {
    const auto model = build_model(ctx.common);
    const auto ds = directions(model, t, s);
    const auto pmf = counting_pmf(ds, region.sigma, CountSampler::uniform(ctx.common.seed), samples, r_max,
                                  ctx.common.threads);
    auto table = start_table(ctx, model, {"r", "p", "std_error"});
    add_pmf_rows(table, pmf);
    table.meta["directions"] = ds.size();
    note_best_effort(table, ds.best_effort());
    emit(table, ctx.common);
  }
};

struct CuspStatsCmd {
  double t = 10.0, s = kInf;
  RegionOptions region;
  std::size_t samples = 10000;
  int r_max = 10;
  void add(CLI::App& sub) {
    sub.add_option("--t", t, "Height parameter: cusp points of orbit points with d <= t")->check(positive_finite("t"));
    sub.add_option("--s", s, "Window width")->check(positive("s"));
    add_region(sub, region);
    sub.add_option("--samples", samples, "Number of random torus shifts")->check(CLI::PositiveNumber);
    sub.add_option("--r-max", r_max, "Largest count with its own row")->check(CLI::NonNegativeNumber);
  }
  void run(const Context& ctx) const {
    const auto model = build_model(ctx.common);
    const Region a = build_region(region, model.dim() - 1);
    const auto cs = cusp_set(model, t, s);
    const auto counts = cusp_counts(cs, a, CountSampler::uniform(ctx.common.seed), samples, ctx.common.threads);
    auto table = start_table(ctx, model, {"r", "p", "std_error"});
    add_pmf_rows(table, make_pmf(counts, r_max));
    table.meta["cusp_points"] = cs.size();
    table.meta["volume"] = region_volume(a);
    emit(table, ctx.common);
  }
};

// --- mcdist ----------------------------------------------------------------

struct McDistCmd {
  double s = kInf, s_cut = 14.0;
  RegionOptions region;
  std::size_t samples = 100000;
  int r_max = 10;
  void add(CLI::App& sub) {
    sub.add_option("--s", s, "Window width of the limit cone")->check(positive("s"));
    sub.add_option("--s-cut", s_cut, "Height at which the cone is truncated")->check(positive_finite("s-cut"));
    add_region(sub, region);
    sub.add_option("--samples", samples, "Number of Haar-random lattices")->check(CLI::PositiveNumber);
    sub.add_option("--r-max", r_max, "Largest count with its own row")->check(CLI::NonNegativeNumber);
  }
  void run(const Context& ctx) const {
    const auto model = build_model(ctx.common);
    const Region a = build_region(region, model.dim() - 1);
    const auto res = limit_pmf_mc(model, s, a, r_max, samples, s_cut, ctx.common.seed, ctx.common.threads);
    auto table = start_table(ctx, model, {"r", "p", "std_error", "truncation"});
    add_pmf_rows(table, res.pmf, res.truncation);
    table.meta["volume"] = region_volume(a);
    table.meta["error_budget"] = res.error_budget;
    emit(table, ctx.common);
  }
};

// --- moments ---------------------------------------------------------------

struct MomentsCmd {
  std::string source = "empirical";
  double t = 10.0, s = kInf, s_cut = 14.0;
  RegionOptions region;
  std::vector<double> beta{1.0, 2.0};
  std::size_t samples = 10000;
  void add(CLI::App& sub) {
    sub.add_option("--source", source, "empirical (spherical discs) | cusp | limit")
        ->check(CLI::IsMember({"empirical", "cusp", "limit"}));
    sub.add_option("--t", t, "Radius of the ball (empirical, cusp)")->check(positive_finite("t"));
    sub.add_option("--s", s, "Window width")->check(positive("s"));
    sub.add_option("--s-cut", s_cut, "Cone truncation height (limit)")->check(positive_finite("s-cut"));
    add_region(sub, region);
    sub.add_option("--beta", beta, "Moment orders (comma separated)")->delimiter(',')->check(non_negative("beta"));
    sub.add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber);
  }
  void run(const Context& ctx) const {
    const auto model = build_model(ctx.common);
    const int k = model.dim() - 1;
    auto table = start_table(ctx, model, {"beta", "value", "std_error", "truncation", "unstable", "exact"});
    const auto& c = ctx.common;
    if (source == "limit") {
      const Region a = build_region(region, k);
      for (double b : beta) {
        if (b != std::floor(b)) throw ConfigError("limit moments need integer orders");
        const auto e = limit_moment(model, s, {a}, {static_cast<int>(b)}, samples, s_cut, c.seed, c.threads);
        table.add_row({b, e.value, e.std_error, e.truncation, std::int64_t{0}, std::int64_t{e.exact}});
      }
    } else {
      std::vector<std::int64_t> counts;
      if (source == "empirical") {
        if (!region.box.empty()) throw ConfigError("spherical moments take --sigma, not --box");
        const auto ds = directions(model, t, s);
        const auto raw = disc_counts(ds, region.sigma, CountSampler::uniform(c.seed), samples, c.threads);
        counts.assign(raw.begin(), raw.end());
        note_best_effort(table, ds.best_effort());
      } else {
        const auto cs = cusp_set(model, t, s);
        counts = cusp_counts(cs, build_region(region, k), CountSampler::uniform(c.seed), samples, c.threads);
      }
      for (double b : beta) {
        const auto e = moment_empirical(counts, b);
        table.add_row({b, e.value, e.std_error, 0.0, std::int64_t{e.unstable}, std::int64_t{0}});
      }
    }
    emit(table, c);
  }
};

// --- spectrum --------------------------------------------------------------

struct SpectrumCmd {
  double cutoff = 3.0;
  void add(CLI::App& sub) {
    sub.add_option("--L", cutoff, "Largest distance d(w, gamma w)")->check(positive_finite("L"));
  }
  void run(const Context& ctx) const {
    const auto model = build_model(ctx.common);
    const auto spec = distance_spectrum(model, cutoff);
    auto table = start_table(ctx, model, {"ell", "cosh_ell", "multiplicity"});
    for (const auto& e : spec.entries) table.add_row({e.ell, e.cosh_ell, e.multiplicity});
    note_best_effort(table, spec.best_effort);
    emit(table, ctx.common);
  }
};

int run_main(int argc, char** argv) {
  CLI::App app{"Directions of hyperbolic lattice orbits: sampling, counting and limit distributions", "hypdir"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  auto formatter = std::make_shared<FlatConfig>();
  app.config_formatter(formatter);
  app.set_config("--config", "", "key=value file; keys are the long flag names, flags override the file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.option_defaults()->always_capture_default();

  Context ctx;
  std::map<CLI::App*, std::function<void()>> runners;

  OrbitCmd orbit;
  PairCorrCmd paircorr;
  CountingCmd counting;
  CuspStatsCmd cuspstats;
  McDistCmd mcdist;
  MomentsCmd moments;
  SpectrumCmd spectrum;

  auto reg = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->footer("  --config FILE               key=value file; keys are the long flag names above, flags override it");
    sub->preparse_callback([formatter, name](std::size_t) { formatter->set_command(name); });
    add_common(*sub, ctx.common);
    cmd.add(*sub);
    runners[sub] = [&cmd, &ctx]() { cmd.run(ctx); };
  };
  reg("orbit", "Orbit points with 0 < d(o, z) <= t", orbit);
  reg("paircorr", "Empirical pair correlation and the limiting density (n = 2)", paircorr);
  reg("counting", "Counting distribution in random scaled discs", counting);
  reg("cuspstats", "Counting distribution seen from the cusp", cuspstats);
  reg("mcdist", "Limiting counting distribution by Monte Carlo over random lattices", mcdist);
  reg("moments", "Moments of counts (empirical, cusp or limit)", moments);
  reg("spectrum", "Distance spectrum d(w, gamma w)", spectrum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ConfigError& e) {
    const std::string what = e.what();
    const auto dot = what.rfind('.');
    if (what.find("not able to parse") != std::string::npos && dot != std::string::npos)
      std::cerr << "error: unknown config key '" << what.substr(dot + 1) << "'\n";
    else
      std::cerr << "error: " << what << '\n';
    return kConfigError;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    ctx.sub = sub;
    try {
      runners.at(sub)();
    } catch (const ApproxPolicyError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kApproxPolicy;
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kConfigError;
    } catch (const std::domain_error& e) {
      std::cerr << "numeric failure: " << e.what() << '\n';
      return kNumericFailure;
    } catch (const std::logic_error& e) {
      // invalid_argument, dimension_error, unsupported_error
      std::cerr << "error: " << e.what() << '\n';
      return kConfigError;
    } catch (const std::exception& e) {
      std::cerr << "numeric failure: " << e.what() << '\n';
      return kNumericFailure;
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) { return run_main(argc, argv); }
