#include "options.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "hypdir/limits.hpp"

namespace hypdir::cli {

std::vector<CLI::ConfigItem> FlatConfig::from_config(std::istream& in) const {
  auto items = CLI::ConfigINI::from_config(in);
  for (auto& item : items)
    if (item.parents.empty() || item.parents == std::vector<std::string>{"default"}) item.parents = {*command_};
  return items;
}

namespace {

CLI::Validator number_check(const std::string& name, const std::string& what, bool (*ok)(double)) {
  return CLI::Validator(
      [name, what, ok](std::string& s) -> std::string {
        double v = 0;
        if (!CLI::detail::lexical_cast(s, v)) return name + " must be a number";
        return ok(v) ? std::string() : name + " must be " + what;
      },
      what);
}

}  // namespace

CLI::Validator positive(const std::string& name) {
  return number_check(name, "positive", [](double v) { return v > 0; });
}
CLI::Validator positive_finite(const std::string& name) {
  return number_check(name, "positive", [](double v) { return v > 0 && std::isfinite(v); });
}
CLI::Validator non_negative(const std::string& name) {
  return number_check(name, "non-negative", [](double v) { return v >= 0 && std::isfinite(v); });
}

void add_common(CLI::App& sub, CommonOptions& c) {
  sub.add_option("--model", c.model, "modular-i | modular-rho | picard | generic:<generator file>");
  sub.add_option("--seed", c.seed, "Seed of the counter-based generator");
  sub.add_option("--threads", c.threads, "Worker threads (0: all cores); results do not depend on it");
  sub.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--output,-o", c.output, "Output file ('-' for stdout)");
  sub.add_flag("--allow-approx", c.allow_approx, "Accept best-effort enumeration (generic models)");
  sub.add_option("--covolume", c.covolume, "Declared covolume of a generic model")->check(positive_finite("covolume"));
  sub.add_option("--stab-order", c.stab_order, "Order of the stabiliser of w in a generic model")
      ->check(CLI::PositiveNumber);
  sub.add_option("--max-word-length", c.max_word_length, "Generator word bound for generic models")
      ->check(CLI::NonNegativeNumber);
  sub.add_option("--base", c.base, "Base point w of a generic model: x_1 ... x_{n-1} y")->delimiter(',');
}

void add_region(CLI::App& sub, RegionOptions& r) {
  auto* sigma = sub.add_option("--sigma", r.sigma, "Volume of the test set (centred ball)")->check(non_negative("sigma"));
  sub.add_option("--box", r.box, "Box test set lo_1,hi_1[,lo_2,hi_2] instead of --sigma")
      ->delimiter(',')
      ->excludes(sigma);
}

LatticeModel build_model(const CommonOptions& c) {
  const std::string prefix = "generic:";
  if (c.model.rfind(prefix, 0) != 0) {
    try {
      return LatticeModel::from_name(c.model);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (!c.allow_approx)
    throw ApproxPolicyError("generic models are enumerated best-effort; rerun with --allow-approx to accept this");
  GenericSpec spec;
  try {
    spec.generators = load_generators(c.model.substr(prefix.size()));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (spec.generators.empty()) throw ConfigError("generator file is empty");
  if (!(c.covolume > 0)) throw ConfigError("covolume must be positive for generic models");
  const int n = spec.generators.front().space_dim();
  if (c.base.empty()) {
    spec.base = HPoint::origin(n);
  } else {
    if (static_cast<int>(c.base.size()) != n) throw ConfigError("base must have n entries");
    if (!(c.base.back() > 0)) throw ConfigError("base height must be positive");
    spec.base = HPoint(CliffordVector(std::vector<double>(c.base.begin(), c.base.end() - 1)), c.base.back());
  }
  spec.covolume = c.covolume;
  spec.stab_order = c.stab_order;
  spec.max_word_length = c.max_word_length;
  return LatticeModel::generic(std::move(spec));
}

Region build_region(const RegionOptions& r, int k) {
  if (r.box.empty()) return ball_of_volume(k, r.sigma);
  if (static_cast<int>(r.box.size()) != 2 * k) throw ConfigError("box needs lo,hi for each of the n-1 coordinates");
  Box b;
  for (int d = 0; d < k; ++d) {
    b.lo.push_back(r.box[2 * static_cast<std::size_t>(d)]);
    b.hi.push_back(r.box[2 * static_cast<std::size_t>(d) + 1]);
    if (!(b.hi.back() >= b.lo.back())) throw ConfigError("box must have lo <= hi");
  }
  return b;
}

nlohmann::ordered_json resolved_config(const CLI::App& sub) {
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "threads" || name == "output" || name == "config") continue;
    if (opt->get_expected_min() == 0) {
      cfg[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& res = opt->results();
      if (res.size() == 1) {
        cfg[name] = res.front();
      } else {
        cfg[name] = res;
      }
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

void emit(const StatTable& table, const CommonOptions& c) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (c.output != "-") {
    file.open(c.output);
    if (!file) throw ConfigError("cannot open output file '" + c.output + "'");
    out = &file;
  }
  if (c.format == "json") {
    table.write_json(*out);
  } else {
    table.write_csv(*out);
    for (const auto& n : table.notes) std::cerr << "note: " << n << '\n';
  }
  out->flush();
  if (!*out) throw std::runtime_error("failed to write output");
}

}  // namespace hypdir::cli
