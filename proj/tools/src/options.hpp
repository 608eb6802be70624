#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypdir/halfspace.hpp"
#include "hypdir/lattice.hpp"
#include "stat_table.hpp"

namespace hypdir::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kApproxPolicy = 3, kNumericFailure = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ApproxPolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// key=value config files with flat keys; each key is routed to the active subcommand.
class FlatConfig : public CLI::ConfigINI {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override;
  void set_command(std::string name) { *command_ = std::move(name); }

 private:
  std::shared_ptr<std::string> command_ = std::make_shared<std::string>();
};

struct CommonOptions {
  std::string model = "modular-i";
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "csv";
  std::string output = "-";
  bool allow_approx = false;
  // generic:<path> models
  double covolume = 0.0;
  int stab_order = 1;
  int max_word_length = 8;
  std::vector<double> base;
};

struct RegionOptions {
  double sigma = 1.0;
  std::vector<double> box;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

CLI::Validator positive(const std::string& name);
CLI::Validator positive_finite(const std::string& name);
CLI::Validator non_negative(const std::string& name);

void add_common(CLI::App& sub, CommonOptions& c);
void add_region(CLI::App& sub, RegionOptions& r);

LatticeModel build_model(const CommonOptions& c);
// The centred ball of volume sigma, or the --box region.
Region build_region(const RegionOptions& r, int k);

// Resolved option values of `sub`, without the run-local threads/output/config entries.
nlohmann::ordered_json resolved_config(const CLI::App& sub);

void emit(const StatTable& table, const CommonOptions& c);

}  // namespace hypdir::cli
