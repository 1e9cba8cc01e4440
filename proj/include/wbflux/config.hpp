#ifndef WBFLUX_CONFIG_HPP
#define WBFLUX_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wbflux/experiments.hpp"
#include "wbflux/scheme.hpp"

namespace wbflux {

/// Line-oriented `key = value` configuration: numbers plain, strings quoted,
/// arrays of numbers in brackets, booleans true/false, `#` comments. Unknown
/// keys are rejected with the offending key named. CLI flags overlay file
/// values through apply().
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  void apply(const std::string& key, const std::string& raw_value);
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long_or(const std::string& key, long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_array_or(const std::string& key) const;

  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  std::map<std::string, std::string> values_;  // key -> raw value text
};

/// Everything a simulation needs, resolved from a preset and/or config keys.
struct RunSetup {
  Problem problem;
  Discretization disc;
  StepPolicy policy;
  SchemeKind scheme = SchemeKind::well_balanced;
  std::vector<double> snapshot_times;
  bool history = false;
  double blowup_factor = 10.0;
  std::string output_dir = "out";
  long seed = 12345;
  std::optional<TestCasePreset> preset;
};

RunSetup build_run_setup(const Config& cfg);

}  // namespace wbflux

#endif
