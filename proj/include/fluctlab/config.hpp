#pragma once

// Experiment configuration: flat key = value text with typed parsing and
// field-level diagnostics. The canonical dump of a resolved configuration is
// hashed into the run manifest; identical configs produce identical outputs.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluctlab/dynamics.hpp"
#include "fluctlab/environment.hpp"
#include "fluctlab/wfunction.hpp"

namespace fluctlab {

struct ConfigError : std::invalid_argument {
  std::string key;
  ConfigError(std::string k, const std::string& msg)
      : std::invalid_argument("config key '" + k + "': " + msg), key(std::move(k)) {}
};

struct AxisProfileSpec {
  double slope = 1.0;
  std::vector<WJump> jumps;
};

struct ExperimentConfig {
  int d = 1;
  int n = 64;
  double rho = 0.5;
  double b = 0.0;
  double t_final = 1.0;
  int replicas = 100;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 -> FLUCTLAB_THREADS or hardware
  bool timing = false;
  bool event_log = false;
  std::string rates_family = "standard";  // "standard" | "extended"
  double rates_a = 0.0;                   // extended pair coefficient
  double rates_b3 = 0.0;                  // extended triple coefficient
  std::vector<AxisProfileSpec> w_axes;    // sparse; missing axes are identity
  EnvironmentSpec env = EnvironmentSpec::constant(1.0);
  std::vector<std::string> g_set = {"cos1"};
  std::vector<double> sample_times;       // empty -> {T}
  double lambda = 1.0;
  std::vector<int> n_list = {64, 128, 256};
  int ou_n_ref = 512;
  int ou_k = 64;
  std::string empirical_path;             // ou-compare input CSV

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(const std::string& text);

  // Apply one `key = value` assignment (also used for CLI overrides).
  void set(const std::string& key, const std::string& value);

  // Cross-field validation: b > -1/2, rho in [0,1], lambda > 0, theta >= 1, ...
  void validate() const;

  WFunction w_function() const;
  RateFamily rate_family() const;
  int effective_threads() const;

  // Deterministic resolved dump (sorted keys, %.17g reals) and its FNV-1a hash.
  std::string canonical_dump() const;
  std::uint64_t config_hash() const;
};

}  // namespace fluctlab
