#pragma once

// Stationary ergodic diagonal coefficient fields a_j on the discrete torus.
// The abstract probability space is realized as a counter-based hash keyed on
// the integer lattice coordinates, so the same underlying environment is
// probed at integer points regardless of N, and shift-stationarity is an
// exact identity on the index level.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fluctlab/lattice.hpp"

namespace fluctlab {

enum class EnvKind { kConstant, kIid, kPeriodic };

struct EnvironmentSpec {
  EnvKind kind = EnvKind::kConstant;
  double theta = 1.0;            // ellipticity bound, >= 1
  std::uint64_t seed = 0;
  std::vector<double> values;    // constant: single value; iid: finite support
  std::vector<double> probs;     // iid: probabilities matching `values`
  std::vector<int> period;       // periodic: per-axis periods
  std::vector<double> table;     // periodic: row-major value table over the period box

  // Throws std::invalid_argument with a field-level message on violation,
  // in particular when any producible value leaves [theta^-1, theta].
  void validate(int dim) const;

  static EnvironmentSpec constant(double value = 1.0);
  static EnvironmentSpec iid(std::vector<double> values, std::vector<double> probs,
                             double theta, std::uint64_t seed);
  static EnvironmentSpec periodic(std::vector<int> period, std::vector<double> table,
                                  double theta);
};

struct EnvironmentField {
  int dim = 0;
  int n = 0;
  double theta = 1.0;
  std::vector<std::vector<double>> a;  // a[j][site]

  double value(int axis, std::size_t site) const { return a[static_cast<std::size_t>(axis)][site]; }
  bool constant_per_axis() const;  // every a_j constant over sites
};

// Restriction A^N of the environment to T_N^d. Pure in (spec, d, N).
EnvironmentField sample_field(const EnvironmentSpec& spec, int dim, int n);

// x |-> a_j(x + y), coordinates mod N; exact group law.
EnvironmentField shift_field(const EnvironmentField& field, std::span<const int> y);

}  // namespace fluctlab
