#include "fluctlab/environment.hpp"

#include <cmath>
#include <stdexcept>

#include "fluctlab/rng.hpp"

namespace fluctlab {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("environment spec: " + msg);
}

void check_bounds(std::span<const double> vals, double theta, const char* field) {
  for (double v : vals) {
    if (!(v >= 1.0 / theta && v <= theta))
      throw std::invalid_argument(std::string("environment spec: ") + field +
                                  " value outside [theta^-1, theta]");
  }
}

}  // namespace

EnvironmentSpec EnvironmentSpec::constant(double value) {
  EnvironmentSpec s;
  s.kind = EnvKind::kConstant;
  s.values = {value};
  s.theta = std::max(value, 1.0 / value);
  return s;
}

EnvironmentSpec EnvironmentSpec::iid(std::vector<double> values, std::vector<double> probs,
                                     double theta, std::uint64_t seed) {
  EnvironmentSpec s;
  s.kind = EnvKind::kIid;
  s.values = std::move(values);
  s.probs = std::move(probs);
  s.theta = theta;
  s.seed = seed;
  return s;
}

EnvironmentSpec EnvironmentSpec::periodic(std::vector<int> period, std::vector<double> table,
                                          double theta) {
  EnvironmentSpec s;
  s.kind = EnvKind::kPeriodic;
  s.period = std::move(period);
  s.table = std::move(table);
  s.theta = theta;
  return s;
}

void EnvironmentSpec::validate(int dim) const {
  require(theta >= 1.0, "theta must be >= 1");
  switch (kind) {
    case EnvKind::kConstant: {
      require(values.size() == 1, "constant kind takes exactly one value");
      check_bounds(values, theta, "constant");
      break;
    }
    case EnvKind::kIid: {
      require(!values.empty(), "iid kind needs a nonempty support");
      require(values.size() == probs.size(), "values/probs length mismatch");
      double total = 0.0;
      for (double p : probs) {
        require(p >= 0.0, "probabilities must be nonnegative");
        total += p;
      }
      require(std::abs(total - 1.0) <= 1e-12, "probabilities must sum to 1");
      check_bounds(values, theta, "iid support");
      break;
    }
    case EnvKind::kPeriodic: {
      require(!period.empty(), "periodic kind needs a period vector");
      require(static_cast<int>(period.size()) == dim || period.size() == 1,
              "period vector length must be d (or 1, broadcast)");
      std::size_t cells = 1;
      for (int p : period) {
        require(p >= 1, "periods must be >= 1");
        cells *= static_cast<std::size_t>(p);
      }
      if (period.size() == 1 && dim > 1) {
        cells = 1;
        for (int j = 0; j < dim; ++j) cells *= static_cast<std::size_t>(period[0]);
      }
      require(table.size() == cells, "table size must equal the period box volume");
      check_bounds(table, theta, "table");
      break;
    }
  }
}

EnvironmentField sample_field(const EnvironmentSpec& spec, int dim, int n) {
  if (n < 2) throw std::invalid_argument("sample_field: N must be >= 2");
  spec.validate(dim);
  const Lattice lat(dim, n);
  EnvironmentField field;
  field.dim = dim;
  field.n = n;
  field.theta = spec.theta;
  field.a.assign(static_cast<std::size_t>(dim),
                 std::vector<double>(lat.size(), 1.0));

  std::vector<int> period(static_cast<std::size_t>(dim), 1);
  if (spec.kind == EnvKind::kPeriodic) {
    for (int j = 0; j < dim; ++j)
      period[static_cast<std::size_t>(j)] =
          spec.period[spec.period.size() == 1 ? 0 : static_cast<std::size_t>(j)];
  }

  std::vector<double> cum(spec.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.probs.size(); ++i) {
    acc += spec.probs[i];
    cum[i] = acc;
  }

  for (int j = 0; j < dim; ++j) {
    auto& aj = field.a[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < lat.size(); ++i) {
      switch (spec.kind) {
        case EnvKind::kConstant:
          aj[i] = spec.values[0];
          break;
        case EnvKind::kIid: {
          // key on (seed, axis, integer coordinates): honest Z^d field
          std::uint64_t h = hash_combine(spec.seed, seed_tag::kEnvironment);
          h = hash_combine(h, static_cast<std::uint64_t>(j));
          for (int k = 0; k < dim; ++k)
            h = hash_combine(h, static_cast<std::uint64_t>(lat.coord(i, k)));
          const double u = u64_to_unit(h);
          std::size_t pick = spec.values.size() - 1;
          for (std::size_t q = 0; q < cum.size(); ++q) {
            if (u < cum[q]) {
              pick = q;
              break;
            }
          }
          aj[i] = spec.values[pick];
          break;
        }
        case EnvKind::kPeriodic: {
          std::size_t t = 0;
          for (int k = dim - 1; k >= 0; --k)
            t = t * static_cast<std::size_t>(period[static_cast<std::size_t>(k)]) +
                static_cast<std::size_t>(lat.coord(i, k) % period[static_cast<std::size_t>(k)]);
          aj[i] = spec.table[t];
          break;
        }
      }
    }
  }
  return field;
}

EnvironmentField shift_field(const EnvironmentField& field, std::span<const int> y) {
  if (static_cast<int>(y.size()) != field.dim)
    throw std::invalid_argument("shift_field: shift vector length mismatch");
  const Lattice lat(field.dim, field.n);
  EnvironmentField out = field;
  std::vector<int> x(static_cast<std::size_t>(field.dim));
  for (int j = 0; j < field.dim; ++j) {
    auto& src = field.a[static_cast<std::size_t>(j)];
    auto& dst = out.a[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < lat.size(); ++i) {
      for (int k = 0; k < field.dim; ++k) x[static_cast<std::size_t>(k)] = lat.coord(i, k) + y[k];
      dst[i] = src[lat.index(x)];
    }
  }
  return out;
}

bool EnvironmentField::constant_per_axis() const {
  for (const auto& aj : a)
    for (double v : aj)
      if (v != aj.front()) return false;
  return true;
}

}  // namespace fluctlab
