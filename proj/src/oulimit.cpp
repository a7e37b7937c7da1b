#include "fluctlab/oulimit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluctlab/rng.hpp"
#include "fluctlab/stats.hpp"

namespace fluctlab {

OUParams OUParams::build(double rho, double b, const HomogenizedMatrix& a_eff,
                         const WFunction& wf, int dim, int n_ref, int k_modes) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("ou params: rho must lie in [0,1]");
  if (!(b > -0.5)) throw std::invalid_argument("ou params: b must be > -1/2");
  OUParams p;
  p.rho = rho;
  p.b = b;
  p.chi = rho * (1.0 - rho);
  p.phi_prime = 1.0 + 2.0 * b * rho;
  p.a_eff = a_eff;
  p.n_ref = n_ref;
  const LatticeOperator op =
      assemble(wf, make_constant_field(dim, n_ref, a_eff.diag));
  p.basis = eigendecompose(op, k_modes);
  return p;
}

std::vector<double> mode_coefficients(const OUParams& params, const LatticeFunction& g,
                                      double coverage_tol) {
  const int k = params.basis.modes();
  std::vector<double> c(static_cast<std::size_t>(k));
  double captured = 0.0;
  for (int i = 0; i < k; ++i) {
    c[static_cast<std::size_t>(i)] = params.basis.coefficient(i, g);
    captured += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
  }
  const double total = inner_product(g, g);
  if (total > 0.0 && captured < total * (1.0 - coverage_tol))
    throw std::runtime_error("ou modes: truncation captures only " +
                             std::to_string(captured / total) + " of ||G||^2");
  return c;
}

FieldSeries ou_simulate(const OUParams& params, std::span<const LatticeFunction> g_list,
                        std::span<const std::string> labels,
                        std::span<const double> times, std::uint64_t seed) {
  if (g_list.size() != labels.size())
    throw std::invalid_argument("ou_simulate: labels/functions mismatch");
  const int k = params.basis.modes();
  std::vector<std::vector<double>> coeffs;
  for (const auto& g : g_list) coeffs.push_back(mode_coefficients(params, g));

  Xoshiro256 rng(derive_seed(seed, seed_tag::kOuLimit));
  const double sigma0 = std::sqrt(params.chi);
  std::vector<double> y(static_cast<std::size_t>(k));
  for (auto& v : y) v = sigma0 * rng.normal();

  FieldSeries series;
  series.labels.assign(labels.begin(), labels.end());
  series.rho = params.rho;
  series.b = params.b;
  series.values.resize(g_list.size());
  double t_now = 0.0;
  for (double t : times) {
    const double dt = t - t_now;
    if (dt < 0.0) throw std::invalid_argument("ou_simulate: times must be nondecreasing");
    if (dt > 0.0) {
      for (int m = 0; m < k; ++m) {
        const double rate = params.phi_prime * params.basis.alpha[static_cast<std::size_t>(m)];
        const double decay = std::exp(-rate * dt);
        const double noise_var = params.chi * (1.0 - decay * decay);
        y[static_cast<std::size_t>(m)] = decay * y[static_cast<std::size_t>(m)] +
                                         std::sqrt(noise_var) * rng.normal();
      }
      t_now = t;
    }
    series.times.push_back(t);
    for (std::size_t gi = 0; gi < g_list.size(); ++gi) {
      double val = 0.0;
      for (int m = 0; m < k; ++m)
        val += coeffs[gi][static_cast<std::size_t>(m)] * y[static_cast<std::size_t>(m)];
      series.values[gi].push_back(val);
    }
  }
  return series;
}

double stationary_covariance(const OUParams& params, const LatticeFunction& g,
                             const LatticeFunction& h) {
  return params.chi * inner_product(g, h);
}

double time_correlation(const OUParams& params, const LatticeFunction& g, double t) {
  if (t < 0.0) throw std::invalid_argument("time_correlation: t must be >= 0");
  const auto c = mode_coefficients(params, g);
  double acc = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m)
    acc += c[m] * c[m] *
           std::exp(-params.phi_prime * params.basis.alpha[m] * t);
  return params.chi * acc;
}

double noise_qv_spectral(const OUParams& params, const LatticeFunction& g) {
  const auto c = mode_coefficients(params, g);
  double acc = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) acc += c[m] * c[m] * params.basis.alpha[m];
  return acc;
}

double CompareReport::max_abs_z() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.z));
  return worst;
}

double CompareReport::max_abs_z(const std::string& stat) const {
  double worst = 0.0;
  for (const auto& r : rows)
    if (r.stat == stat) worst = std::max(worst, std::abs(r.z));
  return worst;
}

CompareReport compare(std::span<const FieldSeries> empirical, const OUParams& params,
                      std::span<const LatticeFunction> g_list) {
  if (empirical.size() < 8)
    throw std::invalid_argument("compare: need at least 8 replicas");
  const FieldSeries& first = empirical.front();
  if (g_list.size() != first.labels.size())
    throw std::invalid_argument("compare: test function count mismatch");
  for (const auto& s : empirical) {
    if (s.rho != params.rho || s.b != params.b)
      throw std::invalid_argument("compare: replica parameters (rho, b) do not match");
    if (s.times != first.times)
      throw std::invalid_argument("compare: replicas sampled at different times");
  }

  CompareReport report;
  const std::size_t n_times = first.times.size();
  const std::size_t n_rep = empirical.size();

  std::vector<double> buf(n_rep), buf2(n_rep);
  for (std::size_t gi = 0; gi < g_list.size(); ++gi) {
    const std::string& label = first.labels[gi];
    const double var_expected = stationary_covariance(params, g_list[gi], g_list[gi]);
    for (std::size_t ti = 0; ti < n_times; ++ti) {
      const double t = first.times[ti];
      for (std::size_t r = 0; r < n_rep; ++r) buf[r] = empirical[r].values[gi][ti];
      const Moments m = compute_moments(buf);
      report.rows.push_back({label, t, 0.0, "mean", m.mean, 0.0, m.mean / m.se_mean()});
      report.rows.push_back({label, t, 0.0, "variance", m.var, var_expected,
                             (m.var - var_expected) / m.se_var()});
      report.rows.push_back(
          {label, t, 0.0, "skewness", m.skewness(), 0.0, m.skewness() / m.se_skewness()});
      report.rows.push_back({label, t, 0.0, "kurtosis", m.excess_kurtosis(), 0.0,
                             m.excess_kurtosis() / m.se_kurtosis()});
    }
    for (std::size_t ti = 0; ti < n_times; ++ti) {
      for (std::size_t tj = ti + 1; tj < n_times; ++tj) {
        const double lag = first.times[tj] - first.times[ti];
        for (std::size_t r = 0; r < n_rep; ++r) {
          buf[r] = empirical[r].values[gi][ti];
          buf2[r] = empirical[r].values[gi][tj];
        }
        const Covariance c = sample_covariance(buf, buf2);
        const double expected = time_correlation(params, g_list[gi], lag);
        report.rows.push_back({label, first.times[ti], lag, "autocovariance", c.value,
                               expected, (c.value - expected) / c.se});
      }
    }
  }
  return report;
}

}  // namespace fluctlab
