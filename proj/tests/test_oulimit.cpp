#include "doctest.h"

#include <cmath>

#include "fluctlab/oulimit.hpp"
#include "fluctlab/stats.hpp"

using namespace fluctlab;

namespace {

OUParams flat_params(double rho, double b, int n_ref = 128, int k_modes = 16) {
  HomogenizedMatrix a;
  a.diag = {1.0};
  return OUParams::build(rho, b, a, WFunction::identity(1), 1, n_ref, k_modes);
}

}  // namespace

TEST_CASE("ou params: derived constants and validation") {
  const OUParams p = flat_params(0.3, 0.5);
  CHECK(p.chi == doctest::Approx(0.21));
  CHECK(p.phi_prime == doctest::Approx(1.3));
  CHECK(p.basis.alpha[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS(flat_params(1.5, 0.0));
  CHECK_THROWS(flat_params(0.5, -0.5));
}

TEST_CASE("ou simulate: conserved mass mode stays constant") {
  const OUParams p = flat_params(0.5, 0.0);
  const LatticeFunction one(p.basis.lat, 1.0);
  const std::vector<std::string> labels = {"const"};
  const std::vector<double> times = {0.0, 0.5, 1.0, 5.0};
  const std::vector<LatticeFunction> gs = {one};
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const FieldSeries s = ou_simulate(p, gs, labels, times, seed);
    for (std::size_t i = 1; i < times.size(); ++i)
      CHECK(s.values[0][i] == doctest::Approx(s.values[0][0]).epsilon(1e-12));
  }
}

TEST_CASE("ou simulate: frozen at extreme densities") {
  const std::vector<std::string> labels = {"cos1"};
  const std::vector<double> times = {0.0, 0.1};
  for (double rho : {0.0, 1.0}) {
    const OUParams p = flat_params(rho, 0.0);
    const std::vector<LatticeFunction> gs = {tf_cos(0, 1).restriction(p.basis.lat)};
    const FieldSeries s = ou_simulate(p, gs, labels, times, 9);
    for (double v : s.values[0]) CHECK(v == 0.0);
  }
}

TEST_CASE("ou simulate: stationary variance and Gaussianity") {
  const OUParams p = flat_params(0.5, 0.0);
  const LatticeFunction g = tf_cos(0, 1).restriction(p.basis.lat);
  const std::vector<double> times = {0.03};
  const std::vector<std::string> labels = {"cos1"};
  const std::vector<LatticeFunction> gs = {g};
  std::vector<double> ys(3000);
  for (std::size_t r = 0; r < ys.size(); ++r) {
    const FieldSeries s = ou_simulate(p, gs, labels, times, derive_seed(70, 0, r));
    ys[r] = s.values[0][0];
  }
  const double expected = stationary_covariance(p, g, g);
  CHECK(expected == doctest::Approx(0.25).epsilon(1e-10));  // chi ||G||^2 at rho = 1/2
  CHECK(std::abs(z_variance(ys, expected)) <= 3.0);
  const Moments m = compute_moments(ys);
  CHECK(std::abs(m.skewness() / m.se_skewness()) <= 3.0);
  CHECK(std::abs(m.excess_kurtosis() / m.se_kurtosis()) <= 3.0);
}

TEST_CASE("ou simulate: exact one-step transition per mode") {
  // G = phi_2 isolates a single mode: Y_dt = e^{-phi' a dt} Y_0 + noise
  const OUParams p = flat_params(0.5, 0.5);
  const LatticeFunction g = p.basis.mode(1);
  const double alpha = p.basis.alpha[1];
  const double dt = 0.004;
  const double decay = std::exp(-p.phi_prime * alpha * dt);
  const std::vector<double> times = {0.0, dt};
  const std::vector<std::string> labels = {"phi2"};
  const std::vector<LatticeFunction> gs = {g};
  std::vector<double> resid(4000);
  std::vector<double> y0(resid.size());
  for (std::size_t r = 0; r < resid.size(); ++r) {
    const FieldSeries s = ou_simulate(p, gs, labels, times, derive_seed(71, 0, r));
    y0[r] = s.values[0][0];
    resid[r] = s.values[0][1] - decay * s.values[0][0];
  }
  CHECK(std::abs(z_mean(resid, 0.0)) <= 3.0);
  const double noise_var = p.chi * (1.0 - decay * decay);
  CHECK(std::abs(z_variance(resid, noise_var)) <= 3.0);
  CHECK(std::abs(z_variance(y0, p.chi)) <= 3.0);
}

TEST_CASE("stationary covariance: orthogonality and bilinearity") {
  const OUParams p = flat_params(0.5, 0.0);
  const LatticeFunction gc = tf_cos(0, 1).restriction(p.basis.lat);
  const LatticeFunction gs = tf_sin(0, 1).restriction(p.basis.lat);
  CHECK(std::abs(stationary_covariance(p, gc, gs)) <= 1e-12);
  LatticeFunction g2 = gc;
  for (auto& v : g2.v) v *= 2.0;
  CHECK(stationary_covariance(p, g2, gc) ==
        doctest::Approx(2.0 * stationary_covariance(p, gc, gc)).epsilon(1e-12));
  CHECK(stationary_covariance(p, g2, g2) ==
        doctest::Approx(4.0 * stationary_covariance(p, gc, gc)).epsilon(1e-12));
}

TEST_CASE("time correlation: boundary values and monotone decay") {
  const OUParams p = flat_params(0.4, 0.2);
  const LatticeFunction g = tf_cos(0, 1).restriction(p.basis.lat);
  CHECK(time_correlation(p, g, 0.0) ==
        doctest::Approx(stationary_covariance(p, g, g)).epsilon(1e-12));
  double prev = time_correlation(p, g, 0.0);
  for (double t : {0.005, 0.01, 0.02, 0.05, 0.1}) {
    const double cur = time_correlation(p, g, t);
    CHECK(cur <= prev * (1.0 + 1e-12));
    prev = cur;
  }
  // mean-zero G: all surviving modes decay
  CHECK(time_correlation(p, g, 50.0) <= 1e-10);
  CHECK_THROWS(time_correlation(p, g, -1.0));
}

TEST_CASE("driving-noise bookkeeping: spectral QV equals the gradient energy") {
  const OUParams p = flat_params(0.5, 0.0);
  const LatticeFunction g = tf_cos(0, 1).restriction(p.basis.lat);
  const double spectral = noise_qv_spectral(p, g);
  const LatticeOperator ref_op = assemble(
      WFunction::identity(1), make_constant_field(1, p.n_ref, p.a_eff.diag));
  const double quadrature = ref_op.w_gradient_energy(g);
  CHECK(spectral == doctest::Approx(quadrature).epsilon(1e-6));
}

TEST_CASE("mode truncation coverage is enforced") {
  const OUParams p = flat_params(0.5, 0.0, 64, 4);
  // a high mode outside the K = 4 truncation
  const LatticeFunction g = tf_cos(0, 9).restriction(p.basis.lat);
  CHECK_THROWS(mode_coefficients(p, g));
}

TEST_CASE("compare: self-consistency and parameter mismatch rejection") {
  const OUParams p = flat_params(0.5, 0.0, 128, 16);
  const LatticeFunction g = tf_cos(0, 1).restriction(p.basis.lat);
  const std::vector<double> times = {0.0, 0.01, 0.03};
  const std::vector<std::string> labels = {"cos1"};
  const std::vector<LatticeFunction> gs = {g};
  std::vector<FieldSeries> series(400);
  for (std::size_t r = 0; r < series.size(); ++r)
    series[r] = ou_simulate(p, gs, labels, times, derive_seed(72, 0, r));
  const CompareReport report = compare(series, p, gs);
  CHECK(report.all_within(3.5));
  CHECK(report.max_abs_z("autocovariance") <= 3.5);
  CHECK(!report.rows.empty());

  auto mismatched = series;
  for (auto& s : mismatched) s.rho = 0.4;
  CHECK_THROWS(compare(mismatched, p, gs));
  series.resize(4);
  CHECK_THROWS(compare(series, p, gs));
}

TEST_CASE("ou simulate is deterministic in the seed") {
  const OUParams p = flat_params(0.5, 0.0);
  const LatticeFunction g = tf_cos(0, 1).restriction(p.basis.lat);
  const std::vector<double> times = {0.0, 0.02};
  const std::vector<std::string> labels = {"cos1"};
  const std::vector<LatticeFunction> gs = {g};
  const FieldSeries a = ou_simulate(p, gs, labels, times, 5);
  const FieldSeries b = ou_simulate(p, gs, labels, times, 5);
  const FieldSeries c = ou_simulate(p, gs, labels, times, 6);
  CHECK(a.values[0] == b.values[0]);
  CHECK(a.values[0] != c.values[0]);
}
