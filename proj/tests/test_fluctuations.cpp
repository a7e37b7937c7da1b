#include "doctest.h"

#include <cmath>

#include "fluctlab/fluctuations.hpp"
#include "fluctlab/stats.hpp"

using namespace fluctlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

EnvironmentField flat_env(int d, int n) {
  return sample_field(EnvironmentSpec::constant(1.0), d, n);
}

}  // namespace

TEST_CASE("field_value: empty system and counting identity") {
  const auto lat = make_lattice(1, 64);
  const Configuration empty = Configuration::bernoulli(lat, 0.0, 1);
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);
  CHECK(field_value(empty, g, 0.0) == 0.0);

  // G == 1 counts the centered particle number
  Configuration cfg(lat, 0);
  for (std::size_t i = 0; i < 10; ++i) cfg.set_occupancy(i, 1);
  LatticeFunction one(lat, 1.0);
  const double expected = (10.0 - 0.25 * 64.0) / 8.0;
  CHECK(field_value(cfg, one, 0.25) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("static fluctuations of the Bernoulli field at small scale") {
  const int n = 64;
  const auto lat = make_lattice(1, n);
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);
  const double rho = 0.5;
  std::vector<double> ys(4000);
  for (std::size_t s = 0; s < ys.size(); ++s) {
    const Configuration cfg =
        Configuration::bernoulli(lat, rho, derive_seed(31337, seed_tag::kInitialConfig, s));
    ys[s] = field_value(cfg, g, rho);
  }
  const double expected = rho * (1.0 - rho) * inner_product(g, g);
  CHECK(std::abs(z_variance(ys, expected)) <= 3.0);
  CHECK(std::abs(z_mean(ys, 0.0)) <= 3.0);
}

TEST_CASE("test functions: labels, restriction, W-gradient diagnostic") {
  const std::vector<std::string> labels = {"const", "cos1", "sin2"};
  const auto set = test_function_set(labels);
  CHECK(set.size() == 3);
  CHECK(set[1].label == "cos1");
  const std::vector<std::string> bad = {"tanh1"};
  CHECK_THROWS(test_function_set(bad));

  const auto lat = make_lattice(1, 128);
  const WFunction wf = WFunction::identity(1);
  // smooth G: discrete W-gradient stays near sup|G'| = 2 sqrt(2) pi
  const double max_grad = set[1].max_w_gradient(wf, lat);
  CHECK(max_grad <= 2.0 * std::sqrt(2.0) * kPi * 1.01);
  CHECK(max_grad >= 2.0 * std::sqrt(2.0) * kPi * 0.9);
}

TEST_CASE("corrected test function: constant environment is exact") {
  const int n = 32;
  const WFunction wf = WFunction::identity(1);
  const EnvironmentField field = sample_field(EnvironmentSpec::constant(1.7), 1, n);
  const LatticeOperator op = assemble(wf, field);
  const LatticeFunction g = tf_cos(0, 1).restriction(op.lattice_ptr());
  HomogenizedMatrix a;
  a.diag = {1.7};
  const LatticeFunction gl = corrected_test_function(g, 1.0, op, a);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(gl[i] == doctest::Approx(g[i]).epsilon(1e-9));

  // G == 1: both operators kill constants, so G^lambda == 1
  LatticeFunction one(op.lattice_ptr(), 1.0);
  const LatticeFunction onel = corrected_test_function(one, 2.0, op, a);
  for (std::size_t i = 0; i < one.size(); ++i)
    CHECK(onel[i] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("corrected test function: ||G_N^lambda - G|| decreases with N") {
  const WFunction wf = WFunction::identity(1);
  const EnvironmentSpec periodic = EnvironmentSpec::periodic({2}, {1.0, 3.0}, 3.0);
  HomogenizedMatrix a;
  a.diag = {1.5};  // harmonic mean of (1, 3)
  std::vector<double> gaps;
  for (int n : {64, 128, 256}) {
    const LatticeOperator op = assemble(wf, sample_field(periodic, 1, n));
    const LatticeFunction g = tf_cos(0, 1).restriction(op.lattice_ptr());
    const LatticeFunction gl = corrected_test_function(g, 1.0, op, a);
    LatticeFunction diff(op.lattice_ptr());
    for (std::size_t i = 0; i < g.size(); ++i) diff[i] = g[i] - gl[i];
    gaps.push_back(norm_l2(diff));
  }
  CHECK(gaps[1] < gaps[0]);
  CHECK(gaps[2] < gaps[1]);
}

TEST_CASE("qv_expectation: degenerate cases and flat closed form") {
  const int n = 128;
  const WFunction wf = WFunction::identity(1);
  const EnvironmentField field = flat_env(1, n);
  const auto lat = make_lattice(1, n);
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);

  CHECK(qv_expectation(g, wf, field, 0.0, RateFamily::standard(0.0), 1.0) == 0.0);
  CHECK(qv_expectation(g, wf, field, 1.0, RateFamily::standard(0.0), 1.0) == 0.0);
  LatticeFunction c(lat, 4.2);
  CHECK(qv_expectation(c, wf, field, 0.5, RateFamily::standard(0.0), 1.0) == 0.0);

  // independent discrete-sum oracle: t * 2 chi phi' * sum (dG)^2 N
  double energy = 0.0;
  for (int x = 0; x < n; ++x) {
    const double dg = g[static_cast<std::size_t>((x + 1) % n)] - g[static_cast<std::size_t>(x)];
    energy += dg * dg * n;
  }
  const double expected = 3.0 * 2.0 * 0.25 * 1.5 * energy;  // t=3, rho=.5, b=.5
  CHECK(qv_expectation(g, wf, field, 0.5, RateFamily::standard(0.5), 3.0) ==
        doctest::Approx(expected).epsilon(1e-12));
  // and the continuum value 2 chi phi' t int (G')^2 = 2 pi^2 t phi' appears as N grows
  CHECK(qv_expectation(g, wf, field, 0.5, RateFamily::standard(0.0), 1.0) ==
        doctest::Approx(2.0 * kPi * kPi).epsilon(1e-3));
}

TEST_CASE("martingale path: replay equals online accumulation") {
  const int n = 32;
  const WFunction wf = WFunction::identity(1);
  const EnvironmentField field = flat_env(1, n);
  const auto lat = make_lattice(1, n);
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);
  const std::vector<double> samples = {0.02, 0.05};

  Configuration cfg = Configuration::bernoulli(lat, 0.5, 777);
  ExclusionDynamics dyn(cfg, wf, field, RateFamily::standard(0.0), 4242);
  MartingaleObserver online(g, 0.5);
  EventObserver* obs[] = {&online};
  SimulateOptions opts;
  opts.record_events = true;
  opts.sample_times = samples;
  Trajectory traj;
  dyn.run(0.05, obs, opts, &traj);

  const MartingalePath replayed =
      martingale_path(traj, wf, field, RateFamily::standard(0.0), g, 0.5, samples);
  REQUIRE(replayed.times.size() == online.path().times.size());
  for (std::size_t i = 0; i < replayed.times.size(); ++i) {
    CHECK(replayed.m[i] == doctest::Approx(online.path().m[i]).epsilon(1e-12));
    CHECK(replayed.qv[i] == doctest::Approx(online.path().qv[i]).epsilon(1e-12));
    CHECK(replayed.y[i] == doctest::Approx(online.path().y[i]).epsilon(1e-12));
  }
  // QV is nondecreasing and M starts at zero
  CHECK(replayed.qv[0] >= 0.0);
  CHECK(replayed.qv[1] >= replayed.qv[0]);
}

TEST_CASE("martingale statistics at small scale") {
  const int n = 32;
  const double t_final = 0.1;
  const int replicas = 400;
  const WFunction wf = WFunction::identity(1);
  const EnvironmentField field = flat_env(1, n);
  const auto lat = make_lattice(1, n);
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);

  std::vector<double> m_final(replicas), comp(replicas), qv_rate(replicas);
  for (int r = 0; r < replicas; ++r) {
    const std::uint64_t seed =
        derive_seed(5150, seed_tag::kDynamics, static_cast<std::uint64_t>(r));
    Configuration cfg =
        Configuration::bernoulli(lat, 0.5, derive_seed(seed, seed_tag::kInitialConfig));
    ExclusionDynamics dyn(cfg, wf, field, RateFamily::standard(0.0), seed);
    MartingaleObserver mart(g, 0.5);
    EventObserver* obs[] = {&mart};
    SimulateOptions opts;
    opts.sample_times = {t_final};
    dyn.run(t_final, obs, opts);
    m_final[static_cast<std::size_t>(r)] = mart.path().m.back();
    comp[static_cast<std::size_t>(r)] =
        mart.path().m.back() * mart.path().m.back() - mart.path().qv.back();
    qv_rate[static_cast<std::size_t>(r)] = mart.path().qv.back() / t_final;
  }
  CHECK(std::abs(z_mean(m_final, 0.0)) <= 3.0);
  CHECK(std::abs(z_mean(comp, 0.0)) <= 3.0);
  const double expected = qv_expectation(g, wf, field, 0.5, RateFamily::standard(0.0), 1.0);
  CHECK(std::abs(z_mean(qv_rate, expected)) <= 3.0);
}

TEST_CASE("bg statistic: linear functions are exactly compensated") {
  const int n = 32;
  const WFunction wf = WFunction::identity(1);
  const EnvironmentField field = flat_env(1, n);
  const auto lat = make_lattice(1, n);
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);

  SimulationSetup setup{wf, field, RateFamily::standard(0.3), 0.4, 0.1};
  const Trajectory traj = simulate(setup, 99);
  REQUIRE(!traj.events.empty());
  const double z_site = bg_statistic(traj, wf, field, setup.family, g,
                                     CylinderFunction::site(), 0.4, 0.1);
  CHECK(z_site == 0.0);

  // frozen full/empty systems give zero for any cylinder function
  SimulationSetup frozen = setup;
  frozen.rho = 1.0;
  const Trajectory tfull = simulate(frozen, 100);
  CHECK(bg_statistic(tfull, wf, field, setup.family, g, CylinderFunction::h1(0), 1.0, 0.1) ==
        0.0);
}

TEST_CASE("bg statistic: pair function fluctuates but stays finite") {
  const int n = 32;
  const WFunction wf = WFunction::identity(1);
  const EnvironmentField field = flat_env(1, n);
  const auto lat = make_lattice(1, n);
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);
  SimulationSetup setup{wf, field, RateFamily::standard(0.0), 0.5, 0.05};
  const Trajectory traj = simulate(setup, 104);
  const double z = bg_statistic(traj, wf, field, setup.family, g,
                                CylinderFunction::h1(0), 0.5, 0.05);
  CHECK(std::isfinite(z));
  CHECK(z != 0.0);
}

TEST_CASE("replacement gap: trivial zeros and decay trend") {
  const WFunction wf = WFunction::identity(1);
  {
    const int n = 16;
    const EnvironmentField field = flat_env(1, n);
    const auto lat = make_lattice(1, n);
    const LatticeFunction g = tf_cos(0, 1).restriction(lat);
    SimulationSetup setup{wf, field, RateFamily::standard(0.0), 0.5, 0.05};
    const Trajectory traj = simulate(setup, 12);
    // b = 0 carries no h-terms
    CHECK(replacement_gap_statistic(traj, wf, field, setup.family, g, 0.5, 0.05) == 0.0);
    // rho = 0 freezes the system
    SimulationSetup vac = setup;
    vac.rho = 0.0;
    vac.family = RateFamily::standard(0.5);
    const Trajectory tv = simulate(vac, 13);
    CHECK(replacement_gap_statistic(tv, wf, field, vac.family, g, 0.0, 0.05) == 0.0);
  }
  // b = 0.5, rho = 0.5: L2 gap decreasing over N in {16, 32, 64}
  const int replicas = 400;
  const double t_final = 0.05;
  std::vector<double> gap2;
  for (int n : {16, 32, 64}) {
    const EnvironmentField field = flat_env(1, n);
    const auto lat = make_lattice(1, n);
    const LatticeFunction g = tf_cos(0, 1).restriction(lat);
    SimulationSetup setup{wf, field, RateFamily::standard(0.5), 0.5, t_final};
    double acc = 0.0;
    for (int r = 0; r < replicas; ++r) {
      const Trajectory traj = simulate(
          setup, derive_seed(606060, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)));
      const double gap =
          replacement_gap_statistic(traj, wf, field, setup.family, g, 0.5, t_final);
      acc += gap * gap;
    }
    gap2.push_back(acc / replicas);
  }
  CHECK(gap2[1] < gap2[0]);
  CHECK(gap2[2] < gap2[1]);
}

TEST_CASE("equivalence of ensembles: closed forms") {
  CHECK(equivalence_of_ensembles_gap(CylinderFunction::site(), 1, 16) == 0.0);
  // pair function: max_k of k(M-k) / (M^2 (M-1)) at M = 8
  const double gap = equivalence_of_ensembles_gap(CylinderFunction::h1(0), 1, 8);
  CHECK(gap == doctest::Approx(16.0 / (64.0 * 7.0)).epsilon(1e-14));
  const double gap2 = equivalence_of_ensembles_gap(CylinderFunction::h2(0), 1, 8);
  CHECK(gap2 == doctest::Approx(gap).epsilon(1e-14));
  // bounded scaled gap, and the 2^20 guard
  for (int n : {8, 16, 32})
    CHECK(equivalence_of_ensembles_gap(CylinderFunction::h1(0), 1, n) * n <= 0.3);
  CHECK_THROWS(equivalence_of_ensembles_gap(CylinderFunction::h1(0), 3, 128));
}

TEST_CASE("corrected/uncorrected field equivalence bound at one N") {
  // E[(Y - Y^lambda)^2] = chi ||G - G^lambda||^2 exactly at stationarity
  const int n = 64;
  const WFunction wf = WFunction::identity(1);
  const EnvironmentSpec periodic = EnvironmentSpec::periodic({2}, {1.0, 3.0}, 3.0);
  const EnvironmentField field = sample_field(periodic, 1, n);
  const LatticeOperator op = assemble(wf, field);
  const auto lat = op.lattice_ptr();
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);
  HomogenizedMatrix a;
  a.diag = {1.5};
  const LatticeFunction gl = corrected_test_function(g, 1.0, op, a);
  LatticeFunction diff(lat);
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = g[i] - gl[i];
  const double bound = 0.25 * inner_product(diff, diff);

  std::vector<double> sq(600);
  for (std::size_t r = 0; r < sq.size(); ++r) {
    const Configuration cfg = Configuration::bernoulli(
        lat, 0.5, derive_seed(2222, seed_tag::kInitialConfig, r));
    const double dy = field_value(cfg, diff, 0.5);
    sq[r] = dy * dy;
  }
  CHECK(std::abs(z_mean(sq, bound)) <= 3.0);
}
