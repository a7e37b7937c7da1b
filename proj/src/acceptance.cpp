#include "fluctlab/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "fluctlab/fluctuations.hpp"
#include "fluctlab/homogenize.hpp"
#include "fluctlab/oulimit.hpp"
#include "fluctlab/runner.hpp"
#include "fluctlab/stats.hpp"

namespace fluctlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

// A deliberately irregular W used where the criterion does not pin one.
WFunction bumpy_w(int dim) {
  std::vector<WProfile> axes;
  axes.emplace_back(1.0, std::vector<WJump>{{0.3, 0.8}, {0.71, 2.5}});
  if (dim > 1) axes.emplace_back(1.4, std::vector<WJump>{{0.5, 1.0}});
  for (int j = 2; j < dim; ++j) axes.emplace_back();
  return WFunction(std::move(axes));
}

LatticeFunction random_function(const LatticePtr& lat, std::uint64_t seed) {
  LatticeFunction f(lat);
  Xoshiro256 rng(seed);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.normal();
  return f;
}

// --- criterion 1: operator identity -----------------------------------------

CriterionResult criterion_operator_identity(int) {
  const double tol = 1e-10;
  double worst = 0.0;
  const std::pair<int, int> cases[] = {{1, 128}, {2, 32}};
  for (const auto& [d, n] : cases) {
    EnvironmentSpec spec = EnvironmentSpec::iid({1.0, 2.0}, {0.5, 0.5}, 2.0, 91);
    const LatticeOperator op = assemble(bumpy_w(d), sample_field(spec, d, n));
    for (int trial = 0; trial < 50; ++trial) {
      const LatticeFunction f = random_function(
          op.lattice_ptr(), derive_seed(17, 0x6f70u, static_cast<std::uint64_t>(trial)));
      const LatticeFunction rate = op.apply_rate_form(f);
      const LatticeFunction diff = op.apply_difference_form(f);
      double gap = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        gap = std::max(gap, std::abs(rate[i] - diff[i]));
        scale = std::max(scale, std::abs(rate[i]));
      }
      worst = std::max(worst, gap / scale);
    }
  }
  return {1, "operator identity (rate form vs difference form)", worst <= tol,
          "max rel gap " + fmt(worst) + " (tol " + fmt(tol) + ") over 100 random f"};
}

// --- criterion 2: reversibility and stationarity -----------------------------

CriterionResult criterion_reversibility(int threads) {
  // detailed balance: exactly zero on 1e4 random bonds, both rate families
  const int n = 32;
  const LatticePtr lat = make_lattice(1, n);
  const WFunction wf = bumpy_w(1);
  const EnvironmentField field =
      sample_field(EnvironmentSpec::iid({1.0, 2.0}, {0.5, 0.5}, 2.0, 7), 1, n);
  double worst_db = 0.0;
  long checked = 0;
  const RateFamily families[] = {RateFamily::standard(0.7), RateFamily::extended(0.3, 0.1)};
  for (const RateFamily& family : families) {
    Xoshiro256 pick(1234);
    for (int trial = 0; trial < 5000; ++trial) {
      Configuration cfg = Configuration::bernoulli(
          lat, 0.5, derive_seed(55, seed_tag::kInitialConfig,
                                static_cast<std::uint64_t>(trial) * 2 +
                                    (family.is_extended() ? 1 : 0)));
      ExclusionDynamics dyn(std::move(cfg), wf, field, family, 1);
      // random active bond
      const std::size_t start = static_cast<std::size_t>(pick.uniform() * n);
      for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
        const Bond b{(start + k) % static_cast<std::size_t>(n), 0};
        if (!dyn.bond_active(b)) continue;
        worst_db = std::max(worst_db, dyn.detailed_balance_residual(b, 0.5));
        ++checked;
        break;
      }
    }
  }
  const bool db_ok = (worst_db == 0.0) && checked >= 9000;

  // stationarity: occupation time average of a tagged site, T = 10, N = 64
  const int n_obs = 64;
  const double t_final = 10.0;
  const int replicas = 16;
  const LatticePtr lat_obs = make_lattice(1, n_obs);
  const WFunction wf_flat = WFunction::identity(1);
  const EnvironmentField flat = sample_field(EnvironmentSpec::constant(1.0), 1, n_obs);

  struct OccupationObserver final : EventObserver {
    std::size_t site = 0;
    double occupied_time = 0.0;
    double t_last = 0.0;
    int current = 0;
    void attach(const ExclusionDynamics& dyn) override {
      current = dyn.configuration().occupancy(site);
    }
    void advance_to(double t) override {
      if (current) occupied_time += t - t_last;
      t_last = t;
    }
    void after_exchange(const ExclusionDynamics& dyn, Bond, std::span<const Bond>) override {
      current = dyn.configuration().occupancy(site);
    }
  };

  std::vector<double> site_avg(replicas);
  parallel_replicas(replicas, threads, [&](int r) {
    const std::uint64_t seed = derive_seed(402, seed_tag::kDynamics,
                                           static_cast<std::uint64_t>(r));
    Configuration cfg = Configuration::bernoulli(
        lat_obs, 0.5, derive_seed(seed, seed_tag::kInitialConfig));
    ExclusionDynamics dyn(std::move(cfg), wf_flat, flat, RateFamily::standard(0.0), seed);
    OccupationObserver occ;
    EventObserver* handles[] = {&occ};
    dyn.run(t_final, handles, SimulateOptions{});
    site_avg[static_cast<std::size_t>(r)] = occ.occupied_time / t_final;
  });
  const double z = z_mean(site_avg, 0.5);
  const bool stat_ok = std::abs(z) <= 3.0;

  return {2, "reversibility (detailed balance + stationarity)", db_ok && stat_ok,
          "max residual " + fmt(worst_db) + " on " + std::to_string(checked) +
              " bonds; site occupation z " + fmt(z) + " (|z|<=3)"};
}

// --- criterion 3: flat spectral closed form ----------------------------------

CriterionResult criterion_spectrum(int) {
  const int n = 64;
  const LatticeOperator op = assemble(
      WFunction::identity(1), sample_field(EnvironmentSpec::constant(1.0), 1, n));
  const EigenBasis basis = eigendecompose(op, 21);
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double expected =
        4.0 * n * n * std::pow(std::sin(kPi * (k / 2) / n), 2);
    const double got = basis.alpha[static_cast<std::size_t>(k - 1)];
    const double err = (expected == 0.0) ? std::abs(got)
                                         : std::abs(got - expected) / expected;
    worst = std::max(worst, err);
  }
  return {3, "flat-case spectrum matches 4N^2 sin^2(pi k / N)", worst <= 1e-8,
          "max rel err " + fmt(worst) + " for k <= 20 (tol 1e-8)"};
}

// --- criterion 4: homogenization oracles -------------------------------------

CriterionResult criterion_homogenization(int) {
  const WFunction wf = WFunction::identity(1);
  const ContinuumFn rhs = tf_cos(0, 1).fn;

  const EnvironmentSpec periodic = EnvironmentSpec::periodic({2}, {1.0, 3.0}, 3.0);
  const HomogenizeResult hp = homogenize(wf, periodic, 1.0, rhs, {64, 128, 256, 512});
  const double a_periodic = hp.a_eff.diag[0];
  const double err_periodic = std::abs(a_periodic - 1.5) / 1.5;

  const EnvironmentSpec iid = EnvironmentSpec::iid({1.0, 2.0}, {0.5, 0.5}, 2.0, 2024);
  const HomogenizeResult hi = homogenize(wf, iid, 1.0, rhs, {2048});
  const double a_iid = hi.a_eff.diag[0];
  const double err_iid = std::abs(a_iid - 4.0 / 3.0) / (4.0 / 3.0);

  const bool pass = err_periodic <= 0.01 && err_iid <= 0.02;
  return {4, "homogenized coefficient matches harmonic-mean oracle", pass,
          "periodic(1,3): a_eff " + fmt(a_periodic) + " vs 1.5 (err " + fmt(err_periodic) +
              ", tol 1%); iid{1,2}: a_eff " + fmt(a_iid) + " vs 4/3 (err " + fmt(err_iid) +
              ", tol 2%)"};
}

// --- criterion 5: convergence of energies ------------------------------------

CriterionResult criterion_energy_convergence(int) {
  const EnvironmentSpec periodic = EnvironmentSpec::periodic({2}, {1.0, 3.0}, 3.0);
  const EnergyReport report = energy_convergence(WFunction::identity(1), periodic, 1.0,
                                                 tf_cos(0, 1).fn, {64, 128, 256, 512});
  bool decreasing = true;
  for (std::size_t i = 1; i < report.l2_gap.size(); ++i) {
    if (report.l2_gap[i] >= report.l2_gap[i - 1]) decreasing = false;
    if (report.energy_gap[i] >= report.energy_gap[i - 1]) decreasing = false;
  }
  const bool final_ok = report.l2_gap.back() < 0.25 * report.l2_gap.front() &&
                        report.energy_gap.back() < 0.25 * report.energy_gap.front();
  std::ostringstream detail;
  detail << "l2 gaps";
  for (double g : report.l2_gap) detail << " " << fmt(g);
  detail << "; energy gaps";
  for (double g : report.energy_gap) detail << " " << fmt(g);
  return {5, "energy convergence over N = 64..512 (periodic environment)",
          decreasing && final_ok, detail.str()};
}

// --- criterion 6: static CLT --------------------------------------------------

CriterionResult criterion_static_clt(int threads) {
  const int n = 256;
  const int samples = 10000;
  const LatticePtr lat = make_lattice(1, n);
  const LatticeFunction g_cos = tf_cos(0, 1).restriction(lat);
  const LatticeFunction g_sin = tf_sin(0, 1).restriction(lat);
  double worst_z = 0.0;
  for (double rho : {0.3, 0.5}) {
    for (const auto* g : {&g_cos, &g_sin}) {
      const double expected = rho * (1.0 - rho) * inner_product(*g, *g);
      std::vector<double> ys(static_cast<std::size_t>(samples));
      parallel_replicas(samples, threads, [&](int s) {
        const Configuration cfg = Configuration::bernoulli(
            lat, rho,
            derive_seed(606, seed_tag::kInitialConfig,
                        static_cast<std::uint64_t>(s) * 4 +
                            (rho == 0.3 ? 0 : 1) * 2 + (g == &g_sin ? 1 : 0)));
        ys[static_cast<std::size_t>(s)] = field_value(cfg, *g, rho);
      });
      worst_z = std::max(worst_z, std::abs(z_variance(ys, expected)));
    }
  }
  return {6, "static CLT: Var Y_0(G) = chi(rho) int G^2", worst_z <= 3.0,
          "max |z| " + fmt(worst_z) + " over rho in {0.3,0.5}, G in {cos,sin} (|z|<=3)"};
}

// --- criterion 7: martingale and quadratic variation --------------------------

struct MartingaleStats {
  std::vector<double> m_final, comp_gap, qv_rate;
};

MartingaleStats martingale_replicas(int n, double rho, double b, double t_final,
                                    int replicas, std::uint64_t master_seed, int threads) {
  const LatticePtr lat = make_lattice(1, n);
  const WFunction wf = WFunction::identity(1);
  const EnvironmentField field = sample_field(EnvironmentSpec::constant(1.0), 1, n);
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);

  MartingaleStats stats;
  stats.m_final.resize(static_cast<std::size_t>(replicas));
  stats.comp_gap.resize(static_cast<std::size_t>(replicas));
  stats.qv_rate.resize(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, threads, [&](int r) {
    const std::uint64_t seed =
        derive_seed(master_seed, seed_tag::kDynamics, static_cast<std::uint64_t>(r));
    Configuration cfg = Configuration::bernoulli(
        lat, rho, derive_seed(seed, seed_tag::kInitialConfig));
    ExclusionDynamics dyn(std::move(cfg), wf, field, RateFamily::standard(b), seed);
    MartingaleObserver mart(g, rho);
    EventObserver* handles[] = {&mart};
    SimulateOptions opts;
    opts.sample_times = {t_final};
    dyn.run(t_final, handles, opts);
    const double m = mart.path().m.back();
    const double qv = mart.path().qv.back();
    stats.m_final[static_cast<std::size_t>(r)] = m;
    stats.comp_gap[static_cast<std::size_t>(r)] = m * m - qv;
    stats.qv_rate[static_cast<std::size_t>(r)] = qv / t_final;
  });
  return stats;
}

CriterionResult criterion_martingale(int threads) {
  const int n = 128;
  const double t_final = 0.05;
  const int replicas = 1000;
  const LatticePtr lat = make_lattice(1, n);
  const WFunction wf = WFunction::identity(1);
  const EnvironmentField field = sample_field(EnvironmentSpec::constant(1.0), 1, n);
  const LatticeFunction g = tf_cos(0, 1).restriction(lat);

  // independent quadrature oracle for the flat b = 0 case:
  // 2 chi phi' int (G')^2 dx with G = sqrt(2) cos(2 pi x), midpoint rule
  double grad_sq = 0.0;
  const int quad_points = 200000;
  for (int i = 0; i < quad_points; ++i) {
    const double x = (i + 0.5) / quad_points;
    const double gp = -2.0 * std::sqrt(2.0) * kPi * std::sin(2.0 * kPi * x);
    grad_sq += gp * gp;
  }
  grad_sq /= quad_points;
  const double oracle_rate = 2.0 * 0.25 * 1.0 * grad_sq;  // ~ 2 pi^2

  std::ostringstream detail;
  bool pass = true;
  for (double b : {0.0, 0.5}) {
    const MartingaleStats stats =
        martingale_replicas(n, 0.5, b, t_final, replicas, 7000 + (b > 0 ? 1 : 0), threads);
    const double expected_rate =
        qv_expectation(g, wf, field, 0.5, RateFamily::standard(b), 1.0);
    const double z_m = z_mean(stats.m_final, 0.0);
    const double z_comp = z_mean(stats.comp_gap, 0.0);
    const double z_qv = z_mean(stats.qv_rate, expected_rate);
    pass = pass && std::abs(z_m) <= 3.0 && std::abs(z_comp) <= 3.0 && std::abs(z_qv) <= 3.0;
    if (b == 0.0) {
      const double oracle_gap = std::abs(expected_rate - oracle_rate) / oracle_rate;
      pass = pass && oracle_gap <= 1e-3;
      detail << "b=0: qv_expectation " << fmt(expected_rate) << " vs quadrature oracle "
             << fmt(oracle_rate) << " (gap " << fmt(oracle_gap) << "); ";
    }
    detail << "b=" << fmt(b) << ": z_mean " << fmt(z_m) << ", z_comp " << fmt(z_comp)
           << ", z_qv " << fmt(z_qv) << "; ";
  }
  return {7, "martingale mean zero, compensator, QV rate", pass, detail.str()};
}

// --- criterion 8: Boltzmann-Gibbs decay ---------------------------------------

CriterionResult criterion_boltzmann_gibbs(int threads) {
  const double t_final = 0.05;
  const int replicas = 1000;
  const WFunction wf = WFunction::identity(1);
  const CylinderFunction f = CylinderFunction::h1(0);
  std::vector<int> n_list = {16, 32, 64, 128};
  std::vector<double> ez2;
  for (int n : n_list) {
    const LatticePtr lat = make_lattice(1, n);
    const EnvironmentField field = sample_field(EnvironmentSpec::constant(1.0), 1, n);
    const LatticeFunction g = tf_cos(0, 1).restriction(lat);
    std::vector<double> z2(static_cast<std::size_t>(replicas));
    parallel_replicas(replicas, threads, [&](int r) {
      const std::uint64_t seed = derive_seed(
          808, seed_tag::kDynamics,
          hash_combine(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)));
      Configuration cfg = Configuration::bernoulli(
          lat, 0.5, derive_seed(seed, seed_tag::kInitialConfig));
      ExclusionDynamics dyn(std::move(cfg), wf, field, RateFamily::standard(0.5), seed);
      BoltzmannGibbsObserver bg(g, f, 0.5);
      EventObserver* handles[] = {&bg};
      dyn.run(t_final, handles, SimulateOptions{});
      z2[static_cast<std::size_t>(r)] = bg.integral() * bg.integral();
    });
    ez2.push_back(compute_moments(z2).mean);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < ez2.size(); ++i)
    if (ez2[i] >= ez2[i - 1]) decreasing = false;
  const bool halved = ez2.back() < 0.5 * ez2.front();
  std::ostringstream detail;
  detail << "E[Z^2]:";
  for (double v : ez2) detail << " " << fmt(v);
  detail << " (need decreasing, last < half of first)";
  return {8, "Boltzmann-Gibbs statistic decays over N = 16..128", decreasing && halved,
          detail.str()};
}

// --- criterion 9: equivalence of ensembles ------------------------------------

CriterionResult criterion_equivalence_of_ensembles(int) {
  const CylinderFunction f = CylinderFunction::h1(0);
  std::vector<double> scaled;
  for (int n : {8, 16, 32}) {
    const double gap = equivalence_of_ensembles_gap(f, 1, n);
    scaled.push_back(gap * n);
  }
  bool bounded = true;
  for (double v : scaled) bounded = bounded && v <= 0.3;
  bool stable = true;
  for (std::size_t i = 1; i < scaled.size(); ++i)
    if (std::abs(scaled[i] - scaled[i - 1]) > 0.2 * scaled[i - 1]) stable = false;
  std::ostringstream detail;
  detail << "gap*N:";
  for (double v : scaled) detail << " " << fmt(v);
  detail << " (bound 0.3, stable within 20%)";
  return {9, "equivalence of ensembles: gap * N^d bounded", bounded && stable, detail.str()};
}

// --- criterion 10: weak-convergence surrogate ----------------------------------

CriterionResult criterion_weak_convergence(int threads) {
  const int n = 128;
  const int replicas = 1000;
  const double rho = 0.5;
  const std::vector<double> times = {0.0, 0.01, 0.05};
  const WFunction wf = WFunction::identity(1);

  const HomogenizeResult hom = homogenize(
      wf, EnvironmentSpec::constant(1.0), 1.0, tf_cos(0, 1).fn, {64, 128});
  OUParams params = OUParams::build(rho, 0.0, hom.a_eff, wf, 1, 512, 32);

  const std::vector<std::string> labels = {"cos1"};
  std::vector<LatticeFunction> g_ref = {tf_cos(0, 1).restriction(params.basis.lat)};

  // OU self-comparison first: the autocovariance formula is cross-validated
  // against the simulator before being used as the oracle
  std::vector<FieldSeries> ou_series(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, threads, [&](int r) {
    ou_series[static_cast<std::size_t>(r)] = ou_simulate(
        params, g_ref, labels, times,
        derive_seed(1010, seed_tag::kOuLimit, static_cast<std::uint64_t>(r)));
  });
  const CompareReport self_report = compare(ou_series, params, g_ref);
  const bool self_ok = self_report.all_within(3.0);

  // particle system replicas
  const LatticePtr lat = make_lattice(1, n);
  const EnvironmentField field = sample_field(EnvironmentSpec::constant(1.0), 1, n);
  const LatticeFunction g_lattice = tf_cos(0, 1).restriction(lat);
  std::vector<FieldSeries> particle(static_cast<std::size_t>(replicas));
  parallel_replicas(replicas, threads, [&](int r) {
    const std::uint64_t seed =
        derive_seed(1011, seed_tag::kDynamics, static_cast<std::uint64_t>(r));
    Configuration cfg = Configuration::bernoulli(
        lat, rho, derive_seed(seed, seed_tag::kInitialConfig));
    ExclusionDynamics dyn(std::move(cfg), wf, field, RateFamily::standard(0.0), seed);
    FieldObserver obs({g_lattice}, labels, rho);
    EventObserver* handles[] = {&obs};
    SimulateOptions opts;
    opts.sample_times = times;
    dyn.run(times.back(), handles, opts);
    auto series = obs.take_series();
    series.b = 0.0;
    series.replica = static_cast<std::uint64_t>(r);
    particle[static_cast<std::size_t>(r)] = std::move(series);
  });
  const CompareReport report = compare(particle, params, g_ref);
  const bool particle_ok = report.all_within(3.0);

  // negative control: deliberately wrong phi' (b mismatched) must be detected
  // on the lagged autocovariance; the (rho, b) tag is kept so that compare()
  // accepts the series and the discrepancy shows up statistically
  OUParams wrong = OUParams::build(rho, 1.0, hom.a_eff, wf, 1, 512, 32);
  wrong.b = 0.0;
  const CompareReport control = compare(particle, wrong, g_ref);
  const double control_z = control.max_abs_z("autocovariance");
  const bool control_ok = control_z > 3.0;

  std::ostringstream detail;
  detail << "OU self max|z| " << fmt(self_report.max_abs_z()) << "; particle max|z| "
         << fmt(report.max_abs_z()) << " (<=3); wrong-phi' autocov |z| " << fmt(control_z)
         << " (>3)";
  return {10, "fluctuation field matches OU limit (plus negative control)",
          self_ok && particle_ok && control_ok, detail.str()};
}

// --- criterion 11: corrected-field equivalence ----------------------------------

CriterionResult criterion_corrected_field(int threads) {
  const double lambda = 1.0;
  const double rho = 0.5;
  const double t_final = 0.01;
  const int replicas = 300;
  const WFunction wf = WFunction::identity(1);
  const EnvironmentSpec periodic = EnvironmentSpec::periodic({2}, {1.0, 3.0}, 3.0);
  const HomogenizeResult hom =
      homogenize(wf, periodic, lambda, tf_cos(0, 1).fn, {64, 128, 256});

  std::vector<double> mean_sq;
  std::vector<double> bounds;
  for (int n : {64, 128, 256}) {
    const EnvironmentField field = sample_field(periodic, 1, n);
    const LatticeOperator op = assemble(wf, field);
    const LatticePtr lat = op.lattice_ptr();
    const LatticeFunction g = tf_cos(0, 1).restriction(lat);
    const LatticeFunction g_corr = corrected_test_function(g, lambda, op, hom.a_eff);
    LatticeFunction diff(lat);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = g[i] - g_corr[i];
    bounds.push_back(rho * (1.0 - rho) * inner_product(diff, diff));

    std::vector<double> sq(static_cast<std::size_t>(replicas));
    parallel_replicas(replicas, threads, [&](int r) {
      const std::uint64_t seed = derive_seed(
          1111, seed_tag::kDynamics,
          hash_combine(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)));
      Configuration cfg = Configuration::bernoulli(
          lat, rho, derive_seed(seed, seed_tag::kInitialConfig));
      ExclusionDynamics dyn(std::move(cfg), wf, field, RateFamily::standard(0.0), seed);
      dyn.run(t_final, {}, SimulateOptions{});
      const double dy = field_value(dyn.configuration(), diff, rho);
      sq[static_cast<std::size_t>(r)] = dy * dy;
    });
    mean_sq.push_back(compute_moments(sq).mean);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < mean_sq.size(); ++i)
    if (mean_sq[i] >= mean_sq[i - 1]) decreasing = false;
  std::ostringstream detail;
  detail << "E[(Y - Y^lambda)^2]:";
  for (double v : mean_sq) detail << " " << fmt(v);
  detail << "; chi ||G - G_N^lambda||^2 bounds:";
  for (double v : bounds) detail << " " << fmt(v);
  return {11, "corrected and uncorrected fields agree as N grows", decreasing,
          detail.str()};
}

using CriterionFn = CriterionResult (*)(int);
const CriterionFn kCriteria[] = {
    criterion_operator_identity, criterion_reversibility,
    criterion_spectrum,          criterion_homogenization,
    criterion_energy_convergence, criterion_static_clt,
    criterion_martingale,        criterion_boltzmann_gibbs,
    criterion_equivalence_of_ensembles, criterion_weak_convergence,
    criterion_corrected_field,
};

}  // namespace

int acceptance_criterion_count() { return static_cast<int>(std::size(kCriteria)); }

CriterionResult run_acceptance_criterion(int index, int threads) {
  if (index < 1 || index > acceptance_criterion_count())
    throw std::invalid_argument("acceptance criterion index out of range");
  return kCriteria[index - 1](threads);
}

std::vector<CriterionResult> run_acceptance_suite(int threads, std::FILE* stream) {
  std::vector<CriterionResult> results;
  for (int k = 1; k <= acceptance_criterion_count(); ++k) {
    CriterionResult r = run_acceptance_criterion(k, threads);
    if (stream) {
      std::fprintf(stream, "[%s] criterion %d: %s -- %s\n", r.pass ? "PASS" : "FAIL",
                   r.index, r.name.c_str(), r.detail.c_str());
      std::fflush(stream);
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace fluctlab
