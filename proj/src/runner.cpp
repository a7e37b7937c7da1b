#include "fluctlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fluctlab/acceptance.hpp"
#include "fluctlab/csv.hpp"
#include "fluctlab/fluctuations.hpp"
#include "fluctlab/homogenize.hpp"
#include "fluctlab/oulimit.hpp"
#include "fluctlab/stats.hpp"

namespace fluctlab {

namespace {

namespace fs = std::filesystem;

std::string hex64(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& subcommand,
                    const std::string& out_dir) {
  std::ofstream out(fs::path(out_dir) / "manifest.txt", std::ios::binary);
  out << "tool = fluctlab " << kVersion << "\n";
  out << "subcommand = " << subcommand << "\n";
  out << "config_hash = " << hex64(cfg.config_hash()) << "\n";
  out << "seed = " << cfg.seed << "\n";
}

std::vector<double> resolved_sample_times(const ExperimentConfig& cfg) {
  if (!cfg.sample_times.empty()) return cfg.sample_times;
  return {cfg.t_final};
}

CylinderFunction bg_function(const std::vector<std::string>& g_set) {
  // the bg target rides in config as a pseudo test-function label "h11"/"h21"
  for (const auto& label : g_set) {
    if (label == "h11") return CylinderFunction::h1(0);
    if (label == "h21") return CylinderFunction::h2(0);
  }
  return CylinderFunction::h1(0);
}

int run_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  const EnvironmentField field = sample_field(cfg.env, cfg.d, cfg.n);
  const WFunction wf = cfg.w_function();
  struct Row {
    std::uint64_t events = 0;
    double final_density = 0.0;
    double wall_time = 0.0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(cfg.replicas));
  parallel_replicas(cfg.replicas, cfg.effective_threads(), [&](int r) {
    const auto t0 = std::chrono::steady_clock::now();
    SimulationSetup setup{wf, field, cfg.rate_family(), cfg.rho, cfg.t_final};
    SimulateOptions opts;
    opts.record_events = cfg.event_log;
    const std::uint64_t replica_seed =
        derive_seed(cfg.seed, seed_tag::kDynamics, static_cast<std::uint64_t>(r));
    const LatticePtr lat = make_lattice(cfg.d, cfg.n);
    Configuration start = Configuration::bernoulli(
        lat, cfg.rho, derive_seed(replica_seed, seed_tag::kInitialConfig));
    ExclusionDynamics dyn(std::move(start), wf, field, cfg.rate_family(), replica_seed);
    Trajectory traj;
    const SimulateStats stats =
        dyn.run(cfg.t_final, {}, opts, cfg.event_log ? &traj : nullptr);
    auto& row = rows[static_cast<std::size_t>(r)];
    row.events = stats.events;
    row.final_density = dyn.configuration().density();
    if (cfg.timing)
      row.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cfg.event_log) {
      std::ofstream bin(fs::path(out_dir) / ("events_" + std::to_string(r) + ".bin"),
                        std::ios::binary);
      for (const Event& e : traj.events) {
        bin.write(reinterpret_cast<const char*>(&e.time), sizeof(double));
        const std::uint64_t packed =
            (static_cast<std::uint64_t>(e.axis) << 56) | e.site;
        bin.write(reinterpret_cast<const char*>(&packed), sizeof(std::uint64_t));
      }
    }
  });
  CsvWriter csv((fs::path(out_dir) / "summary.csv").string(),
                {"replica", "events", "final_density", "wall_time"});
  for (int r = 0; r < cfg.replicas; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    csv.row(r, row.events, row.final_density, row.wall_time);
  }
  return 0;
}

int run_spectrum(const ExperimentConfig& cfg, const std::string& out_dir) {
  const EnvironmentField field = sample_field(cfg.env, cfg.d, cfg.n);
  const LatticeOperator op = assemble(cfg.w_function(), field);
  const EigenBasis basis = eigendecompose(op, cfg.ou_k);
  CsvWriter csv((fs::path(out_dir) / "spectrum.csv").string(), {"N", "k", "alpha_k"});
  for (int k = 0; k < basis.modes(); ++k)
    csv.row(cfg.n, k + 1, basis.alpha[static_cast<std::size_t>(k)]);
  return 0;
}

ContinuumFn first_test_function(const ExperimentConfig& cfg) {
  const auto fns = test_function_set(std::span(cfg.g_set.data(), 1));
  return fns.front().fn;
}

int run_homogenize(const ExperimentConfig& cfg, const std::string& out_dir) {
  const HomogenizeResult hom =
      homogenize(cfg.w_function(), cfg.env, cfg.lambda, first_test_function(cfg), cfg.n_list);
  CsvWriter csv((fs::path(out_dir) / "homogenize.csv").string(),
                {"N", "axis", "a_eff", "fit_residual"});
  for (std::size_t i = 0; i < hom.n_list.size(); ++i)
    for (int j = 0; j < cfg.d; ++j)
      csv.row(hom.n_list[i], j + 1, hom.per_n[i][static_cast<std::size_t>(j)],
              hom.fit_residual[i]);
  return 0;
}

int run_energy(const ExperimentConfig& cfg, const std::string& out_dir) {
  const EnergyReport report = energy_convergence(cfg.w_function(), cfg.env, cfg.lambda,
                                                 first_test_function(cfg), cfg.n_list);
  CsvWriter csv((fs::path(out_dir) / "energy.csv").string(),
                {"N", "axis", "a_eff", "l2_gap", "energy_gap"});
  for (std::size_t i = 0; i < report.n_list.size(); ++i)
    for (int j = 0; j < cfg.d; ++j)
      csv.row(report.n_list[i], j + 1, report.a_eff[static_cast<std::size_t>(j)],
              report.l2_gap[i], report.energy_gap[i]);
  return 0;
}

struct FluctReplicaResult {
  FieldSeries series;
  std::vector<MartingalePath> paths;  // one per test function
};

std::vector<FluctReplicaResult> run_fluct_replicas(const ExperimentConfig& cfg) {
  const EnvironmentField field = sample_field(cfg.env, cfg.d, cfg.n);
  const WFunction wf = cfg.w_function();
  const LatticePtr lat = make_lattice(cfg.d, cfg.n);
  const auto tfs = test_function_set(cfg.g_set);
  std::vector<LatticeFunction> gs;
  for (const auto& tf : tfs) gs.push_back(tf.restriction(lat));
  const std::vector<double> times = resolved_sample_times(cfg);

  std::vector<FluctReplicaResult> results(static_cast<std::size_t>(cfg.replicas));
  parallel_replicas(cfg.replicas, cfg.effective_threads(), [&](int r) {
    const std::uint64_t replica_seed =
        derive_seed(cfg.seed, seed_tag::kDynamics, static_cast<std::uint64_t>(r));
    Configuration start = Configuration::bernoulli(
        lat, cfg.rho, derive_seed(replica_seed, seed_tag::kInitialConfig));
    ExclusionDynamics dyn(std::move(start), wf, field, cfg.rate_family(), replica_seed);

    FieldObserver field_obs(gs, cfg.g_set, cfg.rho);
    std::vector<MartingaleObserver> mart;
    mart.reserve(gs.size());
    for (const auto& g : gs) mart.emplace_back(g, cfg.rho);
    std::vector<EventObserver*> handles{&field_obs};
    for (auto& m : mart) handles.push_back(&m);

    SimulateOptions opts;
    opts.sample_times = times;
    dyn.run(cfg.t_final, handles, opts);

    auto& res = results[static_cast<std::size_t>(r)];
    res.series = field_obs.take_series();
    res.series.b = cfg.b;
    res.series.replica = static_cast<std::uint64_t>(r);
    for (auto& m : mart) res.paths.push_back(m.path());
  });
  return results;
}

int run_fluct(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto results = run_fluct_replicas(cfg);
  CsvWriter csv((fs::path(out_dir) / "fluct.csv").string(),
                {"replica", "t", "G_label", "Y", "M", "QV"});
  for (int r = 0; r < cfg.replicas; ++r) {
    const auto& res = results[static_cast<std::size_t>(r)];
    for (std::size_t gi = 0; gi < cfg.g_set.size(); ++gi) {
      for (std::size_t ti = 0; ti < res.series.times.size(); ++ti) {
        csv.row(r, res.series.times[ti], cfg.g_set[gi], res.series.values[gi][ti],
                res.paths[gi].m[ti], res.paths[gi].qv[ti]);
      }
    }
  }
  return 0;
}

int run_qv_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  const EnvironmentField field = sample_field(cfg.env, cfg.d, cfg.n);
  const WFunction wf = cfg.w_function();
  const LatticePtr lat = make_lattice(cfg.d, cfg.n);
  const auto tfs = test_function_set(std::span(cfg.g_set.data(), 1));
  const LatticeFunction g = tfs.front().restriction(lat);

  std::vector<double> qv_rate(static_cast<std::size_t>(cfg.replicas));
  parallel_replicas(cfg.replicas, cfg.effective_threads(), [&](int r) {
    const std::uint64_t replica_seed =
        derive_seed(cfg.seed, seed_tag::kDynamics, static_cast<std::uint64_t>(r));
    Configuration start = Configuration::bernoulli(
        lat, cfg.rho, derive_seed(replica_seed, seed_tag::kInitialConfig));
    ExclusionDynamics dyn(std::move(start), wf, field, cfg.rate_family(), replica_seed);
    MartingaleObserver mart(g, cfg.rho);
    EventObserver* handles[] = {&mart};
    SimulateOptions opts;
    opts.sample_times = {cfg.t_final};
    dyn.run(cfg.t_final, handles, opts);
    qv_rate[static_cast<std::size_t>(r)] = mart.path().qv.back() / cfg.t_final;
  });

  const Moments m = compute_moments(qv_rate);
  const double expected =
      qv_expectation(g, wf, field, cfg.rho, cfg.rate_family(), 1.0);
  CsvWriter csv((fs::path(out_dir) / "qv_check.csv").string(),
                {"N", "statistic", "stderr", "expected", "z"});
  csv.row(cfg.n, m.mean, m.se_mean(), expected, (m.mean - expected) / m.se_mean());
  return 0;
}

int run_bg_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  const WFunction wf = cfg.w_function();
  const CylinderFunction f = bg_function(cfg.g_set);
  CsvWriter csv((fs::path(out_dir) / "bg_check.csv").string(),
                {"N", "statistic", "stderr"});
  for (int n : cfg.n_list) {
    const EnvironmentField field = sample_field(cfg.env, cfg.d, n);
    const LatticePtr lat = make_lattice(cfg.d, n);
    const LatticeFunction g = tf_cos(0, 1).restriction(lat);
    std::vector<double> z2(static_cast<std::size_t>(cfg.replicas));
    parallel_replicas(cfg.replicas, cfg.effective_threads(), [&](int r) {
      const std::uint64_t replica_seed =
          derive_seed(cfg.seed, seed_tag::kDynamics,
                      hash_combine(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)));
      Configuration start = Configuration::bernoulli(
          lat, cfg.rho, derive_seed(replica_seed, seed_tag::kInitialConfig));
      ExclusionDynamics dyn(std::move(start), wf, field, cfg.rate_family(), replica_seed);
      BoltzmannGibbsObserver bg(g, f, cfg.rho);
      EventObserver* handles[] = {&bg};
      SimulateOptions opts;
      dyn.run(cfg.t_final, handles, opts);
      const double z = bg.integral();
      z2[static_cast<std::size_t>(r)] = z * z;
    });
    const Moments m = compute_moments(z2);
    csv.row(n, m.mean, m.se_mean());
  }
  return 0;
}

OUParams build_ou_params(const ExperimentConfig& cfg) {
  const HomogenizeResult hom =
      homogenize(cfg.w_function(), cfg.env, cfg.lambda, first_test_function(cfg), cfg.n_list);
  return OUParams::build(cfg.rho, cfg.b, hom.a_eff, cfg.w_function(), cfg.d, cfg.ou_n_ref,
                         cfg.ou_k);
}

int run_ou_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  const OUParams params = build_ou_params(cfg);
  const LatticePtr ref = params.basis.lat;
  const auto tfs = test_function_set(cfg.g_set);
  std::vector<LatticeFunction> gs;
  for (const auto& tf : tfs) gs.push_back(tf.restriction(ref));
  const std::vector<double> times = resolved_sample_times(cfg);

  std::vector<FieldSeries> series(static_cast<std::size_t>(cfg.replicas));
  parallel_replicas(cfg.replicas, cfg.effective_threads(), [&](int r) {
    series[static_cast<std::size_t>(r)] =
        ou_simulate(params, gs, cfg.g_set, times,
                    derive_seed(cfg.seed, seed_tag::kOuLimit, static_cast<std::uint64_t>(r)));
  });
  CsvWriter csv((fs::path(out_dir) / "ou.csv").string(), {"replica", "t", "G_label", "Y"});
  for (int r = 0; r < cfg.replicas; ++r) {
    const auto& s = series[static_cast<std::size_t>(r)];
    for (std::size_t gi = 0; gi < cfg.g_set.size(); ++gi)
      for (std::size_t ti = 0; ti < s.times.size(); ++ti)
        csv.row(r, s.times[ti], cfg.g_set[gi], s.values[gi][ti]);
  }
  return 0;
}

int run_ou_compare(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.empirical_path.empty())
    throw ConfigError("empirical", "ou-compare needs an empirical CSV path");
  const auto rows = read_csv(cfg.empirical_path);
  if (rows.size() < 2) throw std::runtime_error("empirical CSV has no data rows");

  // group (replica, t, G_label, Y) rows into per-replica series
  std::map<std::uint64_t, FieldSeries> by_replica;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() < 4) throw std::runtime_error("empirical CSV: short row");
    const std::uint64_t rep = std::stoull(row[0]);
    const double t = std::stod(row[1]);
    const std::string& label = row[2];
    const double y = std::stod(row[3]);
    auto& s = by_replica[rep];
    s.rho = cfg.rho;
    s.b = cfg.b;
    s.replica = rep;
    auto li = std::find(s.labels.begin(), s.labels.end(), label);
    std::size_t gi;
    if (li == s.labels.end()) {
      s.labels.push_back(label);
      s.values.emplace_back();
      gi = s.labels.size() - 1;
    } else {
      gi = static_cast<std::size_t>(li - s.labels.begin());
    }
    if (gi == 0) s.times.push_back(t);
    s.values[gi].push_back(y);
  }
  std::vector<FieldSeries> series;
  series.reserve(by_replica.size());
  for (auto& [rep, s] : by_replica) series.push_back(std::move(s));

  const OUParams params = build_ou_params(cfg);
  const auto tfs = test_function_set(series.front().labels);
  std::vector<LatticeFunction> gs;
  for (const auto& tf : tfs) gs.push_back(tf.restriction(params.basis.lat));

  const CompareReport report = compare(series, params, gs);
  CsvWriter csv((fs::path(out_dir) / "ou_compare.csv").string(),
                {"G_label", "t", "lag", "stat", "value", "z", "expected"});
  for (const auto& r : report.rows)
    csv.row(r.label, r.t, r.lag, r.stat, r.value, r.z, r.expected);
  return report.all_within(3.0) ? 0 : 1;
}

int run_accept(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto results = run_acceptance_suite(cfg.effective_threads(), stdout);
  CsvWriter csv((fs::path(out_dir) / "accept.csv").string(),
                {"criterion", "name", "pass", "detail"});
  int failures = 0;
  for (const auto& r : results) {
    csv.row(r.index, r.name, r.pass ? 1 : 0, r.detail);
    if (!r.pass) ++failures;
  }
  return failures;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "simulate", "spectrum", "homogenize", "energy",      "fluct",
      "qv-check", "bg-check", "ou-simulate", "ou-compare", "accept"};
  return names;
}

int run_subcommand(const ExperimentConfig& cfg, const std::string& subcommand,
                   const std::string& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  write_manifest(cfg, subcommand, out_dir);
  if (subcommand == "simulate") return run_simulate(cfg, out_dir);
  if (subcommand == "spectrum") return run_spectrum(cfg, out_dir);
  if (subcommand == "homogenize") return run_homogenize(cfg, out_dir);
  if (subcommand == "energy") return run_energy(cfg, out_dir);
  if (subcommand == "fluct") return run_fluct(cfg, out_dir);
  if (subcommand == "qv-check") return run_qv_check(cfg, out_dir);
  if (subcommand == "bg-check") return run_bg_check(cfg, out_dir);
  if (subcommand == "ou-simulate") return run_ou_simulate(cfg, out_dir);
  if (subcommand == "ou-compare") return run_ou_compare(cfg, out_dir);
  if (subcommand == "accept") return run_accept(cfg, out_dir);
  throw std::invalid_argument("unknown subcommand: " + subcommand);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    cells.push_back(cur);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace fluctlab
