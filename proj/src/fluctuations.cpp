#include "fluctlab/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluctlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr std::uint64_t kRebuildInterval = 1u << 16;
}  // namespace

double TestFunction::max_w_gradient(const WFunction& wf, const LatticePtr& lat) const {
  const LatticeFunction g = restriction(lat);
  double worst = 0.0;
  for (int j = 0; j < lat->dim(); ++j) {
    const auto dw = wf.axis(j).increments(lat->n());
    for (std::size_t i = 0; i < lat->size(); ++i) {
      const double grad =
          (g[lat->up(j, i)] - g[i]) / dw[static_cast<std::size_t>(lat->coord(i, j))];
      worst = std::max(worst, std::abs(grad));
    }
  }
  return worst;
}

TestFunction tf_constant(double value) {
  return {"const", [value](std::span<const double>) { return value; }};
}

TestFunction tf_cos(int axis, int freq) {
  return {"cos" + std::to_string(freq) + (axis ? "@" + std::to_string(axis) : ""),
          [axis, freq](std::span<const double> u) {
            return kSqrt2 * std::cos(2.0 * kPi * freq * u[axis]);
          }};
}

TestFunction tf_sin(int axis, int freq) {
  return {"sin" + std::to_string(freq) + (axis ? "@" + std::to_string(axis) : ""),
          [axis, freq](std::span<const double> u) {
            return kSqrt2 * std::sin(2.0 * kPi * freq * u[axis]);
          }};
}

std::vector<TestFunction> test_function_set(std::span<const std::string> labels) {
  std::vector<TestFunction> out;
  for (const auto& label : labels) {
    if (label == "const") {
      out.push_back(tf_constant());
    } else if (label.rfind("cos", 0) == 0) {
      out.push_back(tf_cos(0, std::stoi(label.substr(3))));
    } else if (label.rfind("sin", 0) == 0) {
      out.push_back(tf_sin(0, std::stoi(label.substr(3))));
    } else {
      throw std::invalid_argument("unknown test function label: " + label);
    }
  }
  return out;
}

double field_value(const Configuration& cfg, const LatticeFunction& g, double rho) {
  const std::size_t size = cfg.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < size; ++i) acc += g[i] * (cfg.occupancy(i) - rho);
  return acc / std::sqrt(static_cast<double>(size));
}

LatticeFunction corrected_test_function(const LatticeFunction& g, double lambda,
                                        const LatticeOperator& op,
                                        const HomogenizedMatrix& a_eff) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("corrected_test_function: lambda must be > 0");
  const LatticeOperator limit_op = assemble(
      op.w(), make_constant_field(op.dim(), op.n(), a_eff.diag));
  const LatticeFunction lg = limit_op.apply(g);
  LatticeFunction rhs(op.lattice_ptr());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = lambda * g[i] - lg[i];
  return solve_resolvent(op, lambda, rhs);
}

double qv_expectation(const LatticeFunction& g, const WFunction& wf,
                      const EnvironmentField& field, double rho,
                      const RateFamily& family, double t) {
  const double chi = rho * (1.0 - rho);
  const double phip = family.phi_prime(rho);
  const LatticeOperator op = assemble(wf, field);
  return t * 2.0 * chi * phip * op.w_gradient_energy(g);
}

// --- FieldObserver ----------------------------------------------------------

FieldObserver::FieldObserver(std::vector<LatticeFunction> g, std::vector<std::string> labels,
                             double rho)
    : g_(std::move(g)), labels_(std::move(labels)), rho_(rho) {
  series_.labels = labels_;
  series_.rho = rho;
  series_.values.resize(g_.size());
}

void FieldObserver::at_sample(double t, const ExclusionDynamics& dyn) {
  series_.times.push_back(t);
  for (std::size_t k = 0; k < g_.size(); ++k)
    series_.values[k].push_back(field_value(dyn.configuration(), g_[k], rho_));
}

FieldSeries FieldObserver::take_series() { return std::move(series_); }

// --- MartingaleObserver -----------------------------------------------------

MartingaleObserver::MartingaleObserver(LatticeFunction g, double rho)
    : g_(std::move(g)), rho_(rho) {}

double MartingaleObserver::bond_dy(const ExclusionDynamics& dyn, Bond b) const {
  const Lattice& lat = dyn.lattice();
  const std::size_t up = lat.up(b.axis, b.site);
  const Configuration& cfg = dyn.configuration();
  return scale_ * (cfg.occupancy(up) - cfg.occupancy(b.site)) * (g_[b.site] - g_[up]);
}

void MartingaleObserver::rebuild_sums(const ExclusionDynamics& dyn) {
  drift_sum_ = 0.0;
  qv_sum_ = 0.0;
  const Lattice& lat = dyn.lattice();
  for (int j = 0; j < lat.dim(); ++j) {
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const Bond b{i, j};
      const double r = dyn.bond_rate(b);
      if (r == 0.0) continue;
      const double dy = bond_dy(dyn, b);
      drift_sum_ += r * dy;
      qv_sum_ += r * dy * dy;
    }
  }
}

void MartingaleObserver::attach(const ExclusionDynamics& dyn) {
  scale_ = 1.0 / std::sqrt(static_cast<double>(dyn.lattice().size()));
  y0_ = field_value(dyn.configuration(), g_, rho_);
  y_ = y0_;
  drift_integral_ = 0.0;
  qv_integral_ = 0.0;
  t_last_ = dyn.time();
  rebuild_sums(dyn);
}

void MartingaleObserver::advance_to(double t) {
  const double dt = t - t_last_;
  if (dt > 0.0) {
    drift_integral_ += drift_sum_ * dt;
    qv_integral_ += qv_sum_ * dt;
    t_last_ = t;
  }
}

void MartingaleObserver::before_exchange(const ExclusionDynamics& dyn, Bond b,
                                         std::span<const Bond> affected) {
  // realized jump of Y at this event
  y_ += bond_dy(dyn, b);
  // retire the old contributions of every bond whose rate or dY changes
  for (Bond a : affected) {
    const double r = dyn.bond_rate(a);
    if (r == 0.0) continue;
    const double dy = bond_dy(dyn, a);
    drift_sum_ -= r * dy;
    qv_sum_ -= r * dy * dy;
  }
}

void MartingaleObserver::after_exchange(const ExclusionDynamics& dyn, Bond,
                                        std::span<const Bond> affected) {
  for (Bond a : affected) {
    const double r = dyn.bond_rate(a);
    if (r == 0.0) continue;
    const double dy = bond_dy(dyn, a);
    drift_sum_ += r * dy;
    qv_sum_ += r * dy * dy;
  }
  if (++updates_ % kRebuildInterval == 0) rebuild_sums(dyn);
}

void MartingaleObserver::at_sample(double t, const ExclusionDynamics& dyn) {
  rebuild_sums(dyn);  // drop incremental roundoff at every recorded point
  path_.times.push_back(t);
  path_.y.push_back(y_);
  path_.m.push_back(current_m());
  path_.qv.push_back(qv_integral_);
}

MartingalePath martingale_path(const Trajectory& traj, const WFunction& wf,
                               const EnvironmentField& field, const RateFamily& family,
                               const LatticeFunction& g, double rho,
                               std::span<const double> sample_times) {
  ExclusionDynamics dyn(traj.initial, wf, field, family, /*seed=*/0);
  MartingaleObserver mart(g, rho);
  EventObserver* obs[] = {&mart};
  SimulateOptions opts;
  opts.sample_times.assign(sample_times.begin(), sample_times.end());
  dyn.replay(traj, obs, opts);
  return mart.path();
}

// --- Boltzmann-Gibbs --------------------------------------------------------

double CylinderFunction::eval(const Configuration& cfg, std::size_t x) const {
  const Lattice& lat = cfg.lattice();
  switch (kind) {
    case Kind::kSite:
      return cfg.occupancy(x);
    case Kind::kPairAdjacent:
      return cfg.occupancy(x) * cfg.occupancy(lat.up(axis, x));
    case Kind::kPairStraddle:
      return cfg.occupancy(lat.down(axis, x)) * cfg.occupancy(lat.up(axis, x));
  }
  return 0.0;
}

BoltzmannGibbsObserver::BoltzmannGibbsObserver(LatticeFunction weights, CylinderFunction f,
                                               double rho)
    : weights_(std::move(weights)), f_(f), rho_(rho) {}

double BoltzmannGibbsObserver::term(const Configuration& cfg, std::size_t x) const {
  const double v = f_.eval(cfg, x) - f_.psi(rho_) -
                   f_.dpsi(rho_) * (cfg.occupancy(x) - rho_);
  return weights_[x] * v;
}

void BoltzmannGibbsObserver::rebuild_sum(const ExclusionDynamics& dyn) {
  sum_ = 0.0;
  const Configuration& cfg = dyn.configuration();
  for (std::size_t x = 0; x < cfg.size(); ++x) sum_ += term(cfg, x);
}

void BoltzmannGibbsObserver::attach(const ExclusionDynamics& dyn) {
  scale_ = 1.0 / std::sqrt(static_cast<double>(dyn.lattice().size()));
  t_last_ = dyn.time();
  integral_ = 0.0;
  rebuild_sum(dyn);
}

void BoltzmannGibbsObserver::advance_to(double t) {
  const double dt = t - t_last_;
  if (dt > 0.0) {
    integral_ += scale_ * sum_ * dt;
    t_last_ = t;
  }
}

void BoltzmannGibbsObserver::collect_sites(const ExclusionDynamics& dyn, Bond b) {
  sites_.clear();
  const Lattice& lat = dyn.lattice();
  const std::size_t flipped[2] = {b.site, lat.up(b.axis, b.site)};
  for (std::size_t s : flipped) {
    sites_.push_back(s);  // linear compensator (and kSite support)
    switch (f_.kind) {
      case CylinderFunction::Kind::kSite:
        break;
      case CylinderFunction::Kind::kPairAdjacent:
        sites_.push_back(lat.down(f_.axis, s));
        break;
      case CylinderFunction::Kind::kPairStraddle:
        sites_.push_back(lat.down(f_.axis, s));
        sites_.push_back(lat.up(f_.axis, s));
        break;
    }
  }
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

void BoltzmannGibbsObserver::before_exchange(const ExclusionDynamics& dyn, Bond b,
                                             std::span<const Bond>) {
  collect_sites(dyn, b);
  const Configuration& cfg = dyn.configuration();
  for (std::size_t x : sites_) sum_ -= term(cfg, x);
}

void BoltzmannGibbsObserver::after_exchange(const ExclusionDynamics& dyn, Bond,
                                            std::span<const Bond>) {
  const Configuration& cfg = dyn.configuration();
  for (std::size_t x : sites_) sum_ += term(cfg, x);
}

void BoltzmannGibbsObserver::at_sample(double, const ExclusionDynamics& dyn) {
  rebuild_sum(dyn);
}

double bg_statistic(const Trajectory& traj, const WFunction& wf,
                    const EnvironmentField& field, const RateFamily& family,
                    const LatticeFunction& g, const CylinderFunction& f, double rho,
                    double t) {
  ExclusionDynamics dyn(traj.initial, wf, field, family, /*seed=*/0);
  BoltzmannGibbsObserver bg(g, f, rho);
  EventObserver* obs[] = {&bg};
  SimulateOptions opts;
  Trajectory clipped = traj;
  clipped.t_final = t;
  dyn.replay(clipped, obs, opts);
  return bg.integral();
}

double replacement_gap_statistic(const Trajectory& traj, const WFunction& wf,
                                 const EnvironmentField& field, const RateFamily& family,
                                 const LatticeFunction& g, double rho, double t) {
  if (family.is_extended())
    throw std::invalid_argument("replacement gap: base rate family only");
  const LatticeOperator op = assemble(wf, field);
  const Lattice& lat = op.lattice();
  const int d = lat.dim();

  ExclusionDynamics dyn(traj.initial, wf, field, family, /*seed=*/0);
  std::vector<BoltzmannGibbsObserver> observers;
  observers.reserve(2 * static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const LatticeFunction ljg = op.apply_axis(j, g);
    LatticeFunction w1(op.lattice_ptr());
    for (std::size_t i = 0; i < w1.size(); ++i)
      w1[i] = ljg[lat.up(j, i)] + ljg[i];
    observers.emplace_back(std::move(w1), CylinderFunction::h1(j), rho);
    observers.emplace_back(ljg, CylinderFunction::h2(j), rho);
  }
  std::vector<EventObserver*> handles;
  for (auto& o : observers) handles.push_back(&o);
  SimulateOptions opts;
  Trajectory clipped = traj;
  clipped.t_final = t;
  dyn.replay(clipped, handles, opts);

  double gap = 0.0;
  for (int j = 0; j < d; ++j) {
    gap += observers[static_cast<std::size_t>(2 * j)].integral() -
           observers[static_cast<std::size_t>(2 * j + 1)].integral();
  }
  return family.pair * gap;
}

double equivalence_of_ensembles_gap(const CylinderFunction& f, int dim, int n) {
  double m = 1.0;
  for (int j = 0; j < dim; ++j) m *= static_cast<double>(n);
  if (m > 1048576.0)
    throw std::invalid_argument("equivalence of ensembles: N^d must be <= 2^20");
  switch (f.kind) {
    case CylinderFunction::Kind::kSite:
      return 0.0;  // both sides equal k / M exactly
    case CylinderFunction::Kind::kPairAdjacent:
    case CylinderFunction::Kind::kPairStraddle: {
      // E[eta(x) eta(y) | k] = k(k-1)/(M(M-1)) for distinct x, y
      double worst = 0.0;
      for (double k = 0.0; k <= m; k += 1.0) {
        const double conditional = k * (k - 1.0) / (m * (m - 1.0));
        const double canonical = (k / m) * (k / m);
        worst = std::max(worst, std::abs(conditional - canonical));
      }
      return worst;
    }
  }
  throw std::invalid_argument("equivalence of ensembles: unsupported cylinder function");
}

}  // namespace fluctlab
