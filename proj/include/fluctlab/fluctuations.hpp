#pragma once

// Density-fluctuation fields Y_t^N(G), corrected fields Y_t^{N,lambda},
// pathwise Dynkin martingales with quadratic variation, the Boltzmann-Gibbs
// statistic and the equivalence-of-ensembles closed forms.
//
// All time integrals are accumulated exactly between events: rates are
// piecewise constant along the trajectory, so there is no time-discretization
// bias in the martingale tests.

#include <string>
#include <vector>

#include "fluctlab/dynamics.hpp"
#include "fluctlab/homogenize.hpp"

namespace fluctlab {

// --- test functions ---------------------------------------------------------

struct TestFunction {
  std::string label;
  ContinuumFn fn;

  LatticeFunction restriction(const LatticePtr& lat) const {
    return restrict_to_lattice(fn, lat);
  }
  // max over grid bonds of |d^N_W G|; finite uniformly in N for G in S_W.
  double max_w_gradient(const WFunction& wf, const LatticePtr& lat) const;
};

TestFunction tf_constant(double value = 1.0);
// sqrt(2) cos(2 pi k u_axis) and sqrt(2) sin(2 pi k u_axis), L^2-normalized.
TestFunction tf_cos(int axis, int freq);
TestFunction tf_sin(int axis, int freq);
// Labels: "const", "cos<k>", "sin<k>" (axis-0), e.g. "cos1".
std::vector<TestFunction> test_function_set(std::span<const std::string> labels);

// --- fields -----------------------------------------------------------------

// Y(G) = N^{-d/2} sum_x G(x/N) [eta(x) - rho].
double field_value(const Configuration& cfg, const LatticeFunction& g, double rho);

// Lattice solution G_N^lambda of
//   lambda G_N^l - L_N G_N^l = lambda G - grad A grad_W G,
// with the right side built from the constant-coefficient operator at the
// same N applied to the restriction of G.
LatticeFunction corrected_test_function(const LatticeFunction& g, double lambda,
                                        const LatticeOperator& op,
                                        const HomogenizedMatrix& a_eff);

// t * 2 chi(rho) phi'(rho) * N^{1-d} sum_j sum_x a_j (d^N_{W_j} G)^2 DW_j.
double qv_expectation(const LatticeFunction& g, const WFunction& wf,
                      const EnvironmentField& field, double rho,
                      const RateFamily& family, double t);

// Per-replica sampled series of Y_t(G) for a set of test functions.
struct FieldSeries {
  std::vector<std::string> labels;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[g][time index]
  double rho = 0.0;
  double b = 0.0;
  std::uint64_t replica = 0;
};

// Observer recording Y_t(G) at the requested sample times.
class FieldObserver : public EventObserver {
 public:
  FieldObserver(std::vector<LatticeFunction> g, std::vector<std::string> labels, double rho);
  void at_sample(double t, const ExclusionDynamics& dyn) override;
  FieldSeries take_series();

 private:
  std::vector<LatticeFunction> g_;
  std::vector<std::string> labels_;
  double rho_;
  FieldSeries series_;
};

// --- martingales ------------------------------------------------------------

struct MartingalePath {
  std::vector<double> times;
  std::vector<double> y;   // Y_t(G)
  std::vector<double> m;   // M_t = Y_t - Y_0 - int_0^t N^2 L_N Y_s(G) ds
  std::vector<double> qv;  // <M>_t
};

// Streaming computation of M_t and <M>_t. The drift sum
//   D(eta) = sum_{active bonds} r(x,j) dY(x,j)
// and the QV integrand Q(eta) = sum r (dY)^2 are maintained incrementally
// over the affected-bond sets and re-synced at every sample.
class MartingaleObserver : public EventObserver {
 public:
  MartingaleObserver(LatticeFunction g, double rho);
  void attach(const ExclusionDynamics& dyn) override;
  void advance_to(double t) override;
  void before_exchange(const ExclusionDynamics& dyn, Bond b,
                       std::span<const Bond> affected) override;
  void after_exchange(const ExclusionDynamics& dyn, Bond b,
                      std::span<const Bond> affected) override;
  void at_sample(double t, const ExclusionDynamics& dyn) override;

  const MartingalePath& path() const { return path_; }
  double current_m() const { return y_ - y0_ - drift_integral_; }
  double current_qv() const { return qv_integral_; }

 private:
  double bond_dy(const ExclusionDynamics& dyn, Bond b) const;
  void rebuild_sums(const ExclusionDynamics& dyn);

  LatticeFunction g_;
  double rho_;
  double scale_ = 1.0;  // N^{-d/2}
  double y0_ = 0.0, y_ = 0.0;
  double drift_sum_ = 0.0, qv_sum_ = 0.0;
  double drift_integral_ = 0.0, qv_integral_ = 0.0;
  double t_last_ = 0.0;
  std::uint64_t updates_ = 0;
  MartingalePath path_;
};

// Replays a recorded trajectory through a MartingaleObserver.
MartingalePath martingale_path(const Trajectory& traj, const WFunction& wf,
                               const EnvironmentField& field, const RateFamily& family,
                               const LatticeFunction& g, double rho,
                               std::span<const double> sample_times);

// --- Boltzmann-Gibbs --------------------------------------------------------

// Local polynomial cylinder functions with analytic psi(rho) = E_{nu_rho}[f].
struct CylinderFunction {
  enum class Kind { kSite, kPairAdjacent, kPairStraddle };
  Kind kind = Kind::kSite;
  int axis = 0;

  static CylinderFunction site() { return {Kind::kSite, 0}; }
  static CylinderFunction h1(int axis) { return {Kind::kPairAdjacent, axis}; }
  static CylinderFunction h2(int axis) { return {Kind::kPairStraddle, axis}; }

  double psi(double rho) const { return kind == Kind::kSite ? rho : rho * rho; }
  double dpsi(double rho) const { return kind == Kind::kSite ? 1.0 : 2.0 * rho; }
  // tau_x f evaluated in cfg.
  double eval(const Configuration& cfg, std::size_t x) const;
};

// Accumulates Z = int_0^t N^{-d/2} sum_x w(x) V_f(x, eta_s) ds with
// V_f(x,eta) = tau_x f - psi(rho) - psi'(rho) (eta(x) - rho).
class BoltzmannGibbsObserver : public EventObserver {
 public:
  BoltzmannGibbsObserver(LatticeFunction weights, CylinderFunction f, double rho);
  void attach(const ExclusionDynamics& dyn) override;
  void advance_to(double t) override;
  void before_exchange(const ExclusionDynamics& dyn, Bond b,
                       std::span<const Bond> affected) override;
  void after_exchange(const ExclusionDynamics& dyn, Bond b,
                      std::span<const Bond> affected) override;
  void at_sample(double t, const ExclusionDynamics& dyn) override;

  double integral() const { return integral_; }

 private:
  double term(const Configuration& cfg, std::size_t x) const;
  void collect_sites(const ExclusionDynamics& dyn, Bond b);
  void rebuild_sum(const ExclusionDynamics& dyn);

  LatticeFunction weights_;
  CylinderFunction f_;
  double rho_;
  double scale_ = 1.0;
  double sum_ = 0.0;
  double integral_ = 0.0;
  double t_last_ = 0.0;
  std::vector<std::size_t> sites_;  // scratch
};

// Z for f over one recorded trajectory, weights w(x) = G(x/N).
double bg_statistic(const Trajectory& traj, const WFunction& wf,
                    const EnvironmentField& field, const RateFamily& family,
                    const LatticeFunction& g, const CylinderFunction& f, double rho,
                    double t);

// Residual of the h-term replacement (tau_x h_{i,j}) - rho^2 -> 2 rho (eta(x)-rho)
// inside the drift expansion of N^2 L_N Y(G); one realization per trajectory.
double replacement_gap_statistic(const Trajectory& traj, const WFunction& wf,
                                 const EnvironmentField& field, const RateFamily& family,
                                 const LatticeFunction& g, double rho, double t);

// max_k | E_{nu}[f | sum eta = k] - E_{nu_{k/M}}[f] | by the exact
// hypergeometric moments, M = N^d.
double equivalence_of_ensembles_gap(const CylinderFunction& f, int dim, int n);

}  // namespace fluctlab
