#pragma once

// Numerical homogenization of the random environment: fit the diagonal
// constant-coefficient operator (same W) whose resolvent solution is closest
// in <.,.>_N to the random-coefficient solution over a small family of
// right-hand sides, per N. The paper defines homogenization through resolvent
// convergence, so the fit is performed in solution space rather than through
// cell problems; the 1-D harmonic-mean closed form pins correctness.

#include <functional>
#include <span>
#include <vector>

#include "fluctlab/solver.hpp"

namespace fluctlab {

struct HomogenizedMatrix {
  std::vector<double> diag;  // a_11 .. a_dd, each within [theta^-1, theta]
};

struct HomogenizeResult {
  HomogenizedMatrix a_eff;                 // fit at the largest N
  std::vector<int> n_list;
  std::vector<std::vector<double>> per_n;  // fitted diagonal per N
  std::vector<double> fit_residual;        // least-squares objective per N
  double condition = 1.0;                  // curvature ratio of the final fit
};

HomogenizeResult homogenize(const WFunction& wf, const EnvironmentSpec& spec,
                            double lambda, const ContinuumFn& rhs,
                            const std::vector<int>& n_list);

struct EnergyReport {
  std::vector<int> n_list;
  std::vector<double> a_eff;
  std::vector<double> l2_random, l2_limit, l2_gap;
  std::vector<double> energy_random, energy_limit, energy_gap;
};

// Prop.-4.2-style diagnostics: N^{-d} sum u_N^2 and the weighted W-gradient
// energy of u_N per N, against the same functionals of the constant-coefficient
// solution u_0 with the fitted matrix.
EnergyReport energy_convergence(const WFunction& wf, const EnvironmentSpec& spec,
                                double lambda, const ContinuumFn& rhs,
                                const std::vector<int>& n_list);

EnvironmentField make_constant_field(int dim, int n, std::span<const double> diag);

}  // namespace fluctlab
