#pragma once

// Exact spectral simulation of the limiting generalized Ornstein-Uhlenbeck
// process dY = phi'(rho) grad A grad_W Y dt + sqrt(2 chi phi' A) dN, and the
// statistical comparison of empirical fluctuation fields against it.
//
// The limit lives on a reference grid carrying the homogenized
// constant-coefficient operator. Mode coefficients evolve as independent
// scalar OU processes with the exact transition
//   Y^k(t+D) = e^{-phi' a_k D} Y^k(t) + Normal(0, chi (1 - e^{-2 phi' a_k D})),
// started from the stationary law Normal(0, chi); there is no
// time-discretization error.

#include <string>
#include <vector>

#include "fluctlab/fluctuations.hpp"
#include "fluctlab/spectral.hpp"

namespace fluctlab {

struct OUParams {
  double rho = 0.5;
  double b = 0.0;
  double chi = 0.25;        // rho (1 - rho)
  double phi_prime = 1.0;   // 1 + 2 b rho
  HomogenizedMatrix a_eff;
  EigenBasis basis;         // modes of -grad A grad_W at the reference grid
  int n_ref = 0;

  static OUParams build(double rho, double b, const HomogenizedMatrix& a_eff,
                        const WFunction& wf, int dim, int n_ref, int k_modes);
};

// Mode coefficients <G, phi_k>_N on the reference grid; throws when the
// truncated basis misses more than `coverage_tol` of ||G||^2.
std::vector<double> mode_coefficients(const OUParams& params, const LatticeFunction& g,
                                      double coverage_tol = 1e-6);

// Stationary-start exact simulation sampled at `times`; one replica.
FieldSeries ou_simulate(const OUParams& params, std::span<const LatticeFunction> g_list,
                        std::span<const std::string> labels,
                        std::span<const double> times, std::uint64_t seed);

// E[Y_0(G) Y_0(H)] = chi <G,H> on the reference grid.
double stationary_covariance(const OUParams& params, const LatticeFunction& g,
                             const LatticeFunction& h);

// Stationary autocovariance E[Y_t(G) Y_0(G)] = chi sum_k <G,phi_k>^2 e^{-phi' a_k t}.
double time_correlation(const OUParams& params, const LatticeFunction& g, double t);

// Spectral form of the driving-martingale quadratic variation per unit time:
// sum_k a_k <G,phi_k>^2 (equals the homogenized W-gradient energy of G).
double noise_qv_spectral(const OUParams& params, const LatticeFunction& g);

struct CompareRow {
  std::string label;
  double t = 0.0;
  double lag = 0.0;
  std::string stat;
  double value = 0.0;
  double expected = 0.0;
  double z = 0.0;
};

struct CompareReport {
  std::vector<CompareRow> rows;

  double max_abs_z() const;
  double max_abs_z(const std::string& stat) const;
  bool all_within(double z_max) const { return max_abs_z() <= z_max; }
};

// z-scores of empirical mean / variance / lagged autocovariance / Gaussianity
// diagnostics of Y_t(G) against the OU law. All series must share the
// parameter pair (rho, b) with `params`.
CompareReport compare(std::span<const FieldSeries> empirical, const OUParams& params,
                      std::span<const LatticeFunction> g_list);

}  // namespace fluctlab
