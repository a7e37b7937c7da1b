#pragma once

// Resolvent solves (lambda - L_N) u = f by conjugate gradients, preconditioned
// with the constant-coefficient operator at the per-axis harmonic-mean
// coefficient. The preconditioner removes the N^2 stiffness of the stencil;
// the remaining iteration count depends only on theta and the jump contrast.

#include <stdexcept>

#include "fluctlab/operators.hpp"
#include "fluctlab/spectral.hpp"

namespace fluctlab {

struct SolverError : std::runtime_error {
  double residual;
  SolverError(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
};

struct SolveOptions {
  double rel_tol = 1e-12;
  int max_iterations = 2000;
};

// Per-axis harmonic means of the environment (series conductance).
std::vector<double> harmonic_mean_coefficients(const EnvironmentField& field);

LatticeFunction solve_resolvent(const LatticeOperator& op, double lambda,
                                const LatticeFunction& f,
                                const SolveOptions& opts = {});

// Variant reusing a prebuilt preconditioner across many right-hand sides.
LatticeFunction solve_resolvent(const LatticeOperator& op, double lambda,
                                const LatticeFunction& f,
                                const ConstantCoefficientSolver& preconditioner,
                                const SolveOptions& opts = {});

}  // namespace fluctlab
