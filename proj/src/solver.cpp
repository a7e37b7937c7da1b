#include "fluctlab/solver.hpp"

#include <cmath>

namespace fluctlab {

std::vector<double> harmonic_mean_coefficients(const EnvironmentField& field) {
  std::vector<double> out(static_cast<std::size_t>(field.dim));
  for (int j = 0; j < field.dim; ++j) {
    const auto& aj = field.a[static_cast<std::size_t>(j)];
    double inv = 0.0;
    for (double v : aj) inv += 1.0 / v;
    out[static_cast<std::size_t>(j)] = static_cast<double>(aj.size()) / inv;
  }
  return out;
}

LatticeFunction solve_resolvent(const LatticeOperator& op, double lambda,
                                const LatticeFunction& f, const SolveOptions& opts) {
  ConstantCoefficientSolver pre(op.w(), harmonic_mean_coefficients(op.environment()),
                                op.lattice_ptr());
  return solve_resolvent(op, lambda, f, pre, opts);
}

LatticeFunction solve_resolvent(const LatticeOperator& op, double lambda,
                                const LatticeFunction& f,
                                const ConstantCoefficientSolver& pre,
                                const SolveOptions& opts) {
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_resolvent: lambda must be > 0");
  const std::size_t size = f.size();
  if (size != op.lattice().size())
    throw std::invalid_argument("solve_resolvent: rhs lattice mismatch");

  auto apply_system = [&](const LatticeFunction& x) {
    LatticeFunction lx = op.apply(x);
    for (std::size_t i = 0; i < size; ++i) lx[i] = lambda * x[i] - lx[i];
    return lx;
  };

  double f_norm2 = 0.0;
  double f_inf = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    f_norm2 += f[i] * f[i];
    f_inf = std::max(f_inf, std::abs(f[i]));
  }
  LatticeFunction u(op.lattice_ptr());
  if (f_norm2 == 0.0) return u;
  const double f_norm = std::sqrt(f_norm2);

  LatticeFunction r = f;
  LatticeFunction z = pre.solve(lambda, r);
  LatticeFunction p = z;
  double rz = 0.0;
  for (std::size_t i = 0; i < size; ++i) rz += r[i] * z[i];

  double res_norm = f_norm;
  for (int it = 0; it < opts.max_iterations; ++it) {
    LatticeFunction ap = apply_system(p);
    double p_ap = 0.0;
    for (std::size_t i = 0; i < size; ++i) p_ap += p[i] * ap[i];
    const double alpha = rz / p_ap;
    double r2 = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      u[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      r2 += r[i] * r[i];
    }
    res_norm = std::sqrt(r2);
    if (res_norm <= opts.rel_tol * f_norm) break;
    z = pre.solve(lambda, r);
    double rz_new = 0.0;
    for (std::size_t i = 0; i < size; ++i) rz_new += r[i] * z[i];
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < size; ++i) p[i] = z[i] + beta * p[i];
  }
  if (res_norm > opts.rel_tol * f_norm)
    throw SolverError("solve_resolvent: no convergence after " +
                          std::to_string(opts.max_iterations) +
                          " iterations, relative residual " +
                          std::to_string(res_norm / f_norm),
                      res_norm / f_norm);

  // contract check in the sup norm
  LatticeFunction check = apply_system(u);
  double gap = 0.0;
  for (std::size_t i = 0; i < size; ++i) gap = std::max(gap, std::abs(check[i] - f[i]));
  if (gap > 1e-9 * f_inf)
    throw SolverError("solve_resolvent: sup-norm residual above contract", gap / f_inf);
  return u;
}

}  // namespace fluctlab
