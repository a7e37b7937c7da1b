#include "fluctlab/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fluctlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Right-hand-side family: the caller's f plus first harmonics per axis.
std::vector<LatticeFunction> rhs_family(const ContinuumFn& rhs, const LatticePtr& lat) {
  std::vector<LatticeFunction> out;
  out.push_back(restrict_to_lattice(rhs, lat));
  for (int j = 0; j < lat->dim(); ++j) {
    out.push_back(restrict_to_lattice(
        [j](std::span<const double> u) { return std::cos(2.0 * kPi * u[j]); }, lat));
    out.push_back(restrict_to_lattice(
        [j](std::span<const double> u) { return std::sin(2.0 * kPi * u[j]); }, lat));
  }
  return out;
}

double golden_min(const std::function<double(double)>& fn, double lo, double hi,
                  int iterations = 120) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = fn(x2);
    }
  }
  return 0.5 * (a + b);
}

struct FitProblem {
  const ConstantCoefficientSolver* spectral;
  double lambda;
  std::vector<std::vector<double>> rhs_modes;   // per rhs, plain l2 coefficients
  std::vector<std::vector<double>> sol_modes;   // mode transform of u_N per rhs
  std::size_t size;

  double objective(std::span<const double> coeff) const {
    double acc = 0.0;
    for (std::size_t r = 0; r < rhs_modes.size(); ++r) {
      const auto& fm = rhs_modes[r];
      const auto& um = sol_modes[r];
      for (std::size_t m = 0; m < fm.size(); ++m) {
        const double pred = fm[m] / (lambda + spectral->mode_eigenvalue_with(coeff, m));
        const double gap = pred - um[m];
        acc += gap * gap;
      }
    }
    return acc / static_cast<double>(size);  // <.,.>_N scale
  }
};

}  // namespace

EnvironmentField make_constant_field(int dim, int n, std::span<const double> diag) {
  EnvironmentField f;
  f.dim = dim;
  f.n = n;
  double theta = 1.0;
  for (double v : diag) theta = std::max({theta, v, 1.0 / v});
  f.theta = theta;
  const Lattice lat(dim, n);
  for (int j = 0; j < dim; ++j)
    f.a.emplace_back(lat.size(), diag[static_cast<std::size_t>(j)]);
  return f;
}

HomogenizeResult homogenize(const WFunction& wf, const EnvironmentSpec& spec,
                            double lambda, const ContinuumFn& rhs,
                            const std::vector<int>& n_list) {
  if (n_list.empty()) throw std::invalid_argument("homogenize: empty N list");
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw std::invalid_argument("homogenize: N list must be increasing");
  if (!(lambda > 0.0)) throw std::invalid_argument("homogenize: lambda must be > 0");

  const int d = wf.dim();
  HomogenizeResult result;
  result.n_list = n_list;

  for (int n : n_list) {
    const EnvironmentField field = sample_field(spec, d, n);
    const LatticeOperator op = assemble(wf, field);
    const LatticePtr lat = op.lattice_ptr();

    // unit-coefficient spectral basis of this (W, N); doubles as preconditioner
    ConstantCoefficientSolver spectral(wf, std::vector<double>(static_cast<std::size_t>(d), 1.0),
                                       lat);
    ConstantCoefficientSolver pre(wf, harmonic_mean_coefficients(field), lat);

    FitProblem fit;
    fit.spectral = &spectral;
    fit.lambda = lambda;
    fit.size = lat->size();
    for (const auto& f : rhs_family(rhs, lat)) {
      LatticeFunction u = solve_resolvent(op, lambda, f, pre);
      std::vector<double> fm, um;
      spectral.to_modes(f, fm);
      spectral.to_modes(u, um);
      fit.rhs_modes.push_back(std::move(fm));
      fit.sol_modes.push_back(std::move(um));
    }

    const double lo = 1.0 / field.theta;
    const double hi = field.theta;
    if (hi - lo < 1e-12) {
      // theta = 1 pins every coefficient to 1
      result.per_n.push_back(std::vector<double>(static_cast<std::size_t>(d), 1.0));
      result.fit_residual.push_back(
          fit.objective(std::vector<double>(static_cast<std::size_t>(d), 1.0)));
      result.condition = 1.0;
      continue;
    }

    // The fit is meaningful only when moving the coefficient across the
    // ellipticity bracket perturbs the predicted solution by more than the
    // solver tolerance; otherwise report the fit as ill-conditioned.
    {
      const double mid = 0.5 * (lo + hi);
      const std::vector<double> ones(static_cast<std::size_t>(d), 1.0);
      double max_sens = 0.0, max_scale = 0.0;
      for (const auto& fm : fit.rhs_modes) {
        for (std::size_t m = 0; m < fm.size(); ++m) {
          const double mu = spectral.mode_eigenvalue_with(ones, m);
          const double denom = lambda + mid * mu;
          max_scale = std::max(max_scale, std::abs(fm[m]) / denom);
          max_sens = std::max(max_sens, std::abs(fm[m]) * mu * (hi - lo) / (denom * denom));
        }
      }
      if (max_sens <= 1e-9 * max_scale)
        throw std::runtime_error(
            "homogenize: ill-conditioned fit, coefficient sensitivity " +
            std::to_string(max_sens / std::max(max_scale, 1e-300)) +
            " below solver tolerance at lambda " + std::to_string(lambda));
    }

    std::vector<double> coeff(static_cast<std::size_t>(d),
                              0.5 * (lo + hi));
    // coordinate descent; a single sweep suffices for d = 1
    const int sweeps = (d == 1) ? 1 : 4;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (int j = 0; j < d; ++j) {
        auto line = [&](double aj) {
          coeff[static_cast<std::size_t>(j)] = aj;
          return fit.objective(coeff);
        };
        coeff[static_cast<std::size_t>(j)] =
            std::clamp(golden_min(line, lo * (1.0 - 1e-9), hi * (1.0 + 1e-9)), lo, hi);
      }
    }

    // curvature diagnostics of the fit at the optimum
    const double base = fit.objective(coeff);
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = 0.0;
    for (int j = 0; j < d; ++j) {
      const double h = 1e-4 * coeff[static_cast<std::size_t>(j)];
      auto probe = coeff;
      probe[static_cast<std::size_t>(j)] += h;
      const double fp = fit.objective(probe);
      probe[static_cast<std::size_t>(j)] -= 2.0 * h;
      const double fm = fit.objective(probe);
      const double curv = (fp - 2.0 * base + fm) / (h * h);
      cmin = std::min(cmin, curv);
      cmax = std::max(cmax, curv);
    }
    if (!(cmin > 0.0))
      throw std::runtime_error("homogenize: ill-conditioned fit, curvature ratio " +
                               std::to_string(cmax / std::max(cmin, 1e-300)));

    result.per_n.push_back(coeff);
    result.fit_residual.push_back(base);
    result.condition = cmax / cmin;
  }
  result.a_eff.diag = result.per_n.back();
  return result;
}

EnergyReport energy_convergence(const WFunction& wf, const EnvironmentSpec& spec,
                                double lambda, const ContinuumFn& rhs,
                                const std::vector<int>& n_list) {
  const HomogenizeResult hom = homogenize(wf, spec, lambda, rhs, n_list);
  const int d = wf.dim();

  EnergyReport report;
  report.n_list = n_list;
  report.a_eff = hom.a_eff.diag;

  for (int n : n_list) {
    const EnvironmentField field = sample_field(spec, d, n);
    const LatticeOperator op = assemble(wf, field);
    const LatticePtr lat = op.lattice_ptr();
    const LatticeFunction f = restrict_to_lattice(rhs, lat);

    const LatticeFunction u_n = solve_resolvent(op, lambda, f);
    ConstantCoefficientSolver limit(wf, hom.a_eff.diag, lat);
    const LatticeFunction u_0 = limit.solve(lambda, f);

    const LatticeOperator op_limit =
        assemble(wf, make_constant_field(d, n, hom.a_eff.diag));

    report.l2_random.push_back(inner_product(u_n, u_n));
    report.l2_limit.push_back(inner_product(u_0, u_0));
    report.l2_gap.push_back(std::abs(report.l2_random.back() - report.l2_limit.back()));
    report.energy_random.push_back(op.w_gradient_energy(u_n));
    report.energy_limit.push_back(op_limit.w_gradient_energy(u_0));
    report.energy_gap.push_back(
        std::abs(report.energy_random.back() - report.energy_limit.back()));
  }
  return report;
}

}  // namespace fluctlab
