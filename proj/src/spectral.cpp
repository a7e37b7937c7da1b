#include "fluctlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fluctlab {

namespace {

constexpr std::size_t kDenseLimit = 4096;

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

AxisSpectrum axis_spectrum(const WProfile& profile, int n) {
  const auto dw = profile.increments(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int up = (i + 1) % n;
    const double c = static_cast<double>(n) / dw[static_cast<std::size_t>(i)];
    // -T: bond (i, i+1) with conductance N/dw_i
    m(i, i) += c;
    m(up, up) += c;
    m(i, up) -= c;
    m(up, i) -= c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("axis_spectrum: eigensolve failed");
  AxisSpectrum sp;
  sp.alpha = es.eigenvalues();
  sp.v = es.eigenvectors();
  for (Eigen::Index k = 0; k < sp.v.cols(); ++k) fix_sign(sp.v.col(k));
  // clamp the tiny negative roundoff on the zero mode
  for (Eigen::Index k = 0; k < sp.alpha.size(); ++k)
    if (std::abs(sp.alpha[k]) < 1e-9 * std::max(1.0, sp.alpha[sp.alpha.size() - 1]))
      sp.alpha[k] = std::max(sp.alpha[k], 0.0);
  return sp;
}

LatticeFunction EigenBasis::mode(int k) const {
  LatticeFunction f(lat);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = vectors(static_cast<Eigen::Index>(i), k);
  return f;
}

double EigenBasis::coefficient(int k, const LatticeFunction& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += f[i] * vectors(static_cast<Eigen::Index>(i), k);
  return s / static_cast<double>(f.size());
}

EigenBasis eigendecompose(const LatticeOperator& op, int k_count) {
  const Lattice& lat = op.lattice();
  const auto size = lat.size();
  if (k_count < 1 || static_cast<std::size_t>(k_count) > size)
    throw std::invalid_argument("eigendecompose: K must lie in [1, N^d]");

  EigenBasis basis;
  basis.dim = lat.dim();
  basis.n = lat.n();
  basis.lat = op.lattice_ptr();
  basis.alpha.resize(static_cast<std::size_t>(k_count));
  basis.vectors.resize(static_cast<Eigen::Index>(size), k_count);

  const double scale = std::pow(static_cast<double>(size), 0.5);  // l2 -> <,>_N

  if (op.environment().constant_per_axis()) {
    // separable: tensor products of per-axis bases, eigenvalue sums
    const int d = lat.dim();
    const int n = lat.n();
    std::vector<AxisSpectrum> sp;
    std::vector<double> coeff(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      sp.push_back(axis_spectrum(op.w().axis(j), n));
      coeff[static_cast<std::size_t>(j)] = op.environment().a[static_cast<std::size_t>(j)].front();
    }
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto total_alpha = [&](std::size_t flat) {
      double acc = 0.0;
      std::size_t rem = flat;
      for (int j = 0; j < d; ++j) {
        acc += coeff[static_cast<std::size_t>(j)] *
               sp[static_cast<std::size_t>(j)].alpha[static_cast<Eigen::Index>(rem % n)];
        rem /= static_cast<std::size_t>(n);
      }
      return acc;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return total_alpha(a) < total_alpha(b);
    });
    for (int k = 0; k < k_count; ++k) {
      const std::size_t flat = order[static_cast<std::size_t>(k)];
      basis.alpha[static_cast<std::size_t>(k)] = total_alpha(flat);
      std::size_t rem = flat;
      std::vector<int> mode_idx(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) {
        mode_idx[static_cast<std::size_t>(j)] = static_cast<int>(rem % n);
        rem /= static_cast<std::size_t>(n);
      }
      for (std::size_t i = 0; i < size; ++i) {
        double prod = 1.0;
        for (int j = 0; j < d; ++j)
          prod *= sp[static_cast<std::size_t>(j)].v(lat.coord(i, j),
                                                    mode_idx[static_cast<std::size_t>(j)]);
        basis.vectors(static_cast<Eigen::Index>(i), k) = prod * scale;
      }
      fix_sign(basis.vectors.col(k));
    }
  } else {
    if (size > kDenseLimit)
      throw std::invalid_argument(
          "eigendecompose: dense path limited to N^d <= 4096 for "
          "non-separable environments");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size),
                                              static_cast<Eigen::Index>(size));
    for (std::size_t i = 0; i < size; ++i) {
      for (int j = 0; j < lat.dim(); ++j) {
        const double c = op.bond_conductance(j, i);
        const auto up = static_cast<Eigen::Index>(lat.up(j, i));
        const auto ii = static_cast<Eigen::Index>(i);
        m(ii, ii) += c;
        m(up, up) += c;
        m(ii, up) -= c;
        m(up, ii) -= c;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigendecompose: dense eigensolve failed");
    for (int k = 0; k < k_count; ++k) {
      basis.alpha[static_cast<std::size_t>(k)] = std::max(es.eigenvalues()[k], 0.0);
      basis.vectors.col(k) = es.eigenvectors().col(k) * scale;
      fix_sign(basis.vectors.col(k));
    }
  }

  const double res = eigen_residual(basis, op);
  if (res > 1e-8)
    throw std::runtime_error("eigendecompose: residual " + std::to_string(res) +
                             " exceeds tolerance");
  return basis;
}

double eigen_residual(const EigenBasis& basis, const LatticeOperator& op) {
  double worst = 0.0;
  for (int k = 0; k < basis.modes(); ++k) {
    LatticeFunction phi = basis.mode(k);
    LatticeFunction lphi = op.apply(phi);
    double acc = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const double r = -lphi[i] - basis.alpha[static_cast<std::size_t>(k)] * phi[i];
      acc += r * r;
    }
    const double res = std::sqrt(acc / static_cast<double>(phi.size())) /
                       std::max(1.0, basis.alpha[static_cast<std::size_t>(k)]);
    worst = std::max(worst, res);
  }
  return worst;
}

double sobolev_norm(const LatticeFunction& f, int order, const EigenBasis& basis) {
  if (order < 0) throw std::invalid_argument("sobolev_norm: order must be >= 0");
  const double f2 = inner_product(f, f);
  double captured = 0.0;
  double norm2 = 0.0;
  for (int k = 0; k < basis.modes(); ++k) {
    const double c = basis.coefficient(k, f);
    captured += c * c;
    const double w = basis.lambda(k) * static_cast<double>(k + 1);
    norm2 += c * c * std::pow(w, 2 * order);
  }
  if (f2 > 0.0 && captured < f2 * (1.0 - 1e-10))
    throw std::runtime_error("sobolev_norm: basis captures only " +
                             std::to_string(captured / f2) + " of ||f||^2");
  return std::sqrt(norm2);
}

ConstantCoefficientSolver::ConstantCoefficientSolver(const WFunction& wf,
                                                     std::vector<double> coeff,
                                                     LatticePtr lat)
    : lat_(std::move(lat)), coeff_(std::move(coeff)) {
  if (static_cast<int>(coeff_.size()) != lat_->dim())
    throw std::invalid_argument("constant solver: coefficient count mismatch");
  for (double c : coeff_)
    if (!(c > 0.0)) throw std::invalid_argument("constant solver: coefficients must be > 0");
  for (int j = 0; j < lat_->dim(); ++j) axes_.push_back(axis_spectrum(wf.axis(j), lat_->n()));
}

void ConstantCoefficientSolver::axis_contract(std::vector<double>& data, int axis,
                                              bool transpose) const {
  const int n = lat_->n();
  const auto& v = axes_[static_cast<std::size_t>(axis)].v;
  std::size_t stride = 1;
  for (int j = 0; j < axis; ++j) stride *= static_cast<std::size_t>(n);
  const std::size_t block = stride * static_cast<std::size_t>(n);
  std::vector<double> line(static_cast<std::size_t>(n));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::size_t base = 0; base < data.size(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (int i = 0; i < n; ++i)
        line[static_cast<std::size_t>(i)] =
            data[base + off + static_cast<std::size_t>(i) * stride];
      for (int r = 0; r < n; ++r) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
          acc += (transpose ? v(i, r) : v(r, i)) * line[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(r)] = acc;
      }
      for (int i = 0; i < n; ++i)
        data[base + off + static_cast<std::size_t>(i) * stride] =
            out[static_cast<std::size_t>(i)];
    }
  }
}

void ConstantCoefficientSolver::to_modes(const LatticeFunction& f,
                                         std::vector<double>& modes) const {
  modes = f.v;
  for (int j = 0; j < lat_->dim(); ++j) axis_contract(modes, j, /*transpose=*/true);
}

void ConstantCoefficientSolver::from_modes(const std::vector<double>& modes,
                                           LatticeFunction& f) const {
  if (!f.lat) f = LatticeFunction(lat_);
  f.v = modes;
  for (int j = 0; j < lat_->dim(); ++j) axis_contract(f.v, j, /*transpose=*/false);
}

double ConstantCoefficientSolver::mode_eigenvalue(std::size_t flat_mode) const {
  return mode_eigenvalue_with(coeff_, flat_mode);
}

double ConstantCoefficientSolver::mode_eigenvalue_with(std::span<const double> coeff,
                                                       std::size_t flat_mode) const {
  const int n = lat_->n();
  double acc = 0.0;
  std::size_t rem = flat_mode;
  for (int j = 0; j < lat_->dim(); ++j) {
    acc += coeff[static_cast<std::size_t>(j)] *
           axes_[static_cast<std::size_t>(j)].alpha[static_cast<Eigen::Index>(rem % n)];
    rem /= static_cast<std::size_t>(n);
  }
  return acc;
}

LatticeFunction ConstantCoefficientSolver::solve(double lambda,
                                                 const LatticeFunction& f) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("constant solver: lambda must be > 0");
  std::vector<double> modes;
  to_modes(f, modes);
  for (std::size_t m = 0; m < modes.size(); ++m)
    modes[m] /= (lambda + mode_eigenvalue(m));
  LatticeFunction u(lat_);
  from_modes(modes, u);
  return u;
}

}  // namespace fluctlab
